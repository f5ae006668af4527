#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sarsim/morphology.hpp"
#include "sarsim/rng.hpp"
#include "sarsim/tre.hpp"

using namespace sarsim;

namespace {

std::vector<double> masked_values(const IntensityRaster& img,
                                  const BinaryMask& m) {
  std::vector<double> v;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (m.get(x, y)) v.push_back(img(x, y));
  return v;
}

double lag1_autocorrelation(const DriftField& f) {
  double num = 0.0, den = 0.0;
  size_t n = 0;
  for (int y = 0; y < f.height; ++y)
    for (int x = 0; x + 1 < f.width; ++x) {
      num += f.at(x, y) * f.at(x + 1, y);
      ++n;
    }
  for (double v : f.values) den += v * v;
  return (num / n) / (den / f.values.size());
}

}  // namespace

TEST_CASE("histogram_match identities and ordering") {
  SUBCASE("equal multisets: sorted output equals sorted input") {
    IntensityRaster img(10, 2);
    BinaryMask omega(10, 2), ring(10, 2);
    rng::Stream s(3);
    for (int x = 0; x < 10; ++x) {
      float v = static_cast<float>(s.next_double());
      img(x, 0) = v;
      img(x, 1) = v;  // ring holds the same multiset
      omega.set(x, 0);
      ring.set(x, 1);
    }
    auto out = histogram_match(img, omega, ring);
    auto got = masked_values(out, omega);
    auto want = masked_values(img, omega);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i)
      CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-6));
  }

  SUBCASE("uniform 0..9 mapped to ring 100..109 lands in range, keeps order") {
    IntensityRaster img(10, 2);
    BinaryMask omega(10, 2), ring(10, 2);
    for (int x = 0; x < 10; ++x) {
      img(x, 0) = static_cast<float>(x);
      img(x, 1) = static_cast<float>(100 + x);
      omega.set(x, 0);
      ring.set(x, 1);
    }
    auto out = histogram_match(img, omega, ring);
    for (int x = 0; x < 10; ++x) {
      CHECK(out(x, 0) >= 100.0f);
      CHECK(out(x, 0) <= 109.0f);
      if (x > 0) CHECK(out(x, 0) >= out(x - 1, 0));
    }
    // pixels outside omega untouched
    CHECK(out(3, 1) == img(3, 1));
  }

  SUBCASE("equal values map together; mapping is monotone") {
    IntensityRaster img(8, 2);
    BinaryMask omega(8, 2), ring(8, 2);
    rng::Stream s(5);
    for (int x = 0; x < 8; ++x) {
      img(x, 0) = static_cast<float>(s.next_below(4));
      img(x, 1) = static_cast<float>(s.next_double() * 50.0);
      omega.set(x, 0);
      ring.set(x, 1);
    }
    img(2, 0) = img(6, 0) = 2.0f;
    auto out = histogram_match(img, omega, ring);
    CHECK(out(2, 0) == out(6, 0));
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b)
        if (img(a, 0) < img(b, 0)) CHECK(out(a, 0) <= out(b, 0));
  }

  SUBCASE("KS statistic never increases and drops below 0.1 on large omega") {
    const int w = 64, h = 64;
    IntensityRaster img(w, h);
    BinaryMask omega(w, h), ring(w, h);
    rng::Stream s(7);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        bool in_omega = x < w / 2;
        // different distributions on the two halves
        img(x, y) = static_cast<float>(in_omega ? 0.3 * s.next_open()
                                                : 1.0 + s.next_double());
        (in_omega ? omega : ring).set(x, y);
      }
    double before = ks_statistic(masked_values(img, omega),
                                 masked_values(img, ring));
    auto out = histogram_match(img, omega, ring);
    double after = ks_statistic(masked_values(out, omega),
                                masked_values(out, ring));
    CHECK(after <= before + 1e-12);
    CHECK(after <= 0.1);
  }

  SUBCASE("empty omega or ring rejected") {
    IntensityRaster img(4, 4, 1.0f);
    BinaryMask some(4, 4), none(4, 4);
    some.set(1, 1);
    CHECK_THROWS_AS(histogram_match(img, none, some), InputError);
    CHECK_THROWS_AS(histogram_match(img, some, none), InputError);
  }
}

TEST_CASE("anisotropic_diffusion behavior") {
  TREParams params;
  params.kappa = 15.0;  // used verbatim by this operation

  SUBCASE("constant image is a fixed point") {
    IntensityRaster img(16, 16, 4.0f);
    BinaryMask domain(16, 16, true);
    CHECK(anisotropic_diffusion(img, domain, params) == img);
  }

  SUBCASE("single step on a two-pixel domain matches hand computation") {
    IntensityRaster img(2, 1, {0.0f, 10.0f});
    BinaryMask domain(2, 1, true);
    TREParams p = params;
    p.diffusion_iterations = 1;
    p.diffusion_lambda = 0.25;
    auto out = anisotropic_diffusion(img, domain, p);
    const double g = std::exp(-std::pow(10.0 / 15.0, 2.0));  // ~0.6412
    CHECK(out(0, 0) == doctest::Approx(0.25 * g * 10.0).epsilon(1e-6));
    CHECK(out(1, 0) == doctest::Approx(10.0 - 0.25 * g * 10.0).epsilon(1e-6));
    CHECK(out(0, 0) == doctest::Approx(1.603).epsilon(1e-3));
    CHECK(out(1, 0) == doctest::Approx(8.397).epsilon(1e-3));
  }

  SUBCASE("conserves the domain sum and never extends extrema") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      auto img = sample_speckle(32, 32, 2, seed);
      BinaryMask m(32, 32);
      for (int y = 8; y < 24; ++y)
        for (int x = 8; x < 24; ++x) m.set(x, y);
      auto domain = band(m, 5);
      double before = 0.0, lo = 1e30, hi = -1e30;
      for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x)
          if (domain.get(x, y)) {
            before += img(x, y);
            lo = std::min<double>(lo, img(x, y));
            hi = std::max<double>(hi, img(x, y));
          }
      auto out = anisotropic_diffusion(img, domain, params);
      double after = 0.0;
      for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) {
          if (domain.get(x, y)) {
            after += out(x, y);
            CHECK(out(x, y) >= lo - 1e-6);
            CHECK(out(x, y) <= hi + 1e-6);
          } else {
            CHECK(out(x, y) == img(x, y));  // untouched outside the domain
          }
        }
      CHECK(std::abs(after - before) <= 1e-5 * std::abs(before));
    }
  }

  SUBCASE("rational conduction also smooths and conserves") {
    TREParams p = params;
    p.conduction = Conduction::Rational;
    auto img = sample_speckle(16, 16, 1, 9);
    BinaryMask domain(16, 16, true);
    auto out = anisotropic_diffusion(img, domain, p);
    double before = 0.0, after = 0.0;
    for (size_t i = 0; i < img.size(); ++i) {
      before += img.pixels()[i];
      after += out.pixels()[i];
    }
    CHECK(after == doctest::Approx(before).epsilon(1e-5));
    CHECK(out != img);
  }

  SUBCASE("invalid lambda rejected") {
    TREParams p = params;
    p.diffusion_lambda = 0.3;
    IntensityRaster img(4, 4, 1.0f);
    BinaryMask domain(4, 4, true);
    CHECK_THROWS_AS(anisotropic_diffusion(img, domain, p), InputError);
  }
}

TEST_CASE("sample_speckle statistics") {
  SUBCASE("L=4 moments on 1024x1024") {
    auto eta = sample_speckle(1024, 1024, 4, 12345);
    double sum = 0.0;
    for (float v : eta.pixels()) sum += v;
    const double mean = sum / eta.size();
    double var = 0.0;
    for (float v : eta.pixels()) var += (v - mean) * (v - mean);
    var /= static_cast<double>(eta.size() - 1);
    CHECK(std::abs(mean - 1.0) <= 0.003);
    CHECK(std::abs(var - 0.25) <= 0.005);
  }

  SUBCASE("L=1 marginal is Exp(1)") {
    auto eta = sample_speckle(1000, 1000, 1, 777);
    std::vector<double> sample(eta.pixels().begin(), eta.pixels().end());
    std::sort(sample.begin(), sample.end());
    // KS against the analytic CDF 1 - exp(-x)
    double ks = 0.0;
    const double n = static_cast<double>(sample.size());
    for (size_t i = 0; i < sample.size(); ++i) {
      double cdf = 1.0 - std::exp(-sample[i]);
      ks = std::max(ks, std::abs(cdf - (i + 1) / n));
      ks = std::max(ks, std::abs(cdf - i / n));
    }
    CHECK(ks <= 0.01);
  }

  SUBCASE("fixed seed is bit-identical") {
    auto a = sample_speckle(64, 64, 4, 3);
    auto b = sample_speckle(64, 64, 4, 3);
    CHECK(a == b);
    CHECK(a != sample_speckle(64, 64, 4, 4));
  }
}

TEST_CASE("sample_drift field statistics") {
  TREParams params;

  SUBCASE("standardized to zero mean, unit variance") {
    auto f = sample_drift(256, 256, params, 5);
    double sum = 0.0;
    for (double v : f.values) sum += v;
    const double mean = sum / f.values.size();
    double var = 0.0;
    for (double v : f.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(f.values.size());
    CHECK(std::abs(mean) <= 1e-6);
    CHECK(std::abs(std::sqrt(var) - 1.0) <= 1e-6);
  }

  SUBCASE("box 51 is heavily correlated, box 1 is white") {
    auto smooth = sample_drift(512, 512, params, 21);
    CHECK(lag1_autocorrelation(smooth) >= 0.9);
    TREParams white = params;
    white.drift_box = 1;
    auto iid = sample_drift(1024, 1024, white, 22);
    CHECK(std::abs(lag1_autocorrelation(iid)) <= 0.01);
  }
}

TEST_CASE("compose_pre_event") {
  SUBCASE("eta=1, alpha=0 is the identity") {
    auto img = sample_speckle(32, 32, 4, 1);
    IntensityRaster ones(32, 32, 1.0f);
    DriftField g{32, 32, std::vector<double>(32 * 32, 0.5)};
    CHECK(compose_pre_event(img, ones, g, 0.0) == img);
  }
  SUBCASE("single pixel hand case") {
    IntensityRaster ieq(1, 1, 2.0f), eta(1, 1, 0.5f);
    DriftField g{1, 1, {1.0}};
    auto out = compose_pre_event(ieq, eta, g, 0.05);
    CHECK(out(0, 0) == doctest::Approx(1.05).epsilon(1e-7));
  }
  SUBCASE("speckled constant keeps mean and ENL near L") {
    IntensityRaster ieq(512, 512, 100.0f);
    auto eta = sample_speckle(512, 512, 4, 9);
    DriftField g{512, 512, std::vector<double>(512 * 512, 0.0)};
    auto out = compose_pre_event(ieq, eta, g, 0.0);
    double sum = 0.0;
    for (float v : out.pixels()) sum += v;
    const double mean = sum / out.size();
    double var = 0.0;
    for (float v : out.pixels()) var += (v - mean) * (v - mean);
    var /= static_cast<double>(out.size() - 1);
    CHECK(mean == doctest::Approx(100.0).epsilon(0.01));
    CHECK(mean * mean / var == doctest::Approx(4.0).epsilon(0.10));
  }
}

TEST_CASE("tre_apply") {
  SUBCASE("degenerate omega with perturbations off is the identity") {
    auto img = sample_speckle(32, 32, 4, 31);
    BinaryMask omega(32, 32);
    TREParams p;
    p.enable_speckle = false;
    p.enable_drift = false;
    CHECK(tre_apply(img, omega, p, 7) == img);
  }

  SUBCASE("fixed seed is bit-identical") {
    auto img = sample_speckle(48, 48, 4, 33);
    BinaryMask omega(48, 48);
    for (int y = 16; y < 32; ++y)
      for (int x = 16; x < 32; ++x) omega.set(x, y);
    TREParams p;
    CHECK(tre_apply(img, omega, p, 9) == tre_apply(img, omega, p, 9));
  }

  SUBCASE("perturbations off touch only omega") {
    auto img = sample_speckle(48, 48, 4, 35);
    BinaryMask omega(48, 48);
    for (int y = 10; y < 24; ++y)
      for (int x = 10; x < 24; ++x) omega.set(x, y);
    TREParams p;
    p.enable_speckle = false;
    p.enable_drift = false;
    auto out = tre_apply(img, omega, p, 11);
    for (int y = 0; y < 48; ++y)
      for (int x = 0; x < 48; ++x)
        if (!omega.get(x, y)) CHECK(out(x, y) == img(x, y));
  }
}

TEST_CASE("sample_quantile and ks_statistic helpers") {
  std::vector<double> sorted = {1.0, 2.0, 3.0, 4.0};
  CHECK(sample_quantile(sorted, 0.0) == 1.0);
  CHECK(sample_quantile(sorted, 1.0) == 4.0);
  CHECK(sample_quantile(sorted, 0.5) == doctest::Approx(2.5));

  std::vector<double> a = {0.0, 1.0, 2.0};
  CHECK(ks_statistic(a, a) == 0.0);
  std::vector<double> b = {10.0, 11.0, 12.0};
  CHECK(ks_statistic(a, b) == 1.0);
}
