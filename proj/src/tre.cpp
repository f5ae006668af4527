#include "sarsim/tre.hpp"

#include <algorithm>
#include <cmath>

#include "sarsim/morphology.hpp"
#include "sarsim/rng.hpp"

namespace sarsim {

namespace {

constexpr std::uint64_t kTagSpeckle = 0x5C;
constexpr std::uint64_t kTagDrift = 0xD7;

int reflect_index(int i, int n) {
  // Symmetric reflection: ..., 1, 0 | 0, 1, ..., n-1 | n-1, n-2, ...
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

}  // namespace

void TREParams::validate() const {
  if (diffusion_lambda <= 0.0 || diffusion_lambda > 0.25)
    throw InputError("diffusion_lambda must lie in (0, 0.25]");
  if (looks < 1) throw InputError("looks must be >= 1");
  // box 1 means no smoothing (the i.i.d. field), kept legal for testing
  if (drift_box < 1 || drift_box % 2 == 0)
    throw InputError("drift_box must be odd and >= 1");
  if (drift_alpha < 0.0) throw InputError("drift_alpha must be >= 0");
  if (band_width < 1) throw InputError("band_width must be >= 1");
  if (ring_width < 1) throw InputError("ring_width must be >= 1");
  if (diffusion_iterations < 0)
    throw InputError("diffusion_iterations must be >= 0");
  if (kappa <= 0.0 || kappa_scale <= 0.0)
    throw InputError("kappa and kappa_scale must be positive");
}

double sample_quantile(const std::vector<double>& sorted, double q) {
  const size_t n = sorted.size();
  if (n == 0) throw InputError("quantile of empty sample");
  // Probability nodes (j+0.5)/n; with this convention, matching a
  // distribution against an identical multiset is the identity map.
  const double pos = q * n - 0.5;
  if (pos <= 0.0) return sorted.front();
  if (pos >= static_cast<double>(n - 1)) return sorted.back();
  const size_t j = static_cast<size_t>(pos);
  const double t = pos - static_cast<double>(j);
  return sorted[j] + t * (sorted[j + 1] - sorted[j]);
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InputError("KS of empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                             static_cast<double>(j) / b.size()));
  }
  return d;
}

IntensityRaster histogram_match(const IntensityRaster& image,
                                const BinaryMask& omega,
                                const BinaryMask& ring) {
  const int w = image.width(), h = image.height();
  if (omega.width() != w || omega.height() != h || ring.width() != w ||
      ring.height() != h)
    throw InputError("mask dimension mismatch");
  std::vector<double> omega_vals, ring_vals;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (omega.get(x, y) && ring.get(x, y))
        throw InputError("omega and ring must be disjoint");
      if (omega.get(x, y)) omega_vals.push_back(image(x, y));
      if (ring.get(x, y)) ring_vals.push_back(image(x, y));
    }
  if (omega_vals.empty()) throw InputError("omega is empty");
  if (ring_vals.empty()) throw InputError("ring is empty");
  std::sort(omega_vals.begin(), omega_vals.end());
  std::sort(ring_vals.begin(), ring_vals.end());
  const double n = static_cast<double>(omega_vals.size());

  IntensityRaster out = image;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!omega.get(x, y)) continue;
      const double v = image(x, y);
      // Mid-rank empirical CDF within omega.
      const auto lo = std::lower_bound(omega_vals.begin(), omega_vals.end(), v);
      const auto hi = std::upper_bound(lo, omega_vals.end(), v);
      const double rank = (static_cast<double>(lo - omega_vals.begin()) +
                           0.5 * static_cast<double>(hi - lo)) /
                          n;
      out(x, y) = static_cast<float>(sample_quantile(ring_vals, rank));
    }
  }
  return out;
}

IntensityRaster anisotropic_diffusion(const IntensityRaster& image,
                                      const BinaryMask& domain,
                                      const TREParams& params) {
  params.validate();
  const int w = image.width(), h = image.height();
  if (domain.width() != w || domain.height() != h)
    throw InputError("domain dimension mismatch");
  const double kappa = params.kappa;
  const double lambda = params.diffusion_lambda;
  const auto conduct = [&](double s) {
    const double r = s / kappa;
    return params.conduction == Conduction::Exponential
               ? std::exp(-r * r)
               : 1.0 / (1.0 + r * r);
  };

  IntensityRaster cur = image;
  IntensityRaster next = image;
  static const int dx[4] = {0, -1, 1, 0};
  static const int dy[4] = {-1, 0, 0, 1};
  for (int it = 0; it < params.diffusion_iterations; ++it) {
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!domain.get(x, y)) continue;
        double flux = 0.0;
        for (int k = 0; k < 4; ++k) {
          const int nx = x + dx[k], ny = y + dy[k];
          // No-flux boundary: only edges interior to the domain conduct, so
          // the domain sum is conserved up to accumulation round-off.
          if (!domain.in_bounds(nx, ny) || !domain.get(nx, ny)) continue;
          const double grad =
              static_cast<double>(cur(nx, ny)) - static_cast<double>(cur(x, y));
          flux += conduct(grad) * grad;
        }
        next(x, y) = static_cast<float>(cur(x, y) + lambda * flux);
      }
    }
    std::swap(cur, next);
  }
  return cur;
}

IntensityRaster sample_speckle(int width, int height, int looks,
                               std::uint64_t rng_seed) {
  if (looks < 1) throw InputError("looks must be >= 1");
  IntensityRaster out(width, height);
  const double inv_l = 1.0 / looks;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      rng::Stream s(rng::key(rng_seed, kTagSpeckle,
                             static_cast<std::uint64_t>(x),
                             static_cast<std::uint64_t>(y)));
      // Gamma(L, 1/L) with integer L: mean of L unit exponentials.
      double sum = 0.0;
      for (int i = 0; i < looks; ++i) sum += s.next_exponential();
      out(x, y) = static_cast<float>(sum * inv_l);
    }
  }
  return out;
}

DriftField sample_drift(int width, int height, const TREParams& params,
                        std::uint64_t rng_seed) {
  params.validate();
  const int r = params.drift_box / 2;
  std::vector<double> noise(static_cast<size_t>(width) * height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      rng::Stream s(rng::key(rng_seed, kTagDrift,
                             static_cast<std::uint64_t>(x),
                             static_cast<std::uint64_t>(y)));
      noise[static_cast<size_t>(y) * width + x] = s.next_normal();
    }

  // Separable box filter with reflected edges. Per-pixel sums run in a fixed
  // order so the result is thread-count independent.
  std::vector<double> tmp(noise.size());
  const double inv_box = 1.0 / params.drift_box;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double sum = 0.0;
      for (int d = -r; d <= r; ++d)
        sum += noise[static_cast<size_t>(y) * width + reflect_index(x + d, width)];
      tmp[static_cast<size_t>(y) * width + x] = sum * inv_box;
    }
  std::vector<double> smooth(noise.size());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double sum = 0.0;
      for (int d = -r; d <= r; ++d)
        sum += tmp[static_cast<size_t>(reflect_index(y + d, height)) * width + x];
      smooth[static_cast<size_t>(y) * width + x] = sum * inv_box;
    }

  // Serial reduction keeps standardization deterministic.
  double mean = 0.0;
  for (double v : smooth) mean += v;
  mean /= static_cast<double>(smooth.size());
  double var = 0.0;
  for (double v : smooth) var += (v - mean) * (v - mean);
  var /= static_cast<double>(smooth.size());
  const double inv_sd = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
  for (double& v : smooth) v = (v - mean) * inv_sd;

  return DriftField{width, height, std::move(smooth)};
}

IntensityRaster compose_pre_event(const IntensityRaster& i_eq,
                                  const IntensityRaster& speckle,
                                  const DriftField& drift, double alpha) {
  const int w = i_eq.width(), h = i_eq.height();
  if (speckle.width() != w || speckle.height() != h || drift.width != w ||
      drift.height != h)
    throw InputError("field dimension mismatch");
  IntensityRaster out(w, h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double v = static_cast<double>(i_eq(x, y)) *
                       static_cast<double>(speckle(x, y)) *
                       (1.0 + alpha * drift.at(x, y));
      out(x, y) = static_cast<float>(std::max(v, 0.0));
    }
  return out;
}

IntensityRaster tre_apply(const IntensityRaster& inpainted,
                          const BinaryMask& omega, const TREParams& params,
                          std::uint64_t rng_seed) {
  params.validate();
  IntensityRaster result = inpainted;

  if (omega.any()) {
    bool ring_degenerate = false;
    BinaryMask ring = exterior_ring(omega, params.ring_width, &ring_degenerate);
    if (!ring_degenerate) result = histogram_match(result, omega, ring);

    // The diffusion domain is the interior side of the boundary band so the
    // stage only ever modifies pixels inside omega.
    BinaryMask domain = mask_intersect(band(omega, params.band_width), omega);
    if (domain.any()) {
      TREParams diffusion = params;
      diffusion.kappa = params.kappa * params.kappa_scale;
      result = anisotropic_diffusion(result, domain, diffusion);
    }
  }

  if (params.enable_speckle || params.enable_drift) {
    const int w = result.width(), h = result.height();
    IntensityRaster eta =
        params.enable_speckle
            ? sample_speckle(w, h, params.looks, rng::mix(rng_seed, kTagSpeckle))
            : IntensityRaster(w, h, 1.0f);
    DriftField drift;
    double alpha = 0.0;
    if (params.enable_drift) {
      drift = sample_drift(w, h, params, rng::mix(rng_seed, kTagDrift));
      alpha = params.drift_alpha;
    } else {
      drift = DriftField{w, h,
                         std::vector<double>(static_cast<size_t>(w) * h, 0.0)};
    }
    if (params.perturb_scope == PerturbScope::Omega) {
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          if (!omega.get(x, y)) {
            eta(x, y) = 1.0f;
            drift.values[static_cast<size_t>(y) * w + x] = 0.0;
          }
    }
    result = compose_pre_event(result, eta, drift, alpha);
  }
  return result;
}

}  // namespace sarsim
