#include <doctest.h>

#include <cmath>

#include "sarsim/rng.hpp"

using namespace sarsim;

TEST_CASE("streams are deterministic per key") {
  rng::Stream a(rng::key(42, 1, 2, 3));
  rng::Stream b(rng::key(42, 1, 2, 3));
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());
  rng::Stream c(rng::key(42, 1, 2, 4));
  CHECK(rng::Stream(rng::key(42, 1, 2, 3)).next_u64() != c.next_u64());
}

TEST_CASE("key is order sensitive") {
  CHECK(rng::key(7, 1, 2) != rng::key(7, 2, 1));
  CHECK(rng::key(7, 1) != rng::key(8, 1));
}

TEST_CASE("uniform draws stay in range") {
  rng::Stream s(123);
  for (int i = 0; i < 1000; ++i) {
    double u = s.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    double o = s.next_open();
    CHECK(o > 0.0);
    CHECK(o <= 1.0);
    auto k = s.next_below(7);
    CHECK(k < 7);
  }
}

TEST_CASE("normal and exponential moments") {
  rng::Stream s(99);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0, esum = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = s.next_normal();
    sum += z;
    sum2 += z * z;
    esum += s.next_exponential();
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(esum / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("fnv1a distinguishes strings") {
  CHECK(rng::fnv1a("scene_a", 7) != rng::fnv1a("scene_b", 7));
  CHECK(rng::fnv1a("", 0) == 0xCBF29CE484222325ULL);
}
