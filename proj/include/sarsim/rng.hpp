#pragma once

#include <cmath>
#include <cstdint>

namespace sarsim::rng {

// Counter-based deterministic randomness: every consumer derives a short-lived
// stream from a hashed key (seed, stage tag, pixel coordinates, ...) so that
// parallel execution over rows yields bit-identical results for any thread
// count.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Order-sensitive hash combine.
inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
  return splitmix64(s);
}

inline std::uint64_t key(std::uint64_t seed, std::uint64_t a) {
  return mix(seed, a);
}
inline std::uint64_t key(std::uint64_t seed, std::uint64_t a,
                         std::uint64_t b) {
  return mix(mix(seed, a), b);
}
inline std::uint64_t key(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                         std::uint64_t c) {
  return mix(mix(mix(seed, a), b), c);
}
inline std::uint64_t key(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                         std::uint64_t c, std::uint64_t d) {
  return mix(mix(mix(mix(seed, a), b), c), d);
}

/// FNV-1a over a byte string, for deriving seeds from scene ids.
inline std::uint64_t fnv1a(const char* data, size_t n) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Small sequential generator seeded by a hashed key.
class Stream {
public:
  explicit Stream(std::uint64_t k) : state_(k) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in (0, 1].
  double next_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    // 128-bit multiply keeps bias below 2^-64, negligible here.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Standard normal via Box-Muller (consumes two uniforms).
  double next_normal() {
    double u1 = next_open();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Exponential with unit rate.
  double next_exponential() { return -std::log(next_open()); }

private:
  std::uint64_t state_;
};

}  // namespace sarsim::rng
