#pragma once

#include <cstdint>

namespace pstream {

// All randomness in this library is derived from splitmix64 so that results
// are a pure function of the seeds and reproducible across platforms. The
// update equations (Steele, Lea, Flood 2014):
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// The same mixing function doubles as a stateless hash (mix64 / hash_combine)
// for counter-based draws, e.g. the per-(item, tuple, estimator) coin flips.

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Order-sensitive combiner for seeding sub-streams: hash_combine(a, b) and
/// hash_combine(b, a) differ.
inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
  return mix64(seed ^ (mix64(v) + 0x9E3779B97F4A7C15ULL + (seed << 6) + (seed >> 2)));
}

inline std::uint64_t hash3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return hash_combine(hash_combine(a, b), c);
}

/// u64 bits -> double in [0, 1), using the top 53 bits.
inline double bits_to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// u64 bits -> double in (0, 1]; safe as a log() argument.
inline double bits_to_unit_open(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_unit() { return bits_to_unit(next_u64()); }

  /// Uniform in (0, 1].
  double next_unit_open() { return bits_to_unit_open(next_u64()); }

  /// Uniform integer in [1, n]. n must be >= 1.
  std::int64_t next_value(std::int64_t n) {
    double u = next_unit();
    std::int64_t v = 1 + static_cast<std::int64_t>(u * static_cast<double>(n));
    return v > n ? n : v;
  }

 private:
  std::uint64_t state_;
};

}  // namespace pstream
