#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pstream/detail/flat_set64.hpp"

namespace pstream {

/// Distinct-count sketch over the integer domain [1, n].
///
/// While the number of distinct inserted values stays at or below the
/// bucket capacity ceil(36/eps^2) the sketch simply keeps the exact set,
/// so small inputs are counted with no error at all.  Once the set
/// overflows, the exact set is exchanged for `reps` independent
/// level-sampled hash buckets: each repetition keeps only hashes whose
/// trailing-zero count reaches its current level, doubling the level
/// whenever the bucket overflows, and estimates |set| * 2^level.  The
/// reported value is the median across repetitions, floored by a running
/// maximum so the estimate never decreases as more values arrive.
class F0Sketch {
 public:
  F0Sketch(double epsilon, double delta, std::uint64_t seed, std::int64_t domain_n);

  /// Inserts value j in [1, n]; re-inserting a value never changes state.
  void insert(std::int64_t j);

  /// Current distinct-count estimate (exact in set mode, >= 0, monotone).
  double estimate() const;

  /// True once the sketch has switched from the exact set to sampling.
  bool sampling_active() const { return !lazy_; }

  std::size_t bucket_capacity() const { return cap_; }
  std::size_t repetitions() const { return reps_; }

  /// Number of stored hash/value entries, for state-size accounting.
  std::size_t stored_entries() const;

  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  std::int64_t domain_n() const { return domain_n_; }

 private:
  std::uint64_t rep_hash(std::size_t rep, std::int64_t j) const;
  void materialize();
  void rep_insert(std::size_t rep, std::uint64_t h);
  double raw_estimate() const;

  double epsilon_;
  double delta_;
  std::uint64_t seed_;
  std::int64_t domain_n_;
  std::size_t cap_;
  std::size_t reps_;

  bool lazy_ = true;
  detail::FlatSet64 seen_;  // exact values while in set mode

  std::vector<detail::FlatSet64> buckets_;
  std::vector<unsigned> levels_;
  double floor_ = 0.0;  // running max of estimates once sampling
};

}  // namespace pstream
