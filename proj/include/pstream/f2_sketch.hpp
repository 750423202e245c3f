#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pstream {

/// Second-moment (sum of squared weights) sketch with fractional updates.
///
/// Keeps an s1 x s2 grid of counters; counter (i, k) adds sign(i,k,j) * w on
/// every update(j, w), where the sign comes from a four-wise independent hash
/// (degree-3 polynomial over the Mersenne prime 2^61 - 1, low bit -> +/-1).
/// The estimate is the median over the s2 groups of the mean of the s1
/// squared counters in the group.  State is linear in the updates, so two
/// sketches built with the same parameters and seed can be merged by adding
/// counters.
class F2Sketch {
 public:
  F2Sketch(double epsilon, double delta, std::uint64_t seed, std::int64_t domain_n);

  /// Adds weight w (may be negative or fractional) to value j in [1, n].
  void update(std::int64_t j, double w);

  /// Current estimate of sum_j (total weight of j)^2.
  double estimate() const;

  /// Adds the counters of `other`; parameters and seed must match.
  void merge(const F2Sketch& other);

  std::size_t group_size() const { return s1_; }
  std::size_t group_count() const { return s2_; }
  std::size_t counter_count() const { return counters_.size(); }

  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  std::int64_t domain_n() const { return domain_n_; }
  std::uint64_t seed() const { return seed_; }

 private:
  double signed_weight(std::size_t counter, std::int64_t j, double w) const;

  double epsilon_;
  double delta_;
  std::uint64_t seed_;
  std::int64_t domain_n_;
  std::size_t s1_;
  std::size_t s2_;
  std::vector<double> counters_;        // s2 groups, s1 counters each
  std::vector<std::uint64_t> coeffs_;   // 4 polynomial coefficients per counter
};

}  // namespace pstream
