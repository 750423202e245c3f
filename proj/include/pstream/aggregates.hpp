#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "pstream/model.hpp"

namespace pstream {

/// Exact expected element count: sum of (1 - p_bot) over items.
double count(const ProbStream& stream);

/// Exact expected sum of realized values.
double sum(const ProbStream& stream);

/// Parameters of the two-regime AVG estimator: the long-stream threshold c
/// and the DP band half-width w = epsilon * c.
struct AvgConfig {
  double epsilon;
  double c;
  double w;

  AvgConfig(double epsilon, std::int64_t n, std::uint64_t m);
};

/// Banded dynamic program over the running element count Z.
///
/// After j items the window holds, for each integer z with
/// ceil(E[Z_j] - w) <= z <= floor(E[Z_j] + w) (intersected with [0, j]):
///   A_z = Pr[Z_j = z and the count stayed in the band at every prefix]
///   B_z = sum_y y * Pr[Y_j = y, Z_j = z, same band event]
/// Entries falling outside the window are dropped for good, which is what
/// makes the state O(w) instead of O(m).
///
/// Templated on the accumulator type so the same recurrence can be replayed
/// in extended precision for error measurements.
template <typename S>
class AvgDpT {
 public:
  explicit AvgDpT(double w) : w_(w) {
    a_.push_back(S(1));  // Z_0 = 0 with certainty
    b_.push_back(S(0));
  }

  void push(const ProbItem& item) {
    double pb = item.p_bot();
    S p_bot = S(pb);
    S q = S(1) - p_bot;
    S mu = S(0);
    if (pb < 1.0) mu = S(item.cond_mean());
    expected_z_ += q;
    ez_double_ += 1.0 - pb;
    ++j_;

    // Window bounds always use the double-precision running expectation —
    // the same expression the enumeration oracle evaluates — so band
    // membership agrees bit for bit across oracle, double DP, and any
    // extended-precision replay.
    std::int64_t lo = static_cast<std::int64_t>(std::ceil(ez_double_ - w_));
    std::int64_t hi = static_cast<std::int64_t>(std::floor(ez_double_ + w_));
    lo = std::max<std::int64_t>(lo, 0);
    hi = std::min<std::int64_t>(hi, static_cast<std::int64_t>(j_));

    std::vector<S> na, nb;
    if (lo <= hi) {
      std::size_t len = static_cast<std::size_t>(hi - lo + 1);
      na.assign(len, S(0));
      nb.assign(len, S(0));
      for (std::int64_t z = lo; z <= hi; ++z) {
        S a_stay = a_at(z);
        S a_step = a_at(z - 1);
        S b_stay = b_at(z);
        S b_step = b_at(z - 1);
        na[static_cast<std::size_t>(z - lo)] = a_step * q + a_stay * p_bot;
        nb[static_cast<std::size_t>(z - lo)] =
            p_bot * b_stay + q * (mu * a_step + b_step);
      }
    }
    a_ = std::move(na);
    b_ = std::move(nb);
    z_lo_ = lo;
    peak_entries_ = std::max(peak_entries_, a_.size());
  }

  /// Sum of stored A_z = Pr[count stayed in band at every prefix].
  S total_a() const {
    S t(0);
    for (S v : a_) t += v;
    return t;
  }

  /// The DP-regime AVG estimate: sum over z >= 1 of B_z / z.
  S ratio_sum() const {
    S t(0);
    for (std::int64_t z = std::max<std::int64_t>(z_lo_, 1);
         z < z_lo_ + static_cast<std::int64_t>(a_.size()); ++z) {
      t += b_at(z) / S(z);
    }
    return t;
  }

  S a_at(std::int64_t z) const {
    if (z < z_lo_ || z >= z_lo_ + static_cast<std::int64_t>(a_.size())) return S(0);
    return a_[static_cast<std::size_t>(z - z_lo_)];
  }

  S b_at(std::int64_t z) const {
    if (z < z_lo_ || z >= z_lo_ + static_cast<std::int64_t>(b_.size())) return S(0);
    return b_[static_cast<std::size_t>(z - z_lo_)];
  }

  S expected_z() const { return expected_z_; }
  double w() const { return w_; }
  std::uint64_t items_consumed() const { return j_; }
  std::size_t band_entries() const { return a_.size(); }
  std::size_t peak_band_entries() const { return peak_entries_; }

 private:
  double w_;
  std::vector<S> a_;
  std::vector<S> b_;
  std::int64_t z_lo_ = 0;
  S expected_z_ = S(0);
  double ez_double_ = 0.0;  // band decisions always made in double
  std::uint64_t j_ = 0;
  std::size_t peak_entries_ = 1;
};

using AvgDp = AvgDpT<double>;

/// Runs the banded DP over the whole stream.
AvgDp avg_dp(const ProbStream& stream, double w);

struct AvgResult {
  double value = 0.0;
  bool used_sum_over_count = false;  // regime tag: true = SUM/COUNT branch
  double count = 0.0;
  double sum = 0.0;
  double threshold_c = 0.0;
  double band_w = 0.0;
  std::size_t peak_band_entries = 0;
};

/// Two-regime AVG: both the exact SUM/COUNT scalars and the banded DP are
/// maintained over one pass; the branch is picked at finalization.
AvgResult avg_full(const ProbStream& stream, double epsilon);
double avg(const ProbStream& stream, double epsilon);

/// Exact DISTINCT = sum_j (1 - prod_i (1 - p_ij)); O(#touched values) memory.
double distinct_exact(const ProbStream& stream);

/// Derived parameters of the randomized DISTINCT estimator.
struct DistinctConfig {
  double epsilon;
  double delta;
  std::uint64_t c1;          // number of basic estimators
  double est_epsilon;        // per-estimator F0 accuracy: epsilon / 3
  double est_delta;          // per-estimator F0 confidence: delta / (2 c1)
  std::uint64_t seed;

  explicit DistinctConfig(const ApproxParams& params);
};

struct DistinctResult {
  double value = 0.0;
  bool shortcut = false;        // small-count branch: returned count directly
  std::uint64_t c1 = 0;
  std::size_t sketch_entries = 0;  // total stored entries across estimators
};

DistinctResult distinct_estimate_full(const ProbStream& stream,
                                      const ApproxParams& params);
double distinct_estimate(const ProbStream& stream, const ApproxParams& params);

/// Exact REPEAT-RATE = sum_j f_j^2 + sum_{i,j} p_ij (1 - p_ij), f_j = sum_i p_ij.
double repeat_rate_exact(const ProbStream& stream);

struct RepeatRateResult {
  double value = 0.0;
  double sketch_term = 0.0;  // estimate of sum_j f_j^2
  double exact_term = 0.0;   // sum of p (1 - p), accumulated exactly
  std::size_t counters = 0;
};

RepeatRateResult repeat_rate_full(const ProbStream& stream,
                                  const ApproxParams& params);
double repeat_rate(const ProbStream& stream, const ApproxParams& params);

struct MedianResult {
  std::int64_t value = 0;
  std::uint64_t induced_size = 0;  // |A'|: total copies inserted
  std::uint64_t rank = 0;          // queried rank ceil(|A'| / 2)
  std::size_t gk_triples = 0;
};

/// Approximate median: floor(2 m p / epsilon) copies of each tuple value go
/// into a rank summary run at epsilon / 4; the reported value is the one at
/// rank ceil(|A'| / 2).  m_hint overrides the stream's item count (any upper
/// bound on m preserves the guarantee); 0 means use stream.m().
MedianResult median_full(const ProbStream& stream, double epsilon,
                         std::uint64_t m_hint = 0);
std::int64_t median(const ProbStream& stream, double epsilon,
                    std::uint64_t m_hint = 0);

/// Exact two-sided test: E[#elements < x] and E[#elements > x] are both
/// at most (1/2 + epsilon) * ceil(count).
bool check_approx_median(const ProbStream& stream, std::int64_t x, double epsilon);

}  // namespace pstream
