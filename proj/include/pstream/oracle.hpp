#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "pstream/model.hpp"

namespace pstream {

/// Exact aggregate values obtained by enumerating every induced
/// deterministic stream, each weighted by its product probability.
struct OracleResult {
  double count = 0.0;
  double sum = 0.0;
  double avg = 0.0;          // E[(Y/Z) * 1[Z >= 1]]
  bool avg_defined = false;  // Pr[Z >= 1] > 0
  double pr_z_ge_1 = 0.0;
  double distinct = 0.0;
  double repeat_rate = 0.0;
  double total_prob = 0.0;   // enumerated mass; 1 up to rounding
  std::uint64_t outcomes = 0;

  bool has_pr_c_w = false;
  double pr_c_w = 0.0;  // Pr[count stayed within w of its mean at every prefix]

  /// f_j = sum_i p_ij per value, for exact median rank checks.
  std::map<std::int64_t, double> expected_freq;

  double expected_below(std::int64_t x) const;
  double expected_above(std::int64_t x) const;
};

/// Enumerates all outcome vectors of the stream.  The budget counts
/// positive-probability branches only — items that are certain (one tuple
/// with p = 1, or certainly absent) contribute a single branch — and refuses
/// beyond 1e7 enumerable outcomes.  When w is supplied, the per-prefix band
/// condition |Z_j - E[Z_j]| <= w is evaluated with exactly the same
/// double-precision bounds the banded DP uses.
OracleResult enumerate_stream(const ProbStream& stream,
                              std::optional<double> w = std::nullopt);

}  // namespace pstream
