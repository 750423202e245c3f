#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pstream/errors.hpp"

namespace pstream {

/// Absolute slack allowed when per-item probabilities should sum to 1 but
/// decimal-to-binary rounding leaves them slightly above.
inline constexpr double kTolParse = 1e-9;

/// One (value, probability) outcome of a stream item. value >= 1, prob in (0, 1].
struct ProbTuple {
  std::int64_t value = 0;
  double prob = 0.0;

  friend bool operator==(const ProbTuple&, const ProbTuple&) = default;
};

/// One stream element: a discrete distribution over domain values, with the
/// remaining mass implicitly assigned to the "no element" outcome.
class ProbItem {
 public:
  ProbItem() = default;

  const std::vector<ProbTuple>& tuples() const { return tuples_; }
  std::size_t tuple_count() const { return tuples_.size(); }
  bool empty() const { return tuples_.empty(); }

  /// Probability that this item realizes no element: max(0, 1 - sum of probs).
  double p_bot() const { return p_bot_; }

  /// Probability that this item realizes some element: min(1, sum of probs).
  double p_present() const { return 1.0 - p_bot_; }

  /// Mean value conditioned on the item being present. Throws AllBotItem when
  /// the present-probability is (numerically) zero.
  double cond_mean() const;

  friend bool operator==(const ProbItem&, const ProbItem&) = default;

 private:
  friend ProbItem validate_item(std::span<const std::pair<std::int64_t, double>> raw_tuples);

  std::vector<ProbTuple> tuples_;
  double p_bot_ = 1.0;
};

/// Validates raw (value, prob) pairs and builds a ProbItem. Rejects
/// non-positive values or probabilities, duplicate values within the item,
/// and probability sums above 1 + kTolParse.
ProbItem validate_item(std::span<const std::pair<std::int64_t, double>> raw_tuples);

inline ProbItem validate_item(std::initializer_list<std::pair<std::int64_t, double>> raw) {
  return validate_item(std::span<const std::pair<std::int64_t, double>>(raw.begin(), raw.size()));
}

inline double p_bot(const ProbItem& item) { return item.p_bot(); }
inline double cond_mean(const ProbItem& item) { return item.cond_mean(); }

/// A finite probabilistic stream over the integer domain [1, n]. Immutable
/// after construction; safe to share across threads.
class ProbStream {
 public:
  ProbStream() = default;

  /// Builds a stream from validated items. When explicit_n > 0 it becomes the
  /// domain size and every tuple value is checked against it; otherwise n is
  /// inferred as the maximum value present (0 for an all-empty stream).
  static ProbStream make(std::vector<ProbItem> items, std::int64_t explicit_n = 0);

  const std::vector<ProbItem>& items() const { return items_; }
  std::size_t m() const { return items_.size(); }
  std::int64_t n() const { return n_; }
  std::size_t l_max() const { return l_max_; }

  friend bool operator==(const ProbStream&, const ProbStream&) = default;

 private:
  std::vector<ProbItem> items_;
  std::int64_t n_ = 0;
  std::size_t l_max_ = 0;
};

/// Accuracy/confidence knobs for the randomized estimators.
struct ApproxParams {
  double epsilon = 0.1;
  double delta = 0.05;
  std::uint64_t seed = 0;

  ApproxParams() = default;
  ApproxParams(double eps, double del, std::uint64_t s);
};

}  // namespace pstream
