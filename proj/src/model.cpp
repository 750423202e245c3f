#include "pstream/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

namespace pstream {

double ProbItem::cond_mean() const {
  double total = 0.0;
  double weighted = 0.0;
  for (const ProbTuple& t : tuples_) {
    total += t.prob;
    weighted += static_cast<double>(t.value) * t.prob;
  }
  if (tuples_.empty() || total <= 0.0 || p_bot_ >= 1.0) {
    throw StreamError(Errc::all_bot_item, "conditional mean of an all-bot item");
  }
  return weighted / total;
}

ProbItem validate_item(std::span<const std::pair<std::int64_t, double>> raw_tuples) {
  ProbItem item;
  item.tuples_.reserve(raw_tuples.size());
  std::unordered_set<std::int64_t> seen;
  seen.reserve(raw_tuples.size() * 2);
  double total = 0.0;
  for (const auto& [value, prob] : raw_tuples) {
    if (!(prob > 0.0)) {
      throw StreamError(Errc::non_positive_prob,
                        "tuple (" + std::to_string(value) + ", " + std::to_string(prob) + ")");
    }
    if (value < 1) {
      throw StreamError(Errc::non_positive_value, "value " + std::to_string(value));
    }
    if (!seen.insert(value).second) {
      throw StreamError(Errc::duplicate_value,
                        "value " + std::to_string(value) + " repeats within one item");
    }
    total += prob;
    item.tuples_.push_back(ProbTuple{value, prob});
  }
  if (total > 1.0 + kTolParse) {
    throw StreamError(Errc::prob_sum_exceeds_one,
                      "item probabilities sum to " + std::to_string(total));
  }
  // Totals within parse tolerance of 1 snap to an exactly-zero bot mass, so
  // an item meant to be certain stays a single-outcome item instead of
  // acquiring a ~1e-16 phantom branch from decimal rounding.
  item.p_bot_ = total >= 1.0 - kTolParse ? 0.0 : 1.0 - total;
  return item;
}

ProbStream ProbStream::make(std::vector<ProbItem> items, std::int64_t explicit_n) {
  ProbStream s;
  std::int64_t max_value = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const ProbItem& item = items[i];
    s.l_max_ = std::max(s.l_max_, item.tuple_count());
    for (const ProbTuple& t : item.tuples()) {
      max_value = std::max(max_value, t.value);
      if (explicit_n > 0 && t.value > explicit_n) {
        throw StreamError(Errc::value_out_of_domain,
                          "item " + std::to_string(i + 1) + " has value " +
                              std::to_string(t.value) + " > n = " + std::to_string(explicit_n));
      }
    }
  }
  s.n_ = explicit_n > 0 ? explicit_n : max_value;
  s.items_ = std::move(items);
  return s;
}

ApproxParams::ApproxParams(double eps, double del, std::uint64_t s)
    : epsilon(eps), delta(del), seed(s) {
  if (!(eps > 0.0) || !(eps < 1.0) || !(del > 0.0) || !(del < 1.0)) {
    throw StreamError(Errc::parse_error, "epsilon and delta must lie strictly inside (0, 1)");
  }
}

}  // namespace pstream
