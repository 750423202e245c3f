#include "pstream/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <unordered_map>
#include <vector>

#include "pstream/errors.hpp"

namespace pstream {

namespace {

constexpr double kBudget = 1e7;

struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

struct Branch {
  std::int64_t value = 0;
  double prob = 0.0;
  bool bot = false;
};

enum class ItemKind : unsigned char { fixed_present, fixed_absent, variable };

}  // namespace

double OracleResult::expected_below(std::int64_t x) const {
  double acc = 0.0;
  for (const auto& [value, f] : expected_freq) {
    if (value >= x) break;
    acc += f;
  }
  return acc;
}

double OracleResult::expected_above(std::int64_t x) const {
  double acc = 0.0;
  for (auto it = expected_freq.upper_bound(x); it != expected_freq.end(); ++it) {
    acc += it->second;
  }
  return acc;
}

OracleResult enumerate_stream(const ProbStream& stream, std::optional<double> w) {
  const auto& items = stream.items();
  const std::size_t m = items.size();

  // Budget check over positive-probability branches only: certain items
  // (single tuple with p = 1, or certainly absent) do not multiply the
  // outcome space.
  double budget = 1.0;
  for (const ProbItem& item : items) {
    std::size_t branches = item.tuple_count() + (item.p_bot() > 0.0 ? 1 : 0);
    budget *= static_cast<double>(branches);
    if (budget > kBudget) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3g", budget);
      throw StreamError(Errc::enumeration_too_large,
                        "outcome count " + std::string(buf) + " exceeds budget 1e7");
    }
  }

  OracleResult res;

  // Classify items; fold certain items into fixed totals.
  std::vector<ItemKind> kind(m);
  std::vector<std::size_t> var_of(m, 0);
  std::vector<std::vector<Branch>> var_branches;
  std::int64_t z_fixed = 0;
  double y_fixed = 0.0;
  std::unordered_map<std::int64_t, std::int64_t> fixed_counts;
  std::unordered_map<std::int64_t, std::size_t> dense;

  for (std::size_t i = 0; i < m; ++i) {
    const ProbItem& item = items[i];
    std::size_t branches = item.tuple_count() + (item.p_bot() > 0.0 ? 1 : 0);
    if (branches == 1) {
      if (item.tuple_count() == 1) {
        kind[i] = ItemKind::fixed_present;
        ++z_fixed;
        y_fixed += static_cast<double>(item.tuples()[0].value);
        ++fixed_counts[item.tuples()[0].value];
      } else {
        kind[i] = ItemKind::fixed_absent;
      }
    } else {
      kind[i] = ItemKind::variable;
      var_of[i] = var_branches.size();
      std::vector<Branch> bl;
      bl.reserve(branches);
      for (const ProbTuple& t : item.tuples()) {
        bl.push_back(Branch{t.value, t.prob, false});
        dense.emplace(t.value, dense.size());
      }
      if (item.p_bot() > 0.0) bl.push_back(Branch{0, item.p_bot(), true});
      var_branches.push_back(std::move(bl));
    }
    for (const ProbTuple& t : item.tuples()) res.expected_freq[t.value] += t.prob;
  }

  // Per-outcome work only touches values reachable from variable items; the
  // rest of the fixed multiset contributes constants.
  const std::size_t k_slots = dense.size();
  std::vector<std::int64_t> fixed_in_dense(k_slots, 0);
  double distinct_base = 0.0;
  double rr_base = 0.0;
  for (const auto& [value, cnt] : fixed_counts) {
    auto it = dense.find(value);
    if (it != dense.end()) {
      fixed_in_dense[it->second] = cnt;
    } else {
      distinct_base += 1.0;
      rr_base += static_cast<double>(cnt) * static_cast<double>(cnt);
    }
  }
  for (std::size_t k = 0; k < k_slots; ++k) {
    if (fixed_in_dense[k] > 0) {
      distinct_base += 1.0;
      rr_base += static_cast<double>(fixed_in_dense[k]) *
                 static_cast<double>(fixed_in_dense[k]);
    }
  }
  // Parallel per-branch lookup tables for the hot loop.
  std::vector<std::vector<std::size_t>> var_dense(var_branches.size());
  std::vector<std::vector<std::int64_t>> var_value(var_branches.size());
  {
    std::size_t v = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (kind[i] != ItemKind::variable) continue;
      const ProbItem& item = items[i];
      var_dense[v].resize(item.tuple_count());
      var_value[v].resize(item.tuple_count());
      for (std::size_t t = 0; t < item.tuple_count(); ++t) {
        var_dense[v][t] = dense.at(item.tuples()[t].value);
        var_value[v][t] = item.tuples()[t].value;
      }
      ++v;
    }
  }

  // Band bounds, computed with the exact double expressions the DP uses.
  std::vector<std::int64_t> band_lo, band_hi;
  if (w) {
    band_lo.resize(m);
    band_hi.resize(m);
    double ez = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      ez += 1.0 - items[i].p_bot();
      band_lo[i] = static_cast<std::int64_t>(std::ceil(ez - *w));
      band_hi[i] = static_cast<std::int64_t>(std::floor(ez + *w));
    }
    res.has_pr_c_w = true;
  }

  const std::size_t n_var = var_branches.size();
  std::vector<std::size_t> idx(n_var, 0);
  std::vector<std::int64_t> var_counts(k_slots, 0);
  std::vector<std::size_t> touched;
  touched.reserve(k_slots);

  Kahan acc_prob, acc_count, acc_sum, acc_avg, acc_z1, acc_distinct, acc_rr, acc_band;

  while (true) {
    ++res.outcomes;
    double prob = 1.0;
    std::int64_t z = z_fixed;
    double y = y_fixed;
    for (std::size_t v = 0; v < n_var; ++v) {
      const Branch& b = var_branches[v][idx[v]];
      prob *= b.prob;
      if (!b.bot) {
        ++z;
        y += static_cast<double>(var_value[v][idx[v]]);
        std::size_t k = var_dense[v][idx[v]];
        if (var_counts[k] == 0) touched.push_back(k);
        ++var_counts[k];
      }
    }

    double distinct_o = distinct_base;
    double rr_o = rr_base;
    for (std::size_t k : touched) {
      std::int64_t f = fixed_in_dense[k];
      std::int64_t c = var_counts[k];
      if (f == 0) distinct_o += 1.0;
      rr_o += static_cast<double>((f + c) * (f + c) - f * f);
    }

    acc_prob.add(prob);
    acc_count.add(prob * static_cast<double>(z));
    acc_sum.add(prob * y);
    acc_distinct.add(prob * distinct_o);
    acc_rr.add(prob * rr_o);
    if (z >= 1) {
      acc_z1.add(prob);
      acc_avg.add(prob * (y / static_cast<double>(z)));
    }

    if (w) {
      std::int64_t zp = 0;
      bool ok = true;
      for (std::size_t i = 0; i < m; ++i) {
        switch (kind[i]) {
          case ItemKind::fixed_present: ++zp; break;
          case ItemKind::fixed_absent: break;
          case ItemKind::variable:
            if (!var_branches[var_of[i]][idx[var_of[i]]].bot) ++zp;
            break;
        }
        if (zp < band_lo[i] || zp > band_hi[i]) {
          ok = false;
          break;
        }
      }
      if (ok) acc_band.add(prob);
    }

    for (std::size_t k : touched) var_counts[k] = 0;
    touched.clear();

    bool wrapped = true;  // odometer increment, rightmost digit fastest
    for (std::size_t v = n_var; v-- > 0;) {
      if (++idx[v] < var_branches[v].size()) {
        wrapped = false;
        break;
      }
      idx[v] = 0;
    }
    if (wrapped) break;
  }

  res.total_prob = acc_prob.sum;
  res.count = acc_count.sum;
  res.sum = acc_sum.sum;
  res.distinct = acc_distinct.sum;
  res.repeat_rate = acc_rr.sum;
  res.pr_z_ge_1 = acc_z1.sum;
  res.avg_defined = acc_z1.sum > 0.0;
  res.avg = res.avg_defined ? acc_avg.sum : 0.0;
  if (w) res.pr_c_w = acc_band.sum;
  return res;
}

}  // namespace pstream
