#include "pstream/generator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pstream/errors.hpp"
#include "pstream/rng.hpp"

namespace pstream {

namespace {

constexpr std::int64_t kZipfMaxDomain = 10'000'000;

std::int64_t draw_zipf(SplitMix64& rng, const std::vector<double>& cum) {
  double u = rng.next_unit() * cum.back();
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  if (it == cum.end()) --it;
  return static_cast<std::int64_t>(it - cum.begin()) + 1;
}

}  // namespace

ProbStream generate(const GenSpec& spec) {
  if (spec.m < 1 || spec.n < 1 || spec.l < 1) {
    throw StreamError(Errc::infeasible_spec, "m, n, l must all be >= 1");
  }
  if (static_cast<std::int64_t>(spec.l) > spec.n) {
    throw StreamError(Errc::infeasible_spec,
                      "cannot draw " + std::to_string(spec.l) + " distinct values from [1, " +
                          std::to_string(spec.n) + "]");
  }
  if (!(spec.bot_mass >= 0.0) || !(spec.bot_mass < 1.0)) {
    throw StreamError(Errc::infeasible_spec, "bot_mass must lie in [0, 1)");
  }
  if (spec.skew == GenSpec::Skew::zipf) {
    if (!(spec.zipf_s >= 0.0)) {
      throw StreamError(Errc::infeasible_spec, "zipf exponent must be >= 0");
    }
    if (spec.n > kZipfMaxDomain) {
      throw StreamError(Errc::infeasible_spec,
                        "zipf skew needs a cumulative table; n must be <= 1e7");
    }
  }

  std::vector<double> zipf_cum;
  if (spec.skew == GenSpec::Skew::zipf) {
    zipf_cum.resize(static_cast<std::size_t>(spec.n));
    double acc = 0.0;
    for (std::int64_t j = 1; j <= spec.n; ++j) {
      acc += std::pow(static_cast<double>(j), -spec.zipf_s);
      zipf_cum[static_cast<std::size_t>(j - 1)] = acc;
    }
  }

  SplitMix64 rng(spec.seed);
  std::vector<ProbItem> items;
  items.reserve(spec.m);
  std::vector<std::int64_t> values;
  std::vector<double> cells;

  for (std::uint64_t i = 0; i < spec.m; ++i) {
    values.clear();
    std::unordered_set<std::int64_t> used;
    std::size_t attempts = 0;
    const std::size_t max_attempts = 64 * spec.l + 64;
    while (values.size() < spec.l && attempts < max_attempts) {
      ++attempts;
      std::int64_t v = spec.skew == GenSpec::Skew::zipf ? draw_zipf(rng, zipf_cum)
                                                        : rng.next_value(spec.n);
      if (used.insert(v).second) values.push_back(v);
    }
    // Heavy skew can make rejection slow; top up deterministically.
    for (std::int64_t v = 1; values.size() < spec.l; ++v) {
      if (used.insert(v).second) values.push_back(v);
    }
    std::sort(values.begin(), values.end());

    // Symmetric Dirichlet over l + 1 cells via normalized exponentials; the
    // last cell drives p_bot.
    cells.assign(spec.l + 1, 0.0);
    double total = 0.0;
    for (double& g : cells) {
      g = -std::log(rng.next_unit_open());
      if (!(g > 0.0)) g = 1e-12;
      total += g;
    }
    double p_bot = std::min(cells.back() / total * static_cast<double>(spec.l + 1) *
                                spec.bot_mass,
                            0.999);
    // Summed directly (not total - back) so a single-value item with
    // bot_mass 0 normalizes to probability exactly 1.
    double value_mass_raw = 0.0;
    for (std::size_t t = 0; t < spec.l; ++t) value_mass_raw += cells[t];
    std::vector<std::pair<std::int64_t, double>> tuples(spec.l);
    for (std::size_t t = 0; t < spec.l; ++t) {
      tuples[t] = {values[t], cells[t] / value_mass_raw * (1.0 - p_bot)};
    }
    items.push_back(validate_item(
        std::span<const std::pair<std::int64_t, double>>(tuples.data(), tuples.size())));
  }

  return ProbStream::make(std::move(items), spec.n);
}

}  // namespace pstream
