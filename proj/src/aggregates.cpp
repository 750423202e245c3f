#include "pstream/aggregates.hpp"

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "pstream/errors.hpp"
#include "pstream/f0_sketch.hpp"
#include "pstream/f2_sketch.hpp"
#include "pstream/gk_summary.hpp"
#include "pstream/rng.hpp"

namespace pstream {

double count(const ProbStream& stream) {
  double acc = 0.0;
  for (const ProbItem& item : stream.items()) acc += 1.0 - item.p_bot();
  return acc;
}

double sum(const ProbStream& stream) {
  double acc = 0.0;
  for (const ProbItem& item : stream.items()) {
    double pb = item.p_bot();
    if (pb < 1.0) acc += (1.0 - pb) * item.cond_mean();
  }
  return acc;
}

AvgConfig::AvgConfig(double epsilon_in, std::int64_t n, std::uint64_t m)
    : epsilon(epsilon_in) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw StreamError(Errc::parse_error, "avg: epsilon must lie in (0, 1)");
  }
  double nm = std::max(1.0, static_cast<double>(n) * static_cast<double>(m));
  c = 12.0 / (epsilon * epsilon) * std::log(10.0 * nm / epsilon);
  w = epsilon * c;
}

AvgDp avg_dp(const ProbStream& stream, double w) {
  if (!(w > 0.0)) {
    throw StreamError(Errc::parse_error, "avg_dp: band half-width must be > 0");
  }
  AvgDp dp(w);
  for (const ProbItem& item : stream.items()) dp.push(item);
  return dp;
}

AvgResult avg_full(const ProbStream& stream, double epsilon) {
  AvgConfig cfg(epsilon, stream.n(), stream.m());
  AvgDp dp(cfg.w);
  double cnt = 0.0;
  double sm = 0.0;
  for (const ProbItem& item : stream.items()) {
    double pb = item.p_bot();
    cnt += 1.0 - pb;
    if (pb < 1.0) sm += (1.0 - pb) * item.cond_mean();
    dp.push(item);
  }
  if (!(cnt > 0.0)) {
    throw StreamError(Errc::undefined_average,
                      "avg: every item is certainly absent; AVG undefined");
  }
  AvgResult res;
  res.count = cnt;
  res.sum = sm;
  res.threshold_c = cfg.c;
  res.band_w = cfg.w;
  res.peak_band_entries = dp.peak_band_entries();
  if (cnt >= cfg.c) {
    res.used_sum_over_count = true;
    res.value = sm / cnt;
  } else {
    res.used_sum_over_count = false;
    res.value = dp.ratio_sum();
  }
  return res;
}

double avg(const ProbStream& stream, double epsilon) {
  return avg_full(stream, epsilon).value;
}

double distinct_exact(const ProbStream& stream) {
  std::map<std::int64_t, double> miss;  // prod_i (1 - p_ij), keyed by value
  for (const ProbItem& item : stream.items()) {
    for (const ProbTuple& t : item.tuples()) {
      auto [it, fresh] = miss.emplace(t.value, 1.0);
      it->second *= 1.0 - t.prob;
      (void)fresh;
    }
  }
  double acc = 0.0;
  for (const auto& [value, p_missing] : miss) acc += 1.0 - p_missing;
  return acc;
}

DistinctConfig::DistinctConfig(const ApproxParams& params)
    : epsilon(params.epsilon), delta(params.delta), seed(params.seed) {
  double raw = 54.0 / (epsilon * epsilon * epsilon) * std::log(4.0 / delta);
  c1 = static_cast<std::uint64_t>(std::ceil(raw));
  if (c1 < 1) c1 = 1;
  est_epsilon = epsilon / 3.0;
  est_delta = delta / (2.0 * static_cast<double>(c1));
}

DistinctResult distinct_estimate_full(const ProbStream& stream,
                                      const ApproxParams& params) {
  DistinctConfig cfg(params);
  DistinctResult res;
  res.c1 = cfg.c1;
  double cnt = count(stream);
  if (cnt <= std::log1p(cfg.epsilon)) {
    res.value = cnt;
    res.shortcut = true;
    return res;
  }

  std::int64_t domain = std::max<std::int64_t>(1, stream.n());
  std::vector<std::uint64_t> seeds(cfg.c1);
  for (std::uint64_t k = 0; k < cfg.c1; ++k) seeds[k] = hash_combine(params.seed, k);
  std::vector<F0Sketch> est;
  est.reserve(cfg.c1);
  for (std::uint64_t k = 0; k < cfg.c1; ++k) {
    est.emplace_back(cfg.est_epsilon, cfg.est_delta, seeds[k], domain);
  }

  const auto& items = stream.items();
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& tuples = items[i].tuples();
    for (std::size_t t = 0; t < tuples.size(); ++t) {
      std::int64_t j = tuples[t].value;
      double p = tuples[t].prob;
      for (std::uint64_t k = 0; k < cfg.c1; ++k) {
        // Independent coin per (estimator, item, tuple): more than one value
        // of the same item may enter an estimator's induced stream.
        double u = bits_to_unit(hash3(seeds[k], i, t));
        if (u < p) est[k].insert(j);
      }
    }
  }

  double acc = 0.0;
  std::size_t entries = 0;
  for (const F0Sketch& sk : est) {
    acc += sk.estimate();
    entries += sk.stored_entries();
  }
  res.value = acc / static_cast<double>(cfg.c1);
  res.sketch_entries = entries;
  return res;
}

double distinct_estimate(const ProbStream& stream, const ApproxParams& params) {
  return distinct_estimate_full(stream, params).value;
}

double repeat_rate_exact(const ProbStream& stream) {
  std::map<std::int64_t, double> freq;  // f_j = sum_i p_ij
  double cross = 0.0;
  for (const ProbItem& item : stream.items()) {
    for (const ProbTuple& t : item.tuples()) {
      freq[t.value] += t.prob;
      cross += t.prob * (1.0 - t.prob);
    }
  }
  double acc = cross;
  for (const auto& [value, f] : freq) acc += f * f;
  return acc;
}

RepeatRateResult repeat_rate_full(const ProbStream& stream,
                                  const ApproxParams& params) {
  std::int64_t domain = std::max<std::int64_t>(1, stream.n());
  F2Sketch sk(params.epsilon, params.delta, params.seed, domain);
  double cross = 0.0;
  for (const ProbItem& item : stream.items()) {
    for (const ProbTuple& t : item.tuples()) {
      sk.update(t.value, t.prob);
      cross += t.prob * (1.0 - t.prob);
    }
  }
  RepeatRateResult res;
  res.sketch_term = sk.estimate();
  res.exact_term = cross;
  res.value = res.sketch_term + res.exact_term;
  res.counters = sk.counter_count();
  return res;
}

double repeat_rate(const ProbStream& stream, const ApproxParams& params) {
  return repeat_rate_full(stream, params).value;
}

MedianResult median_full(const ProbStream& stream, double epsilon,
                         std::uint64_t m_hint) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw StreamError(Errc::parse_error, "median: epsilon must lie in (0, 1)");
  }
  double m_eff = static_cast<double>(m_hint > 0 ? m_hint : stream.m());
  GkSummary gk(epsilon / 4.0, std::max<std::int64_t>(1, stream.n()));
  std::uint64_t total = 0;
  for (const ProbItem& item : stream.items()) {
    for (const ProbTuple& t : item.tuples()) {
      double copies = std::floor(2.0 * m_eff * t.prob / epsilon);
      if (copies >= 1.0) {
        auto w = static_cast<std::uint64_t>(copies);
        gk.insert_many(t.value, w);
        total += w;
      }
    }
  }
  if (total == 0) {
    throw StreamError(Errc::empty_induced_stream,
                      "median: every copy count floor(2 m p / epsilon) is zero; "
                      "epsilon is too small relative to the probabilities");
  }
  MedianResult res;
  res.induced_size = total;
  res.rank = (total + 1) / 2;
  res.value = gk.query(res.rank);
  res.gk_triples = gk.triple_count();
  return res;
}

std::int64_t median(const ProbStream& stream, double epsilon, std::uint64_t m_hint) {
  return median_full(stream, epsilon, m_hint).value;
}

bool check_approx_median(const ProbStream& stream, std::int64_t x, double epsilon) {
  double below = 0.0;
  double above = 0.0;
  for (const ProbItem& item : stream.items()) {
    for (const ProbTuple& t : item.tuples()) {
      if (t.value < x) below += t.prob;
      if (t.value > x) above += t.prob;
    }
  }
  double bound = (0.5 + epsilon) * std::ceil(count(stream));
  return below <= bound && above <= bound;
}

}  // namespace pstream
