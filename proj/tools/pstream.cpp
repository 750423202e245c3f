#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pstream/aggregates.hpp"
#include "pstream/errors.hpp"
#include "pstream/generator.hpp"
#include "pstream/io.hpp"
#include "pstream/model.hpp"
#include "pstream/oracle.hpp"

namespace {

using nlohmann::ordered_json;

struct GenFlags {
  std::uint64_t m = 100;
  std::int64_t n = 100;
  std::size_t l = 1;
  double bot_mass = 0.0;
  std::string skew = "uniform";
  double zipf_s = 1.0;
  std::uint64_t seed = 0;
  std::string output;
  bool no_header = false;
};

struct AggFlags {
  std::string input;
  std::string stat = "all";
  double epsilon = 0.1;
  double delta = 0.05;
  std::uint64_t seed = 0;
  std::int64_t n = 0;
  bool exact = false;
  std::uint64_t m_hint = 0;
  bool timing = false;
};

struct OracleFlags {
  std::string input;
  double w = 0.0;
  bool has_w = false;
  std::int64_t n = 0;
};

struct BenchFlags {
  std::uint64_t m = 100;
  std::int64_t n = 50;
  std::size_t l = 2;
  double bot_mass = 0.2;
  std::string skew = "uniform";
  double zipf_s = 1.0;
  std::uint64_t stream_seed = 1;
  std::string stat = "all";
  std::string epsilons = "0.1,0.2";
  std::string deltas = "0.2";
  std::uint64_t seeds = 20;
};

pstream::GenSpec to_spec(std::uint64_t m, std::int64_t n, std::size_t l, double bot_mass,
                         const std::string& skew, double zipf_s, std::uint64_t seed) {
  pstream::GenSpec spec;
  spec.m = m;
  spec.n = n;
  spec.l = l;
  spec.bot_mass = bot_mass;
  spec.skew = skew == "zipf" ? pstream::GenSpec::Skew::zipf : pstream::GenSpec::Skew::uniform;
  spec.zipf_s = zipf_s;
  spec.seed = seed;
  return spec;
}

pstream::ParsedStream read_input(const std::string& path, std::int64_t n_override) {
  if (path == "-") return pstream::parse_stream(std::cin, n_override);
  std::ifstream in(path);
  if (!in) {
    throw pstream::StreamError(pstream::Errc::parse_error, "cannot open " + path);
  }
  return pstream::parse_stream(in, n_override);
}

/// Shortest-round-trip decimal form (what the JSON writer emits).
std::string fmt(double x) {
  if (!std::isfinite(x)) return "";
  return nlohmann::json(x).dump();
}

std::vector<double> parse_list(const std::string& csv, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      out.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw pstream::StreamError(pstream::Errc::parse_error,
                                 flag + ": bad number '" + part + "'");
    }
  }
  if (out.empty()) {
    throw pstream::StreamError(pstream::Errc::parse_error, flag + ": empty list");
  }
  return out;
}

int run_gen(const GenFlags& f) {
  pstream::ProbStream stream =
      pstream::generate(to_spec(f.m, f.n, f.l, f.bot_mass, f.skew, f.zipf_s, f.seed));
  if (f.output.empty() || f.output == "-") {
    pstream::write_stream(std::cout, stream, !f.no_header);
  } else {
    std::ofstream out(f.output, std::ios::binary);
    if (!out) {
      throw pstream::StreamError(pstream::Errc::parse_error, "cannot write " + f.output);
    }
    pstream::write_stream(out, stream, !f.no_header);
  }
  return 0;
}

bool wants(const std::string& stat, const char* name) {
  return stat == "all" || stat == name;
}

int run_agg(const AggFlags& f) {
  using clock = std::chrono::steady_clock;
  auto ms_since = [](clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };

  auto t_parse = clock::now();
  pstream::ParsedStream parsed = read_input(f.input, f.n);
  double parse_ms = ms_since(t_parse);
  const pstream::ProbStream& stream = parsed.stream;

  bool n_known = f.n > 0 || parsed.had_header_n;
  if (!f.exact && !n_known &&
      (wants(f.stat, "distinct") || wants(f.stat, "repeat-rate"))) {
    throw pstream::StreamError(
        pstream::Errc::domain_unknown,
        "sketch sizing needs the domain: pass --n or include a {\"n\": N} header "
        "(or use --exact)");
  }
  if (wants(f.stat, "median") && f.input == "-" && f.m_hint == 0) {
    throw pstream::StreamError(pstream::Errc::parse_error,
                               "median over standard input requires --m-hint");
  }

  ordered_json report;
  report["command"] = "agg";
  report["input"] = f.input;
  ordered_json params;
  params["stat"] = f.stat;
  params["epsilon"] = f.epsilon;
  params["delta"] = f.delta;
  params["seed"] = f.seed;
  params["n"] = stream.n();
  params["m"] = stream.m();
  params["exact"] = f.exact;
  if (f.m_hint > 0) params["m_hint"] = f.m_hint;
  report["params"] = params;

  ordered_json results;
  ordered_json state;
  ordered_json timing;
  timing["parse"] = parse_ms;

  if (wants(f.stat, "count")) {
    auto t0 = clock::now();
    results["count"] = pstream::count(stream);
    timing["count"] = ms_since(t0);
  }
  if (wants(f.stat, "sum")) {
    auto t0 = clock::now();
    results["sum"] = pstream::sum(stream);
    timing["sum"] = ms_since(t0);
  }
  if (wants(f.stat, "avg")) {
    auto t0 = clock::now();
    pstream::AvgResult r = pstream::avg_full(stream, f.epsilon);
    timing["avg"] = ms_since(t0);
    results["avg"] = r.value;
    results["avg_regime"] = r.used_sum_over_count ? "sum_over_count" : "dp";
    state["avg_band_peak"] = r.peak_band_entries;
  }
  if (wants(f.stat, "distinct")) {
    auto t0 = clock::now();
    if (f.exact) {
      results["distinct"] = pstream::distinct_exact(stream);
      results["distinct_variant"] = "exact";
    } else {
      pstream::ApproxParams p(f.epsilon, f.delta, f.seed);
      pstream::DistinctResult r = pstream::distinct_estimate_full(stream, p);
      results["distinct"] = r.value;
      results["distinct_variant"] = r.shortcut ? "shortcut" : "estimators";
      state["distinct_estimators"] = r.c1;
      state["f0_entries"] = r.sketch_entries;
    }
    timing["distinct"] = ms_since(t0);
  }
  if (wants(f.stat, "repeat-rate")) {
    auto t0 = clock::now();
    if (f.exact) {
      results["repeat_rate"] = pstream::repeat_rate_exact(stream);
      results["repeat_rate_variant"] = "exact";
    } else {
      pstream::ApproxParams p(f.epsilon, f.delta, f.seed);
      pstream::RepeatRateResult r = pstream::repeat_rate_full(stream, p);
      results["repeat_rate"] = r.value;
      results["repeat_rate_variant"] = "sketch";
      state["f2_counters"] = r.counters;
    }
    timing["repeat-rate"] = ms_since(t0);
  }
  if (wants(f.stat, "median")) {
    auto t0 = clock::now();
    pstream::MedianResult r = pstream::median_full(stream, f.epsilon, f.m_hint);
    timing["median"] = ms_since(t0);
    results["median"] = r.value;
    results["median_rank"] = r.rank;
    state["gk_induced_size"] = r.induced_size;
    state["gk_triples"] = r.gk_triples;
  }

  report["results"] = results;
  report["state"] = state;
  if (f.timing) report["timing_ms"] = timing;
  std::cout << report.dump(2) << '\n';
  return 0;
}

int run_oracle(const OracleFlags& f) {
  pstream::ParsedStream parsed = read_input(f.input, f.n);
  std::optional<double> w;
  if (f.has_w) w = f.w;
  pstream::OracleResult r = pstream::enumerate_stream(parsed.stream, w);

  ordered_json report;
  report["command"] = "oracle";
  report["input"] = f.input;
  ordered_json params;
  params["n"] = parsed.stream.n();
  params["m"] = parsed.stream.m();
  if (f.has_w) params["w"] = f.w;
  report["params"] = params;

  ordered_json results;
  results["count"] = r.count;
  results["sum"] = r.sum;
  results["avg"] = r.avg;
  results["avg_defined"] = r.avg_defined;
  results["pr_z_ge_1"] = r.pr_z_ge_1;
  results["distinct"] = r.distinct;
  results["repeat_rate"] = r.repeat_rate;
  results["total_prob"] = r.total_prob;
  results["outcomes"] = r.outcomes;
  if (r.has_pr_c_w) results["pr_c_w"] = r.pr_c_w;
  report["results"] = results;
  std::cout << report.dump(2) << '\n';
  return 0;
}

int run_bench(const BenchFlags& f) {
  pstream::ProbStream stream = pstream::generate(
      to_spec(f.m, f.n, f.l, f.bot_mass, f.skew, f.zipf_s, f.stream_seed));
  std::vector<double> eps_list = parse_list(f.epsilons, "--epsilons");
  std::vector<double> delta_list = parse_list(f.deltas, "--deltas");

  double d_exact = pstream::distinct_exact(stream);
  double rr_exact = pstream::repeat_rate_exact(stream);
  double avg_ref = std::nan("");
  try {
    pstream::OracleResult orc = pstream::enumerate_stream(stream);
    if (orc.avg_defined) avg_ref = orc.avg;
  } catch (const pstream::StreamError&) {
    // over budget: avg rows carry no reference
  }

  std::cout << "stat,m,n,l,bot_mass,skew,zipf_s,stream_seed,epsilon,delta,seed,"
               "estimate,reference,rel_err,ok,state_entries\n";
  auto prefix = [&](const char* stat, double eps, double delta, std::uint64_t seed) {
    std::ostringstream os;
    os << stat << ',' << f.m << ',' << f.n << ',' << f.l << ',' << fmt(f.bot_mass)
       << ',' << f.skew << ',' << fmt(f.zipf_s) << ',' << f.stream_seed << ','
       << fmt(eps) << ',' << fmt(delta) << ',' << seed << ',';
    return os.str();
  };
  auto rel_err = [](double est, double ref) {
    if (!std::isfinite(ref)) return std::nan("");
    double denom = std::abs(ref) > 0 ? std::abs(ref) : 1.0;
    return std::abs(est - ref) / denom;
  };

  for (double eps : eps_list) {
    for (double delta : delta_list) {
      for (std::uint64_t seed = 0; seed < f.seeds; ++seed) {
        if (wants(f.stat, "avg")) {
          pstream::AvgResult r = pstream::avg_full(stream, eps);
          double re = rel_err(r.value, avg_ref);
          std::cout << prefix("avg", eps, delta, seed) << fmt(r.value) << ','
                    << fmt(avg_ref) << ',' << fmt(re) << ','
                    << (std::isfinite(re) ? (re <= eps ? "1" : "0") : "") << ','
                    << r.peak_band_entries << '\n';
        }
        if (wants(f.stat, "distinct")) {
          pstream::ApproxParams p(eps, delta, seed);
          pstream::DistinctResult r = pstream::distinct_estimate_full(stream, p);
          double re = rel_err(r.value, d_exact);
          std::cout << prefix("distinct", eps, delta, seed) << fmt(r.value) << ','
                    << fmt(d_exact) << ',' << fmt(re) << ','
                    << (re <= eps ? "1" : "0") << ',' << r.sketch_entries << '\n';
        }
        if (wants(f.stat, "repeat-rate")) {
          pstream::ApproxParams p(eps, delta, seed);
          pstream::RepeatRateResult r = pstream::repeat_rate_full(stream, p);
          double re = rel_err(r.value, rr_exact);
          std::cout << prefix("repeat-rate", eps, delta, seed) << fmt(r.value) << ','
                    << fmt(rr_exact) << ',' << fmt(re) << ','
                    << (re <= eps ? "1" : "0") << ',' << r.counters << '\n';
        }
        if (wants(f.stat, "median")) {
          pstream::MedianResult r = pstream::median_full(stream, eps);
          bool ok = pstream::check_approx_median(stream, r.value, eps);
          std::cout << prefix("median", eps, delta, seed) << r.value << ",,,"
                    << (ok ? "1" : "0") << ',' << r.gk_triples << '\n';
        }
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-pass aggregates over probabilistic streams"};
  app.require_subcommand(1);

  GenFlags gf;
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic stream");
  gen->add_option("--m", gf.m, "number of items")->capture_default_str();
  gen->add_option("--n", gf.n, "domain size")->capture_default_str();
  gen->add_option("--l", gf.l, "tuples per item")->capture_default_str();
  gen->add_option("--bot-mass", gf.bot_mass, "target average absent mass")
      ->capture_default_str();
  gen->add_option("--skew", gf.skew, "value distribution")
      ->check(CLI::IsMember({"uniform", "zipf"}))
      ->capture_default_str();
  gen->add_option("--zipf-s", gf.zipf_s, "zipf exponent")->capture_default_str();
  gen->add_option("--seed", gf.seed, "generator seed")->capture_default_str();
  gen->add_option("-o,--output", gf.output, "output file ('-' = stdout)");
  gen->add_flag("--no-header", gf.no_header, "omit the {\"n\": N} header line");

  AggFlags af;
  CLI::App* agg = app.add_subcommand("agg", "compute aggregates over a stream file");
  agg->add_option("input", af.input, "stream file ('-' = stdin)")->required();
  agg->add_option("--stat", af.stat, "which aggregate")
      ->check(CLI::IsMember(
          {"count", "sum", "avg", "distinct", "repeat-rate", "median", "all"}))
      ->capture_default_str();
  agg->add_option("--epsilon", af.epsilon, "accuracy")->capture_default_str();
  agg->add_option("--delta", af.delta, "failure probability")->capture_default_str();
  agg->add_option("--seed", af.seed, "sketch seed")->capture_default_str();
  agg->add_option("--n", af.n, "domain size override");
  agg->add_flag("--exact", af.exact, "exact O(n)-memory distinct / repeat-rate");
  agg->add_option("--m-hint", af.m_hint, "item count (or upper bound) for median");
  agg->add_flag("--timing", af.timing, "include wall-clock timings in the report");

  OracleFlags of;
  CLI::App* orc = app.add_subcommand("oracle", "exact values by exhaustive enumeration");
  orc->add_option("input", of.input, "stream file ('-' = stdin)")->required();
  CLI::Option* wopt = orc->add_option("--w", of.w, "also compute the band probability");
  orc->add_option("--n", of.n, "domain size override");

  BenchFlags bf;
  CLI::App* bench = app.add_subcommand("bench", "accuracy/space sweep as CSV");
  bench->add_option("--m", bf.m, "number of items")->capture_default_str();
  bench->add_option("--n", bf.n, "domain size")->capture_default_str();
  bench->add_option("--l", bf.l, "tuples per item")->capture_default_str();
  bench->add_option("--bot-mass", bf.bot_mass, "target average absent mass")
      ->capture_default_str();
  bench->add_option("--skew", bf.skew, "value distribution")
      ->check(CLI::IsMember({"uniform", "zipf"}))
      ->capture_default_str();
  bench->add_option("--zipf-s", bf.zipf_s, "zipf exponent")->capture_default_str();
  bench->add_option("--stream-seed", bf.stream_seed, "generator seed")
      ->capture_default_str();
  bench->add_option("--stat", bf.stat, "which aggregates")
      ->check(CLI::IsMember({"avg", "distinct", "repeat-rate", "median", "all"}))
      ->capture_default_str();
  bench->add_option("--epsilons", bf.epsilons, "comma-separated epsilon sweep")
      ->capture_default_str();
  bench->add_option("--deltas", bf.deltas, "comma-separated delta sweep")
      ->capture_default_str();
  bench->add_option("--seeds", bf.seeds, "sketch seeds 0..k-1")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(gen)) return run_gen(gf);
    if (app.got_subcommand(agg)) return run_agg(af);
    if (app.got_subcommand(orc)) {
      of.has_w = wopt->count() > 0;
      return run_oracle(of);
    }
    if (app.got_subcommand(bench)) return run_bench(bf);
  } catch (const pstream::StreamError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_refusal() ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
