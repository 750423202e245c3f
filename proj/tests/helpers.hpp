#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pstream/model.hpp"
#include "pstream/rng.hpp"

namespace testutil {

inline pstream::ProbItem item(std::initializer_list<std::pair<std::int64_t, double>> t) {
  return pstream::validate_item(t);
}

inline pstream::ProbStream stream_of(
    std::initializer_list<std::initializer_list<std::pair<std::int64_t, double>>> items,
    std::int64_t n = 0) {
  std::vector<pstream::ProbItem> v;
  for (const auto& raw : items) v.push_back(pstream::validate_item(raw));
  return pstream::ProbStream::make(std::move(v), n);
}

/// Random small stream exercising every item shape: empty (certain-absent),
/// deterministic, and genuinely probabilistic items with 1..max_l tuples.
inline pstream::ProbStream rand_small_stream(std::uint64_t seed, std::size_t max_m = 8,
                                             std::size_t max_l = 2,
                                             std::int64_t max_n = 10) {
  pstream::SplitMix64 rng(seed);
  std::size_t m = 1 + static_cast<std::size_t>(rng.next_u64() % max_m);
  std::vector<pstream::ProbItem> items;
  items.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    double roll = rng.next_unit();
    if (roll < 0.12) {
      items.push_back(pstream::validate_item({}));
      continue;
    }
    if (roll < 0.32) {
      items.push_back(pstream::validate_item({{rng.next_value(max_n), 1.0}}));
      continue;
    }
    std::size_t l = 1 + static_cast<std::size_t>(rng.next_u64() % max_l);
    std::vector<std::pair<std::int64_t, double>> tuples;
    while (tuples.size() < l) {
      std::int64_t v = rng.next_value(max_n);
      bool dup = false;
      for (const auto& [ev, ep] : tuples) dup |= ev == v;
      if (!dup) tuples.emplace_back(v, 0.0);
    }
    double total_mass = 0.3 + 0.7 * rng.next_unit();  // sum of tuple probs
    std::vector<double> u(l);
    double us = 0.0;
    for (double& x : u) {
      x = rng.next_unit_open();
      us += x;
    }
    for (std::size_t t = 0; t < l; ++t) tuples[t].second = u[t] / us * total_mass;
    items.push_back(pstream::validate_item(
        std::span<const std::pair<std::int64_t, double>>(tuples.data(), tuples.size())));
  }
  return pstream::ProbStream::make(std::move(items), max_n);
}

/// Classic (all probabilities 1) stream.
inline pstream::ProbStream classic_stream(std::uint64_t seed, std::size_t m,
                                          std::int64_t n) {
  pstream::SplitMix64 rng(seed);
  std::vector<pstream::ProbItem> items;
  items.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    items.push_back(pstream::validate_item({{rng.next_value(n), 1.0}}));
  }
  return pstream::ProbStream::make(std::move(items), n);
}

// ---- subprocess helper for CLI-level tests -------------------------------

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const char* cli_path() {
  const char* p = std::getenv("PSTREAM_CLI");
  return p ? p : "./pstream";
}

/// Runs the CLI with the given argument string; stdin_data, when nonempty,
/// is piped in.  Unique temp files keep parallel test binaries apart.
inline CliResult run_cli(const std::string& args, const std::string& stdin_data = "") {
  static int counter = 0;
  std::string base = "/tmp/pstream_test_" + std::to_string(getpid()) + "_" +
                     std::to_string(counter++);
  std::string in_f = base + ".in";
  std::string out_f = base + ".out";
  std::string err_f = base + ".err";
  {
    std::ofstream in(in_f, std::ios::binary);
    in << stdin_data;
  }
  std::string cmd = std::string("'") + cli_path() + "' " + args + " < " + in_f +
                    " > " + out_f + " 2> " + err_f;
  int rc = std::system(cmd.c_str());
  CliResult res;
  res.exit_code = (rc >= 0 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
  res.out = slurp(out_f);
  res.err = slurp(err_f);
  std::remove(in_f.c_str());
  std::remove(out_f.c_str());
  std::remove(err_f.c_str());
  return res;
}

inline std::string write_temp_stream(const std::string& contents, const std::string& tag) {
  std::string path = "/tmp/pstream_fixture_" + std::to_string(getpid()) + "_" + tag + ".jsonl";
  std::ofstream out(path, std::ios::binary);
  out << contents;
  return path;
}

}  // namespace testutil
