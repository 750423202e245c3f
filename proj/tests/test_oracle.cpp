#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "pstream/aggregates.hpp"
#include "pstream/oracle.hpp"

using namespace pstream;
using testutil::rand_small_stream;
using testutil::stream_of;

TEST_CASE("two-item worked example") {
  // <[(1, 1.0)], [(3, 0.5)]>: outcomes (1,3) w.p. 1/2 and (1) w.p. 1/2.
  ProbStream s = stream_of({{{1, 1.0}}, {{3, 0.5}}});
  OracleResult r = enumerate_stream(s);
  CHECK(r.count == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(r.sum == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(r.avg_defined);
  CHECK(r.avg == doctest::Approx(1.5).epsilon(1e-12));  // (4/2 + 1/1) / 2
  CHECK(r.pr_z_ge_1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.distinct == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(r.repeat_rate == doctest::Approx(1.5).epsilon(1e-12));  // (1+1)/2 + (4+1)/2 ... = 1.5
  CHECK(r.total_prob == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.outcomes == 2);  // the certain item contributes one branch
  CHECK(r.expected_freq.at(1) == doctest::Approx(1.0));
  CHECK(r.expected_freq.at(3) == doctest::Approx(0.5));
  CHECK(r.expected_below(2) == doctest::Approx(1.0));
  CHECK(r.expected_above(2) == doctest::Approx(0.5));
  CHECK(r.expected_below(1) == doctest::Approx(0.0));
}

TEST_CASE("deterministic stream has a single outcome") {
  ProbStream s = stream_of({{{2, 1.0}}, {{2, 1.0}}, {{5, 1.0}}});
  OracleResult r = enumerate_stream(s);
  CHECK(r.outcomes == 1);
  CHECK(r.count == 3.0);
  CHECK(r.sum == 9.0);
  CHECK(r.avg == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(r.distinct == 2.0);
  CHECK(r.repeat_rate == 5.0);  // 2^2 + 1^2
}

TEST_CASE("all-absent stream leaves AVG undefined") {
  ProbStream s = stream_of({{}, {}});
  OracleResult r = enumerate_stream(s);
  CHECK(r.outcomes == 1);
  CHECK(!r.avg_defined);
  CHECK(r.pr_z_ge_1 == 0.0);
  CHECK(r.avg == 0.0);
  CHECK(r.count == 0.0);
  CHECK(r.distinct == 0.0);
  CHECK(r.total_prob == doctest::Approx(1.0));
}

TEST_CASE("closed forms and enumeration agree on random small streams") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    ProbStream s = rand_small_stream(seed);
    OracleResult r = enumerate_stream(s);
    CHECK(std::abs(r.total_prob - 1.0) <= 1e-9);
    CHECK(std::abs(r.count - count(s)) <= 1e-9);
    CHECK(std::abs(r.sum - sum(s)) <= 1e-9);
    CHECK(std::abs(r.distinct - distinct_exact(s)) <= 1e-9);
    CHECK(std::abs(r.repeat_rate - repeat_rate_exact(s)) <= 1e-9);
  }
}

TEST_CASE("band probability is 1 once the band covers every count") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    ProbStream s = rand_small_stream(seed);
    OracleResult r = enumerate_stream(s, static_cast<double>(s.m()));
    REQUIRE(r.has_pr_c_w);
    CHECK(r.pr_c_w == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("narrow bands give probabilities strictly inside (0, 1)") {
  // Four half-present items: Z_j ~ Binomial(j, 1/2); with w = 0.6 the band
  // after an even number of items admits only z = j/2.
  ProbStream s = stream_of({{{2, 0.5}}, {{2, 0.5}}, {{2, 0.5}}, {{2, 0.5}}});
  OracleResult r = enumerate_stream(s, 0.6);
  REQUIRE(r.has_pr_c_w);
  CHECK(r.pr_c_w > 0.0);
  CHECK(r.pr_c_w < 1.0);
}

TEST_CASE("a band no integer ever enters has probability exactly zero") {
  // E[Z_1] = 0.5 and w = 0.4 leave no admissible z after the first item.
  ProbStream s = stream_of({{{2, 0.5}}, {{2, 0.5}}});
  OracleResult r = enumerate_stream(s, 0.4);
  REQUIRE(r.has_pr_c_w);
  CHECK(r.pr_c_w == 0.0);
}

TEST_CASE("enumeration refuses oversized streams") {
  // 30 genuinely probabilistic items with 3 positive branches each.
  std::vector<ProbItem> items;
  for (int i = 0; i < 30; ++i) {
    items.push_back(validate_item({{1 + (i % 5), 0.5}, {6 + (i % 5), 0.3}}));
  }
  ProbStream s = ProbStream::make(std::move(items));
  try {
    enumerate_stream(s);
    FAIL("expected refusal");
  } catch (const StreamError& e) {
    CHECK(e.code() == Errc::enumeration_too_large);
    CHECK(e.is_refusal());
  }
}

TEST_CASE("certain items do not consume enumeration budget") {
  // 5000 deterministic items plus three probabilistic ones: 8 outcome groups.
  std::vector<ProbItem> items;
  SplitMix64 rng(7);
  double det_sum = 0.0;
  for (int i = 0; i < 5000; ++i) {
    std::int64_t v = rng.next_value(3);
    det_sum += static_cast<double>(v);
    items.push_back(validate_item({{v, 1.0}}));
  }
  items.push_back(validate_item({{1, 0.5}}));
  items.push_back(validate_item({{2, 0.25}}));
  items.push_back(validate_item({{3, 0.125}}));
  ProbStream s = ProbStream::make(std::move(items));
  OracleResult r = enumerate_stream(s);
  CHECK(r.outcomes == 8);
  CHECK(std::abs(r.count - (5000.0 + 0.875)) <= 1e-9);
  CHECK(std::abs(r.sum - (det_sum + 0.5 + 0.5 + 0.375)) <= 1e-9);
  CHECK(std::abs(r.count - count(s)) <= 1e-9);
  CHECK(std::abs(r.repeat_rate - repeat_rate_exact(s)) <= 1e-9);
}

TEST_CASE("empty stream enumerates to the empty outcome") {
  ProbStream s = ProbStream::make({});
  OracleResult r = enumerate_stream(s);
  CHECK(r.outcomes == 1);
  CHECK(r.total_prob == 1.0);
  CHECK(!r.avg_defined);
}
