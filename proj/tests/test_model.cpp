#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <optional>

#include "helpers.hpp"
#include "pstream/model.hpp"

using namespace pstream;
using testutil::item;
using testutil::stream_of;

static std::optional<Errc> code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const StreamError& e) {
    return e.code();
  }
  return std::nullopt;
}

TEST_CASE("validate_item accepts well-formed tuples") {
  ProbItem a = item({{5, 0.5}});
  CHECK(a.tuple_count() == 1);
  CHECK(a.p_bot() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(a.p_present() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(a.cond_mean() == doctest::Approx(5.0).epsilon(1e-15));

  ProbItem b = item({{2, 0.25}, {4, 0.25}});
  CHECK(b.p_bot() == doctest::Approx(0.5).epsilon(1e-15));
  // E[X | present] = (2 * .25 + 4 * .25) / .5 = 3
  CHECK(b.cond_mean() == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("deterministic item has p_bot exactly zero") {
  ProbItem a = item({{1, 1.0}});
  CHECK(a.p_bot() == 0.0);
  CHECK(a.p_present() == 1.0);
}

TEST_CASE("probability sums within parse tolerance of 1 snap p_bot to zero") {
  // 0.1 * 10 in binary is 0.9999999999999999; the residual must not become a
  // phantom positive absence-probability.
  std::vector<std::pair<std::int64_t, double>> raw;
  for (int v = 1; v <= 10; ++v) raw.emplace_back(v, 0.1);
  ProbItem a = validate_item(std::span<const std::pair<std::int64_t, double>>(raw));
  CHECK(a.p_bot() == 0.0);

  ProbItem b = item({{3, 1.0 - 1e-12}});
  CHECK(b.p_bot() == 0.0);

  // ... but a genuinely partial item keeps its absence mass.
  ProbItem c = item({{3, 1.0 - 1e-6}});
  CHECK(c.p_bot() > 0.0);
}

TEST_CASE("empty item is certain-absent and has no conditional mean") {
  ProbItem a = item({});
  CHECK(a.empty());
  CHECK(a.p_bot() == 1.0);
  CHECK(a.p_present() == 0.0);
  CHECK(code_of([&] { (void)a.cond_mean(); }) == Errc::all_bot_item);
}

TEST_CASE("validate_item rejections carry the right error codes") {
  CHECK(code_of([] { item({{1, 0.0}}); }) == Errc::non_positive_prob);
  CHECK(code_of([] { item({{1, -0.25}}); }) == Errc::non_positive_prob);
  CHECK(code_of([] { item({{0, 0.5}}); }) == Errc::non_positive_value);
  CHECK(code_of([] { item({{-7, 0.5}}); }) == Errc::non_positive_value);
  CHECK(code_of([] { item({{4, 0.5}, {4, 0.1}}); }) == Errc::duplicate_value);
  CHECK(code_of([] { item({{1, 0.7}, {2, 0.7}}); }) == Errc::prob_sum_exceeds_one);
  CHECK(code_of([] { item({{1, 1.0 + 1e-7}}); }) == Errc::prob_sum_exceeds_one);
  // Just inside the tolerance: accepted and snapped.
  CHECK(!code_of([] { item({{1, 1.0 + 1e-10}}); }).has_value());
  CHECK(item({{1, 1.0 + 1e-10}}).p_bot() == 0.0);
}

TEST_CASE("ProbStream::make infers the domain from the max value") {
  ProbStream s = stream_of({{{3, 0.5}}, {{9, 0.25}, {2, 0.25}}});
  CHECK(s.n() == 9);
  CHECK(s.m() == 2);
  CHECK(s.l_max() == 2);
}

TEST_CASE("ProbStream::make with explicit domain checks every value") {
  ProbStream s = stream_of({{{3, 0.5}}}, 10);
  CHECK(s.n() == 10);

  CHECK(code_of([] { stream_of({{{3, 0.5}}, {{11, 0.5}}}, 10); }) ==
        Errc::value_out_of_domain);
  // the error message names the offending (1-based) item
  try {
    stream_of({{{3, 0.5}}, {{11, 0.5}}}, 10);
  } catch (const StreamError& e) {
    CHECK(std::string(e.what()).find("item 2") != std::string::npos);
  }
}

TEST_CASE("empty and all-absent streams are representable") {
  ProbStream empty = ProbStream::make({});
  CHECK(empty.m() == 0);
  CHECK(empty.n() == 0);

  ProbStream bot = stream_of({{}, {}});
  CHECK(bot.m() == 2);
  CHECK(bot.n() == 0);
  CHECK(bot.l_max() == 0);
}

TEST_CASE("ApproxParams validates epsilon and delta") {
  CHECK(!code_of([] { ApproxParams(0.1, 0.05, 1); }).has_value());
  CHECK(code_of([] { ApproxParams(0.0, 0.05, 1); }) == Errc::parse_error);
  CHECK(code_of([] { ApproxParams(1.0, 0.05, 1); }) == Errc::parse_error);
  CHECK(code_of([] { ApproxParams(-0.1, 0.05, 1); }) == Errc::parse_error);
  CHECK(code_of([] { ApproxParams(0.1, 0.0, 1); }) == Errc::parse_error);
  CHECK(code_of([] { ApproxParams(0.1, 1.0, 1); }) == Errc::parse_error);
}

TEST_CASE("stream equality is structural") {
  ProbStream a = stream_of({{{1, 0.5}}, {{2, 1.0}}});
  ProbStream b = stream_of({{{1, 0.5}}, {{2, 1.0}}});
  ProbStream c = stream_of({{{1, 0.5}}, {{3, 1.0}}});
  CHECK(a == b);
  CHECK(a != c);
}
