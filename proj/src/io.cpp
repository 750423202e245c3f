#include "pstream/io.hpp"

#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pstream/errors.hpp"

namespace pstream {

namespace {

[[noreturn]] void fail_line(std::size_t lineno, const std::string& what) {
  throw StreamError(Errc::parse_error, "line " + std::to_string(lineno) + ": " + what);
}

ProbItem parse_item_line(const nlohmann::json& arr, std::size_t lineno) {
  std::vector<std::pair<std::int64_t, double>> tuples;
  tuples.reserve(arr.size());
  for (const auto& el : arr) {
    if (!el.is_array() || el.size() != 2) {
      fail_line(lineno, "each tuple must be a [value, prob] pair");
    }
    if (!el[0].is_number_integer() && !el[0].is_number_unsigned()) {
      fail_line(lineno, "tuple value must be a JSON integer");
    }
    if (!el[1].is_number()) {
      fail_line(lineno, "tuple probability must be a JSON number");
    }
    tuples.emplace_back(el[0].get<std::int64_t>(), el[1].get<double>());
  }
  try {
    return validate_item(
        std::span<const std::pair<std::int64_t, double>>(tuples.data(), tuples.size()));
  } catch (const StreamError& e) {
    throw StreamError(e.code(), "line " + std::to_string(lineno) + ": " + e.detail());
  }
}

}  // namespace

ParsedStream parse_stream(std::istream& in, std::int64_t n_override) {
  std::vector<ProbItem> items;
  std::string line;
  std::size_t lineno = 0;
  bool seen_content = false;
  std::int64_t header_n = 0;
  bool had_header = false;

  while (std::getline(in, line)) {
    ++lineno;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;  // blank line

    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail_line(lineno, e.what());
    }

    if (parsed.is_object()) {
      if (seen_content) {
        fail_line(lineno, "header object is only allowed on the first line");
      }
      seen_content = true;
      if (!parsed.contains("n") || !(parsed["n"].is_number_integer() ||
                                     parsed["n"].is_number_unsigned())) {
        fail_line(lineno, "header must be {\"n\": <integer>}");
      }
      header_n = parsed["n"].get<std::int64_t>();
      if (header_n < 1) fail_line(lineno, "header n must be >= 1");
      had_header = true;
      continue;
    }
    if (!parsed.is_array()) {
      fail_line(lineno, "expected a JSON array of [value, prob] pairs");
    }
    seen_content = true;
    items.push_back(parse_item_line(parsed, lineno));
  }

  std::int64_t n = n_override > 0 ? n_override : header_n;
  ParsedStream out{ProbStream::make(std::move(items), n), had_header};
  return out;
}

std::string format_item(const ProbItem& item) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ProbTuple& t : item.tuples()) {
    arr.push_back(nlohmann::json::array({t.value, t.prob}));
  }
  return arr.dump();
}

void write_stream(std::ostream& out, const ProbStream& stream, bool with_header) {
  if (with_header) {
    nlohmann::json header;
    header["n"] = stream.n();
    out << header.dump() << '\n';
  }
  for (const ProbItem& item : stream.items()) {
    out << format_item(item) << '\n';
  }
}

}  // namespace pstream
