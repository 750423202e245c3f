#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "pstream/model.hpp"

namespace pstream {

struct ParsedStream {
  ProbStream stream;
  bool had_header_n = false;  // input began with a {"n": N} header line
};

/// Reads the JSON Lines stream format: an optional first-line {"n": N}
/// header object, then one JSON array of [value, prob] pairs per item
/// ([] = certainly-absent item).  Values must be JSON integers.  Errors
/// carry 1-based line numbers.  n_override > 0 takes precedence over the
/// header; with neither, n is inferred as the maximum value present.
ParsedStream parse_stream(std::istream& in, std::int64_t n_override = 0);

/// One item as its JSON line (no trailing newline).
std::string format_item(const ProbItem& item);

/// Writes the header (unless suppressed) and one line per item.  Output is
/// byte-reproducible: doubles are serialized shortest-round-trip.
void write_stream(std::ostream& out, const ProbStream& stream, bool with_header = true);

}  // namespace pstream
