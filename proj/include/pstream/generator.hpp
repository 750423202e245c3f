#pragma once

#include <cstdint>

#include "pstream/model.hpp"

namespace pstream {

/// Recipe for a seeded synthetic stream.
struct GenSpec {
  enum class Skew { uniform, zipf };

  std::uint64_t m = 1;    // items
  std::int64_t n = 1;     // domain size
  std::size_t l = 1;      // tuples per item (distinct values)
  double bot_mass = 0.0;  // target average p_bot, in [0, 1)
  Skew skew = Skew::uniform;
  double zipf_s = 1.0;    // exponent when skew == zipf
  std::uint64_t seed = 0;
};

/// Deterministically expands the recipe into a valid ProbStream: per item,
/// l distinct values drawn by the skew law, with probability masses from a
/// symmetric Dirichlet over l + 1 cells whose last cell is steered toward
/// bot_mass and assigned to the bot outcome.
ProbStream generate(const GenSpec& spec);

}  // namespace pstream
