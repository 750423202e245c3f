#include "pstream/f2_sketch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pstream/errors.hpp"
#include "pstream/rng.hpp"

namespace pstream {

namespace {

constexpr std::uint64_t kMersenne61 = (1ULL << 61) - 1;

std::uint64_t mulmod61(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(p & kMersenne61);
  std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
  std::uint64_t s = lo + hi;
  if (s >= kMersenne61) s -= kMersenne61;
  return s;
}

}  // namespace

F2Sketch::F2Sketch(double epsilon, double delta, std::uint64_t seed, std::int64_t domain_n)
    : epsilon_(epsilon), delta_(delta), seed_(seed), domain_n_(domain_n) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw StreamError(Errc::parse_error, "F2Sketch: epsilon must lie in (0, 1)");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw StreamError(Errc::parse_error, "F2Sketch: delta must lie in (0, 1)");
  }
  if (domain_n < 1) {
    throw StreamError(Errc::domain_unknown, "F2Sketch: domain size must be >= 1");
  }
  s1_ = static_cast<std::size_t>(std::ceil(16.0 / (epsilon * epsilon)));
  s2_ = static_cast<std::size_t>(std::max(1.0, std::ceil(8.0 * std::log(1.0 / delta))));
  counters_.assign(s1_ * s2_, 0.0);
  coeffs_.resize(4 * counters_.size());
  SplitMix64 rng(seed);
  for (auto& c : coeffs_) c = rng.next_u64() % kMersenne61;
}

void F2Sketch::update(std::int64_t j, double w) {
  if (j < 1 || j > domain_n_) {
    throw StreamError(Errc::value_out_of_domain,
                      "F2Sketch: value " + std::to_string(j) + " outside [1, " +
                          std::to_string(domain_n_) + "]");
  }
  for (std::size_t c = 0; c < counters_.size(); ++c) {
    counters_[c] += signed_weight(c, j, w);
  }
}

double F2Sketch::estimate() const {
  std::vector<double> group_means(s2_);
  for (std::size_t g = 0; g < s2_; ++g) {
    double sum = 0.0;
    for (std::size_t i = 0; i < s1_; ++i) {
      double v = counters_[g * s1_ + i];
      sum += v * v;
    }
    group_means[g] = sum / static_cast<double>(s1_);
  }
  std::sort(group_means.begin(), group_means.end());
  std::size_t mid = s2_ / 2;
  if (s2_ % 2 == 1) return group_means[mid];
  return 0.5 * (group_means[mid - 1] + group_means[mid]);
}

void F2Sketch::merge(const F2Sketch& other) {
  if (s1_ != other.s1_ || s2_ != other.s2_ || seed_ != other.seed_ ||
      domain_n_ != other.domain_n_) {
    throw StreamError(Errc::parse_error,
                      "F2Sketch: merge requires identical parameters and seed");
  }
  for (std::size_t c = 0; c < counters_.size(); ++c) {
    counters_[c] += other.counters_[c];
  }
}

double F2Sketch::signed_weight(std::size_t counter, std::int64_t j, double w) const {
  const std::uint64_t* a = &coeffs_[4 * counter];
  std::uint64_t x = static_cast<std::uint64_t>(j) % kMersenne61;
  // Horner evaluation of a3 x^3 + a2 x^2 + a1 x + a0 mod 2^61 - 1.
  std::uint64_t h = a[3];
  h = mulmod61(h, x) + a[2];
  if (h >= kMersenne61) h -= kMersenne61;
  h = mulmod61(h, x) + a[1];
  if (h >= kMersenne61) h -= kMersenne61;
  h = mulmod61(h, x) + a[0];
  if (h >= kMersenne61) h -= kMersenne61;
  return (h & 1) ? w : -w;
}

}  // namespace pstream
