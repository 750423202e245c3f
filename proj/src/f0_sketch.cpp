#include "pstream/f0_sketch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "pstream/errors.hpp"
#include "pstream/rng.hpp"

namespace pstream {

F0Sketch::F0Sketch(double epsilon, double delta, std::uint64_t seed, std::int64_t domain_n)
    : epsilon_(epsilon), delta_(delta), seed_(seed), domain_n_(domain_n) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw StreamError(Errc::parse_error, "F0Sketch: epsilon must lie in (0, 1)");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw StreamError(Errc::parse_error, "F0Sketch: delta must lie in (0, 1)");
  }
  if (domain_n < 1) {
    throw StreamError(Errc::domain_unknown, "F0Sketch: domain size must be >= 1");
  }
  cap_ = static_cast<std::size_t>(std::ceil(36.0 / (epsilon * epsilon)));
  reps_ = static_cast<std::size_t>(
      std::max(1.0, std::ceil(2.5 * std::log(1.0 / delta))));
}

void F0Sketch::insert(std::int64_t j) {
  if (j < 1 || j > domain_n_) {
    throw StreamError(Errc::value_out_of_domain,
                      "F0Sketch: value " + std::to_string(j) + " outside [1, " +
                          std::to_string(domain_n_) + "]");
  }
  if (lazy_) {
    if (seen_.insert(static_cast<std::uint64_t>(j)) && seen_.size() > cap_) {
      materialize();
    }
    return;
  }
  for (std::size_t r = 0; r < reps_; ++r) {
    rep_insert(r, rep_hash(r, j));
  }
  floor_ = std::max(floor_, raw_estimate());
}

double F0Sketch::estimate() const {
  if (lazy_) return static_cast<double>(seen_.size());
  return floor_;
}

std::size_t F0Sketch::stored_entries() const {
  if (lazy_) return seen_.size();
  std::size_t total = 0;
  for (const auto& b : buckets_) total += b.size();
  return total;
}

std::uint64_t F0Sketch::rep_hash(std::size_t rep, std::int64_t j) const {
  std::uint64_t h = hash3(seed_, 0xF0ULL + rep, static_cast<std::uint64_t>(j));
  return h == 0 ? 1 : h;  // 0 is the bucket's empty-slot sentinel
}

void F0Sketch::materialize() {
  buckets_.assign(reps_, detail::FlatSet64());
  levels_.assign(reps_, 0);
  seen_.for_each([&](std::uint64_t v) {
    for (std::size_t r = 0; r < reps_; ++r) {
      rep_insert(r, rep_hash(r, static_cast<std::int64_t>(v)));
    }
  });
  // The exact count at the moment of overflow seeds the monotone floor.
  floor_ = static_cast<double>(seen_.size());
  seen_.clear();
  lazy_ = false;
  floor_ = std::max(floor_, raw_estimate());
}

void F0Sketch::rep_insert(std::size_t rep, std::uint64_t h) {
  unsigned& level = levels_[rep];
  if (static_cast<unsigned>(std::countr_zero(h)) < level) return;
  detail::FlatSet64& bucket = buckets_[rep];
  if (!bucket.insert(h)) return;
  while (bucket.size() > cap_) {
    ++level;
    detail::FlatSet64 kept;
    bucket.for_each([&](std::uint64_t k) {
      if (static_cast<unsigned>(std::countr_zero(k)) >= level) kept.insert(k);
    });
    bucket.swap(kept);
  }
}

double F0Sketch::raw_estimate() const {
  std::vector<double> per_rep(reps_);
  for (std::size_t r = 0; r < reps_; ++r) {
    per_rep[r] = std::ldexp(static_cast<double>(buckets_[r].size()), levels_[r]);
  }
  std::sort(per_rep.begin(), per_rep.end());
  std::size_t mid = per_rep.size() / 2;
  if (per_rep.size() % 2 == 1) return per_rep[mid];
  return 0.5 * (per_rep[mid - 1] + per_rep[mid]);
}

}  // namespace pstream
