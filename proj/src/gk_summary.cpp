#include "pstream/gk_summary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pstream/errors.hpp"

namespace pstream {

GkSummary::GkSummary(double epsilon, std::int64_t domain_n)
    : epsilon_(epsilon), domain_n_(domain_n) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw StreamError(Errc::parse_error, "GkSummary: epsilon must lie in (0, 1)");
  }
  if (domain_n < 1) {
    throw StreamError(Errc::domain_unknown, "GkSummary: domain size must be >= 1");
  }
  flush_every_ = static_cast<std::size_t>(
      std::max(1.0, std::floor(1.0 / (2.0 * epsilon))));
}

void GkSummary::check_domain(std::int64_t v) const {
  if (v < 1 || v > domain_n_) {
    throw StreamError(Errc::value_out_of_domain,
                      "GkSummary: value " + std::to_string(v) + " outside [1, " +
                          std::to_string(domain_n_) + "]");
  }
}

void GkSummary::insert(std::int64_t v) {
  check_domain(v);
  buffer_.push_back(v);
  if (buffer_.size() >= flush_every_) flush();
}

void GkSummary::insert_many(std::int64_t v, std::uint64_t w) {
  check_domain(v);
  flush();
  while (w > 0) {
    std::size_t slot = static_cast<std::size_t>(
        std::upper_bound(triples_.begin(), triples_.end(), v,
                         [](std::int64_t lhs, const Triple& t) { return lhs < t.value; }) -
        triples_.begin());
    std::uint64_t d = (slot == 0 || slot == triples_.size())
                          ? 0
                          : triples_[slot].g + triples_[slot].delta - 1;
    std::uint64_t c = 1;
    if (2.0 * epsilon_ >= 1.0) {
      c = w;
    } else {
      // Largest chunk with c + d <= floor(2 eps (count + c)), from the
      // linear relaxation; shrink if floor rounding made it overshoot.
      double num = 2.0 * epsilon_ * static_cast<double>(count_) -
                   static_cast<double>(d) - 1.0;
      double den = 1.0 - 2.0 * epsilon_;
      if (num >= den) c = static_cast<std::uint64_t>(num / den);
      if (c < 1) c = 1;
      if (c > w) c = w;
      while (c > 1) {
        double bound = std::max(
            1.0, std::floor(2.0 * epsilon_ * static_cast<double>(count_ + c)));
        if (static_cast<double>(c + d) <= bound) break;
        --c;
      }
    }
    triples_.insert(triples_.begin() + static_cast<std::ptrdiff_t>(slot),
                    Triple{v, c, d});
    count_ += c;
    w -= c;
  }
  compress();
}

std::int64_t GkSummary::query(std::uint64_t r) {
  flush();
  if (triples_.empty()) {
    throw StreamError(Errc::empty_summary, "GkSummary: query on empty summary");
  }
  if (r < 1) r = 1;
  if (r > count_) r = count_;
  std::uint64_t rmin = 0;
  std::int64_t best_value = triples_.front().value;
  std::uint64_t best_err = ~0ULL;
  for (const Triple& t : triples_) {
    rmin += t.g;
    std::uint64_t rmax = rmin + t.delta;
    std::uint64_t err_hi = rmax > r ? rmax - r : 0;
    std::uint64_t err_lo = r > rmin ? r - rmin : 0;
    std::uint64_t err = std::max(err_hi, err_lo);
    if (err < best_err) {
      best_err = err;
      best_value = t.value;
    }
  }
  return best_value;
}

std::size_t GkSummary::triple_count() {
  flush();
  return triples_.size();
}

bool GkSummary::check_invariant() {
  flush();
  std::uint64_t total = 0;
  std::uint64_t bound = static_cast<std::uint64_t>(std::floor(
                            2.0 * epsilon_ * static_cast<double>(count_))) +
                        1;
  for (std::size_t i = 0; i < triples_.size(); ++i) {
    const Triple& t = triples_[i];
    if (t.g < 1) return false;
    if (t.g + t.delta > bound) return false;
    if (i > 0 && triples_[i - 1].value > t.value) return false;
    total += t.g;
  }
  if (total != count_) return false;
  if (!triples_.empty() &&
      (triples_.front().delta != 0 || triples_.back().delta != 0)) {
    return false;
  }
  return true;
}

void GkSummary::flush() {
  if (buffer_.empty()) return;
  std::sort(buffer_.begin(), buffer_.end());
  for (std::int64_t v : buffer_) {
    std::size_t slot = static_cast<std::size_t>(
        std::upper_bound(triples_.begin(), triples_.end(), v,
                         [](std::int64_t lhs, const Triple& t) { return lhs < t.value; }) -
        triples_.begin());
    // Tightest sound uncertainty: the new observation can sit anywhere
    // inside the right neighbour's rank range.
    std::uint64_t d = (slot == 0 || slot == triples_.size())
                          ? 0
                          : triples_[slot].g + triples_[slot].delta - 1;
    triples_.insert(triples_.begin() + static_cast<std::ptrdiff_t>(slot),
                    Triple{v, 1, d});
    ++count_;
  }
  buffer_.clear();
  compress();
}

std::uint64_t GkSummary::band_bound() const {
  return static_cast<std::uint64_t>(std::max(
      1.0, std::floor(2.0 * epsilon_ * static_cast<double>(count_))));
}

void GkSummary::compress() {
  if (triples_.size() <= 2) return;
  std::uint64_t bound = band_bound();
  std::vector<Triple> out;
  out.reserve(triples_.size());
  out.push_back(triples_.back());
  for (std::size_t i = triples_.size() - 1; i-- > 1;) {
    Triple& right = out.back();
    if (triples_[i].g + right.g + right.delta <= bound) {
      right.g += triples_[i].g;
    } else {
      out.push_back(triples_[i]);
    }
  }
  out.push_back(triples_.front());
  std::reverse(out.begin(), out.end());
  triples_ = std::move(out);
}

}  // namespace pstream
