#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pstream {

/// Greenwald-Khanna quantile summary over int64 values.
///
/// Stores (value, g, delta) triples sorted by value; with rmin(i) = sum of
/// g up to i and rmax(i) = rmin(i) + delta_i, every triple keeps
/// g + delta <= floor(2 * eps * N) + 1, which makes any rank query
/// answerable within eps * N of the true rank.  Inserts are buffered and
/// applied (followed by one compress sweep) every floor(1/(2*eps)) inserts.
///
/// insert_many(v, w) behaves exactly like w repeated insert(v) calls; large
/// weights are split into geometrically growing chunks so each stored triple
/// still honors the maintenance invariant.
class GkSummary {
 public:
  struct Triple {
    std::int64_t value;
    std::uint64_t g;
    std::uint64_t delta;
  };

  GkSummary(double epsilon, std::int64_t domain_n);

  /// Inserts one value in [1, domain_n].
  void insert(std::int64_t v);

  /// Exactly equivalent to calling insert(v) w times.
  void insert_many(std::int64_t v, std::uint64_t w);

  /// Value whose true rank is within epsilon * count() of r (1-based).
  std::int64_t query(std::uint64_t r);

  /// Total observations inserted so far (including buffered ones).
  std::uint64_t count() const { return count_ + buffer_.size(); }

  /// Number of stored triples after applying pending inserts.
  std::size_t triple_count();

  /// Verifies ordering, rank accounting, and the g + delta bound.
  bool check_invariant();

  double epsilon() const { return epsilon_; }
  std::int64_t domain_n() const { return domain_n_; }

  /// Applies buffered inserts; harmless to call at any time.
  void flush();

 private:
  std::uint64_t band_bound() const;  // max allowed g + delta at current count
  void compress();
  void check_domain(std::int64_t v) const;

  double epsilon_;
  std::int64_t domain_n_;
  std::size_t flush_every_;
  std::vector<Triple> triples_;
  std::vector<std::int64_t> buffer_;
  std::uint64_t count_ = 0;  // observations represented in triples_
};

}  // namespace pstream
