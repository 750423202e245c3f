#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace pstream::detail {

/// Open-addressing set of nonzero u64 keys (0 is the empty-slot sentinel).
/// Linear probing, power-of-two capacity, grow at 0.7 load.
class FlatSet64 {
 public:
  FlatSet64() = default;

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  /// Inserts key (must be nonzero); returns true when the key was new.
  bool insert(std::uint64_t key) {
    if (slots_.empty()) rehash(16);
    std::size_t mask = slots_.size() - 1;
    std::size_t i = spread(key) & mask;
    while (slots_[i] != 0) {
      if (slots_[i] == key) return false;
      i = (i + 1) & mask;
    }
    slots_[i] = key;
    ++size_;
    if (size_ * 10 >= slots_.size() * 7) rehash(slots_.size() * 2);
    return true;
  }

  bool contains(std::uint64_t key) const {
    if (slots_.empty()) return false;
    std::size_t mask = slots_.size() - 1;
    std::size_t i = spread(key) & mask;
    while (slots_[i] != 0) {
      if (slots_[i] == key) return true;
      i = (i + 1) & mask;
    }
    return false;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::uint64_t k : slots_) {
      if (k != 0) fn(k);
    }
  }

  void clear() {
    slots_.clear();
    size_ = 0;
  }

  void swap(FlatSet64& other) {
    slots_.swap(other.slots_);
    std::swap(size_, other.size_);
  }

 private:
  static std::size_t spread(std::uint64_t k) {
    k ^= k >> 33;
    k *= 0xFF51AFD7ED558CCDULL;
    k ^= k >> 33;
    return static_cast<std::size_t>(k);
  }

  void rehash(std::size_t new_cap) {
    std::vector<std::uint64_t> old = std::move(slots_);
    slots_.assign(new_cap, 0);
    std::size_t mask = new_cap - 1;
    for (std::uint64_t k : old) {
      if (k == 0) continue;
      std::size_t i = spread(k) & mask;
      while (slots_[i] != 0) i = (i + 1) & mask;
      slots_[i] = k;
    }
  }

  std::vector<std::uint64_t> slots_;
  std::size_t size_ = 0;
};

}  // namespace pstream::detail
