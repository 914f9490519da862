#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "swapcast/rng.hpp"

namespace swapcast {

// Fixed-size bit vector used for event membership over grid points.
class FixedBitset {
 public:
  FixedBitset() = default;
  explicit FixedBitset(std::size_t size)
      : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  bool empty_bits() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  void set(std::size_t i) { words_[i >> 6] |= (1ull << (i & 63)); }
  bool test(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1ull;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }
  const std::vector<std::uint64_t>& words() const { return words_; }

  std::uint64_t hash() const {
    return fnv1a64(words_.data(), words_.size() * sizeof(std::uint64_t),
                   fnv1a64(&size_, sizeof(size_)));
  }
  bool operator==(const FixedBitset& o) const {
    return size_ == o.size_ && words_ == o.words_;
  }

  std::vector<std::uint32_t> members() const {
    std::vector<std::uint32_t> out;
    out.reserve(count());
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        const int b = __builtin_ctzll(w);
        out.push_back(static_cast<std::uint32_t>(wi * 64 + b));
        w &= w - 1;
      }
    }
    return out;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace swapcast
