#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace swapcast {

// FNV-1a, used for stream derivation, event dedup hashing and transcript
// commitments. Stable across platforms by construction.
std::uint64_t fnv1a64(const void* data, std::size_t len,
                      std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 0xcbf29ce484222325ull);

// Counter-based generator: the splitmix64 finalizer applied to key + counter.
// No hidden state, so replays are bit-identical on every platform and streams
// can be derived from a master seed by name.
class CounterRng {
 public:
  CounterRng() = default;
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  // Derives an independent stream from a master seed and a stream label.
  static CounterRng derive(std::uint64_t master, std::string_view stream);

  std::uint64_t next_u64();
  // Uniform in [0,1) with 53 bits of mantissa.
  double next_unit();
  // Uniform integer in [0, n), n > 0.
  std::uint64_t next_below(std::uint64_t n);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_ = 0x9e3779b97f4a7c15ull;
  std::uint64_t counter_ = 0;
};

}  // namespace swapcast
