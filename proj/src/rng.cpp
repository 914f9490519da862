#include "swapcast/rng.hpp"

namespace swapcast {

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed) {
  return fnv1a64(s.data(), s.size(), seed);
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng CounterRng::derive(std::uint64_t master, std::string_view stream) {
  return CounterRng(splitmix64(master ^ fnv1a64(stream)));
}

std::uint64_t CounterRng::next_u64() {
  return splitmix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ull);
}

double CounterRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::next_below(std::uint64_t n) {
  // Modulo bias is < 2^-50 for desk-scale n; acceptable for simulation use.
  return next_u64() % n;
}

}  // namespace swapcast
