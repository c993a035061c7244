#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace p2pshare {

using Rng = std::mt19937_64;

/// Derives an independent generator from a tuple of keys, e.g.
/// (master_seed, sigma, seed_index). Identical keys always give an
/// identical stream, regardless of which thread asks.
template <class Keys>
inline Rng make_stream_from(const Keys& keys) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * keys.size() + 1);
  words.push_back(static_cast<std::uint32_t>(keys.size()));
  for (std::uint64_t k : keys) {
    words.push_back(static_cast<std::uint32_t>(k & 0xffffffffULL));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

inline Rng make_stream(std::initializer_list<std::uint64_t> keys) { return make_stream_from(keys); }

inline std::uint64_t key_of(double v) { return std::bit_cast<std::uint64_t>(v); }

}  // namespace p2pshare
