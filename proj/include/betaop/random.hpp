#pragma once

#include <cstdint>
#include <random>

namespace betaop {

using Rng = std::mt19937_64;

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Independent generator for (master seed, stream id, trial index).
///
/// Every Monte Carlo trial draws from its own substream, so a trial's
/// output depends only on its key and never on scheduling or thread count.
inline Rng substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t state = seed;
  detail::splitmix64(state);
  state ^= stream * 0xd1b54a32d192ed03ULL;
  detail::splitmix64(state);
  state ^= index * 0x8cb92ba72f3d8dd7ULL;
  std::uint32_t words[8];
  for (int i = 0; i < 4; ++i) {
    const std::uint64_t w = detail::splitmix64(state);
    words[2 * i] = static_cast<std::uint32_t>(w);
    words[2 * i + 1] = static_cast<std::uint32_t>(w >> 32);
  }
  std::seed_seq seq(std::begin(words), std::end(words));
  return Rng(seq);
}

/// Uniform double on (0, 1]; 53 random bits, never returns 0.
template <class URBG>
double uniform_open_closed(URBG& rng) {
  static_assert(URBG::max() - URBG::min() == 0xffffffffffffffffULL,
                "requires a 64-bit generator");
  return static_cast<double>(((rng() - URBG::min()) >> 11) + 1) * 0x1.0p-53;
}

/// Uniform double on [0, 1).
template <class URBG>
double uniform_closed_open(URBG& rng) {
  return static_cast<double>((rng() - URBG::min()) >> 11) * 0x1.0p-53;
}

}  // namespace betaop
