#pragma once

#include <cstdint>
#include <random>

namespace fieldmix {

using Rng = std::mt19937_64;

/// Independent stream `stream` derived from a master seed. Chain c of a run
/// seeded with s always draws from make_stream(s, c).
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x6a09e667u};
  return Rng(seq);
}

}  // namespace fieldmix
