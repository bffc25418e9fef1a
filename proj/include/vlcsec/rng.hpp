#pragma once

#include <cstdint>
#include <random>

namespace vlcsec {

/// splitmix64 step; used to decorrelate seed material.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Independent per-trial generator derived from (master seed, trial index).
/// The derivation is order-free, so trials can run in any order or in
/// parallel and still consume identical streams.
inline std::mt19937_64 make_trial_rng(std::uint64_t master_seed, std::uint64_t trial_index) {
  std::uint64_t state = master_seed ^ (0xD1B54A32D192ED03ull * (trial_index + 1));
  const std::uint64_t a = splitmix64(state);
  const std::uint64_t b = splitmix64(state);
  const std::uint64_t c = splitmix64(state);
  const std::uint64_t d = splitmix64(state);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                    static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(d >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace vlcsec
