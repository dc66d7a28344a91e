#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace gambles {

/// SplitMix64 (Steele, Lea & Flood). Used only to expand seeds.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seed of ensemble member `realization` (0-based): the (realization + 1)-th
/// output of SplitMix64 started at `master_seed`, computed in closed form so
/// members can be generated in any order.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t realization) noexcept {
  return SplitMix64::mix(master_seed + (realization + 1) * 0x9E3779B97F4A7C15ULL);
}

/// xoshiro256** 1.0 (Blackman & Vigna), state filled by four SplitMix64
/// outputs of the seed. Uniform doubles take the top 53 bits.
class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Xoshiro256StarStar(std::uint64_t seed) noexcept {
    SplitMix64 expand(seed);
    for (auto& word : s_) word = expand.next();
  }

  /// Generator with an explicit state, which must not be all zero.
  static constexpr Xoshiro256StarStar from_state(const std::array<std::uint64_t, 4>& state) noexcept {
    Xoshiro256StarStar rng(0);
    for (std::size_t i = 0; i < 4; ++i) rng.s_[i] = state[i];
    return rng;
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  constexpr result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53-bit resolution.
  constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4]{};
};

}  // namespace gambles
