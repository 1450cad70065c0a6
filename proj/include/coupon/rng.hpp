#pragma once

#include <array>
#include <bit>
#include <cstdint>

namespace coupon {

// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// xoshiro256++ (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  // State filled from a SplitMix64 sequence started at seed.
  explicit constexpr Xoshiro256pp(std::uint64_t seed) noexcept {
    for (auto& word : s_) {
      seed += 0x9E3779B97F4A7C15ull;
      word = mix64(seed);
    }
  }

  // Generator for trial `index` of the run keyed by `seed`. Streams for
  // different indices are derived independently, so any partition of the
  // trials over workers sees the same draws.
  static constexpr Xoshiro256pp for_trial(std::uint64_t seed, std::uint64_t index) noexcept {
    return Xoshiro256pp(mix64(seed ^ 0x6A09E667F3BCC909ull) ^ mix64(index + 0x9E3779B97F4A7C15ull));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  constexpr result_type operator()() noexcept {
    const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

  // Uniform on the open interval (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace coupon
