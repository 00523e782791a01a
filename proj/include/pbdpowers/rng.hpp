#pragma once

#include <bit>
#include <cstdint>
#include <limits>

namespace pbdpowers {

// Identifier written into every report so a run can be matched to the
// generator that produced it.
inline constexpr const char* kRngAlgorithm = "xoshiro256**/splitmix64";

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of the sub-stream for (seed, power, draw index). The power enters
// through its IEEE-754 bit pattern; each input is passed through splitmix64
// before being folded in, so neighbouring indices give unrelated streams.
inline constexpr std::uint64_t mix_stream(std::uint64_t seed, std::uint64_t power_bits,
                                          std::uint64_t index) noexcept {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ splitmix64(power_bits + 0x632be59bd9b4e019ULL));
  h = splitmix64(h ^ splitmix64(index + 0x85157af5d7d1b3c5ULL));
  return h;
}

inline std::uint64_t power_bits(double k) noexcept { return std::bit_cast<std::uint64_t>(k); }

// xoshiro256** (Blackman & Vigna), state filled from splitmix64 of the seed.
// Satisfies UniformRandomBitGenerator so <random> distributions accept it.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) noexcept {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_[4];
};

}  // namespace pbdpowers
