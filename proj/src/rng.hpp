#pragma once

#include <cstdint>
#include <limits>

namespace istn {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** satisfying UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) {
    for (auto& w : s_) w = splitmix64(seed);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
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

  /// Uniform on (0, 1), never exactly 0 or 1.
  double uniform() { return ((*this)() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

/// Generator for one trial: a pure function of (seed, stream, trial), so
/// trials can run in any order on any worker.
inline Xoshiro256 trial_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial) {
  std::uint64_t state = seed;
  std::uint64_t key = splitmix64(state);
  state = key ^ (stream * 0xd1342543de82ef95ULL);
  key = splitmix64(state);
  state = key ^ trial;
  return Xoshiro256(splitmix64(state));
}

}  // namespace istn
