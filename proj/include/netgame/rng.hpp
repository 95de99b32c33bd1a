#pragma once

#include <cstdint>
#include <limits>

namespace netgame {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256** (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) noexcept {
    for (auto& w : s_) w = splitmix64(seed);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
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

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform double in (0, 1].
  double uniform_open0() noexcept { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
};

// Purpose tags keep streams drawn for different consumers disjoint.
enum class StreamPurpose : std::uint64_t {
  network = 1,
  monte_carlo = 2,
  profiles = 3,
  initial = 4,
};

// Independent stream keyed by (seed, replication, iteration, purpose). Each
// key hashes to its own generator state, so replications and iterations can be
// evaluated in any order or concurrently with identical results.
inline Xoshiro256 stream(std::uint64_t seed, std::uint64_t replication, std::uint64_t iteration,
                         StreamPurpose purpose = StreamPurpose::network) noexcept {
  std::uint64_t h = seed;
  std::uint64_t key = splitmix64(h);
  h = key ^ (replication * 0xd1b54a32d192ed03ULL);
  key = splitmix64(h);
  h = key ^ (iteration * 0x8cb92ba72f3d8dd7ULL);
  key = splitmix64(h);
  h = key ^ (static_cast<std::uint64_t>(purpose) * 0xa0761d6478bd642fULL);
  return Xoshiro256(splitmix64(h));
}

}  // namespace netgame
