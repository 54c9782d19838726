#pragma once

// Deterministic PRNG: xoshiro256** seeded through splitmix64, plus the few
// distribution helpers this project needs. std::<random> engines are portable
// but its distributions are not pinned by the standard; everything here is,
// so identical seeds give identical streams on any platform.

#include <cstdint>
#include <vector>

namespace quso {

// splitmix64 finalizer; also used to derive substream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace stream_id {
inline constexpr std::uint64_t kGeneratorAssignment = 1;
inline constexpr std::uint64_t kLoadSampling = 2;
inline constexpr std::uint64_t kLineCosts = 3;
inline constexpr std::uint64_t kOutcomeSampling = 4;
inline constexpr std::uint64_t kSaInitial = 5;
inline constexpr std::uint64_t kSaProposals = 6;
// restart r of a simulated-annealing run draws from stream kSaRestartBase + r
inline constexpr std::uint64_t kSaRestartBase = 1u << 20;
}  // namespace stream_id

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) {
      s += 0x9e3779b97f4a7c15ull;
      word = mix64(s);
    }
  }

  // Independent, documented substream of a base seed.
  static Rng stream(std::uint64_t seed, std::uint64_t id) {
    return Rng(mix64(seed + 0x9e3779b97f4a7c15ull * (id + 1)));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53 random bits.
  double uniform_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1].
  double uniform_open_closed() { return 1.0 - uniform_double(); }

  // Uniform integer in [0, bound); Lemire multiply-shift with rejection.
  std::uint64_t uniform_index(std::uint64_t bound) {
    using u128 = unsigned __int128;
    u128 m = static_cast<u128>(next_u64()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (lo < threshold) {
        m = static_cast<u128>(next_u64()) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // First k entries of a uniform random permutation of [0, n) (partial
  // Fisher-Yates), in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + static_cast<std::size_t>(uniform_index(n - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
};

}  // namespace quso
