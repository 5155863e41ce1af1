#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace codedcache {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

/// Seed of sub-stream `index` under a parent seed: the (index+1)-th output of
/// a splitmix64 generator started at `seed`. O(1), so sub-streams can be
/// opened in any order and in parallel.
constexpr std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

// Salts separating the independent random decisions of one experiment.
inline constexpr std::uint64_t kSaltContents = 0x636f6e74656e7473ULL;
inline constexpr std::uint64_t kSaltCache = 0x63616368652e2e2eULL;
inline constexpr std::uint64_t kSaltDemands = 0x64656d616e647321ULL;
inline constexpr std::uint64_t kSaltTrial = 0x747269616c735f30ULL;
inline constexpr std::uint64_t kSaltRow = 0x726f777365656473ULL;

/// Deterministic engine. Wraps std::mt19937_64 (whose output sequence the
/// standard pins down) and derives bounded ints and unit doubles from raw
/// 64-bit draws, so no implementation-defined <random> distribution is used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t u64() { return eng_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  /// Unbiased uniform integer in [0, n). Lemire's multiply-shift rejection.
  std::uint64_t below(std::uint64_t n) {
    using u128 = unsigned __int128;
    u128 m = static_cast<u128>(u64()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t t = (0 - n) % n;
      while (lo < t) {
        m = static_cast<u128>(u64()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::mt19937_64 eng_;
};

/// Inverse-CDF sampler over a fixed discrete distribution.
class CdfSampler {
 public:
  explicit CdfSampler(const std::vector<double>& weights) : cdf_(weights) {
    double acc = 0.0;
    for (auto& c : cdf_) {
      acc += c;
      c = acc;
    }
  }

  int draw(Rng& rng) const {
    const double u = rng.unit() * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<int>(it - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace codedcache
