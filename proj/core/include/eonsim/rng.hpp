#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>

namespace eonsim {

// Self-contained xoshiro256** generator with hand-rolled samplers.
// The standard <random> distributions are implementation-defined, which
// would break bit-for-bit reproducibility of result files across
// standard libraries; everything here is pinned.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t z = seed;
    for (auto& word : state_) {
      word = splitmix64(z);
    }
  }

  std::uint64_t next() {
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

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Exponential with the given mean, strictly positive.
  double exponential(double mean) {
    double x;
    do {
      x = -mean * std::log(1.0 - uniform01());
    } while (x <= 0.0);
    return x;
  }

  // Uniform integer in [0, n). Rejection over a power-of-two mask, unbiased.
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(n | 1);
    std::uint64_t x;
    do {
      x = next() & mask;
    } while (x >= n);
    return x;
  }

  // Index drawn with probability weights[i] / sum(weights).
  std::size_t weighted(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double u = uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

  static std::uint64_t splitmix64(std::uint64_t& z) {
    z += 0x9e3779b97f4a7c15ull;
    std::uint64_t x = z;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  // Deterministic substream derivation: mixes a base seed with stream tags
  // so traffic, failure draws, replications etc. get independent seeds.
  static std::uint64_t derive(std::uint64_t base, std::uint64_t tag,
                              std::uint64_t index = 0) {
    std::uint64_t z = base;
    std::uint64_t s = splitmix64(z);
    z ^= tag * 0x9e3779b97f4a7c15ull;
    s ^= splitmix64(z);
    z ^= index + 0x6a09e667f3bcc909ull;
    s ^= splitmix64(z);
    return s;
  }

 private:
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace eonsim
