#pragma once

#include <cstdint>

namespace blockea {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// Seed for the index-th independent stream under `seed`. Equals the
/// (index + 1)-th output of a SplitMix64 generator started at `seed`, so the
/// value depends only on (seed, index), never on execution order.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix_finalize(seed + kGoldenGamma * (index + 1));
}

/// Seed of the context that executes top-level statements outside any run.
constexpr std::uint64_t main_context_seed(std::uint64_t master_seed) {
  return derive_seed(master_seed, ~std::uint64_t{0});
}

/// Seeded SplitMix64 stream. Every draw helper below is defined in terms of
/// next_u64() only, and the JavaScript runtime of exported bundles mirrors
/// each helper draw-for-draw. Single owner: never share across threads.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += kGoldenGamma;
    return splitmix_finalize(state_);
  }

  /// Uniform in [0, bound) by rejection; bound must be >= 1.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return x % bound;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Fair coin from the top bit.
  bool bit() { return (next_u64() >> 63) != 0; }

  bool bernoulli(double p) { return unit() < p; }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace blockea
