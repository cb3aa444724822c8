#pragma once

#include <cmath>
#include <cstdint>

namespace qmbench {

// splitmix64 finalizer; full-period bijection on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Counter-based generator: the value at (seed, counter) is a pure function of
// both, so parallel consumers drawing disjoint counters get identical streams
// regardless of evaluation order or thread count.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t word_at(std::uint64_t counter) const {
    return mix64(seed_ ^ mix64(counter));
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform_at(std::uint64_t counter) const {
    return static_cast<double>(word_at(counter) >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

// Stateful convenience wrapper for serial call sites (test fixtures, random
// operator construction). Consumes counters sequentially.
class SequentialRng {
 public:
  explicit SequentialRng(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return rng_.uniform_at(counter_++); }

  // Standard normal via Box-Muller; consumes two counters.
  double normal() {
    double u1 = rng_.uniform_at(counter_++);
    double u2 = rng_.uniform_at(counter_++);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  std::uint64_t uniform_index(std::uint64_t bound) {
    return rng_.word_at(counter_++) % bound;
  }

 private:
  CounterRng rng_;
  std::uint64_t counter_ = 0;
};

}  // namespace qmbench
