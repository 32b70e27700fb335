#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace natlog {

// Every random draw in the library goes through this wrapper. The engine is
// std::mt19937_64 (fully pinned by the standard) and the integer/real
// mappings are spelled out here instead of using <random> distributions,
// whose output is implementation-defined. Identical seeds therefore produce
// identical datasets and checkpoints on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, n). Rejection sampling keeps the draw unbiased.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Uniform double in [0, 1) with 53-bit resolution.
  double real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double real_in(double lo, double hi) { return lo + (hi - lo) * real(); }

  // Fisher-Yates, iterating from the back.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace natlog
