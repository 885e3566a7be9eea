#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace korpus {

/// Seeded generator used everywhere randomness is needed.
///
/// mt19937_64's output sequence is fixed by the standard, and the mappings
/// below avoid std::uniform_*_distribution, whose streams differ between
/// standard-library implementations. Same seed, same numbers, any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(gen_() >> 11) * (1.0 / 9007199254740992.0); }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform in [0, n). Modulo bias is irrelevant at our scales.
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace korpus
