#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace histeps {

/// xoshiro256** generator seeded through splitmix64.
///
/// Owned by the library so that a seed fully determines every random draw on
/// every platform; the standard distributions are implementation-defined and
/// are never used for values that end up in results.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller (caches the second variate).
  double normal();
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Combine two words into a well-mixed seed (used for per-epoch streams).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> permutation(std::size_t n, Rng& rng);

}  // namespace histeps
