#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace errsim {

/// Seeded random stream with a fixed draw layout.
///
/// Distributions are generated in-line from raw mt19937_64 output instead of
/// through std:: distribution objects, so the byte-exact sequence depends only
/// on the seed and the order of calls.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller. Two raw draws per sample, no cached spare.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double sigma) { return sigma * normal(); }

  /// Uniform integer in [0, n). Modulo bias is negligible for n << 2^64.
  std::uint64_t integer(std::uint64_t n) { return gen_() % n; }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace errsim
