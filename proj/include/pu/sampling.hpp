#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "pu/core.hpp"

namespace pu {

// Seeded sampler with a fixed 53-bit mapping so draws do not depend on the
// standard library's distribution implementations.
class Sampler {
 public:
  static constexpr const char* kName = "mt19937_64";

  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  // Uniform on [lo, hi] with |x| >= min_abs.
  double uniform_away_from_zero(double lo, double hi, double min_abs) {
    for (;;) {
      const double x = uniform(lo, hi);
      if (std::abs(x) >= min_abs) return x;
    }
  }

  PhaseState state(double scale = 1.0) {
    return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale),
            uniform(-scale, scale)};
  }

  // alpha, beta in [-3, 3] with |beta| >= 0.1.
  PuParams coefficients() {
    const double a = uniform(-3.0, 3.0);
    const double b = uniform_away_from_zero(-3.0, 3.0, 0.1);
    return PuParams::from_coefficients(a, b);
  }

  // Frequencies in [lo, hi] with |w1^2 - w2^2| >= 0.1.
  PuParams nondegenerate_frequencies(double lo = 0.5, double hi = 2.0) {
    for (;;) {
      const double w1 = uniform(lo, hi);
      const double w2 = uniform(lo, hi);
      if (std::abs(w1 * w1 - w2 * w2) >= 0.1) return PuParams::from_frequencies(w1, w2);
    }
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pu
