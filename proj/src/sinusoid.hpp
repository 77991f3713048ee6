#pragma once

#include <array>
#include <cmath>

namespace pu::detail {

// k-th t-derivative of c_sin sin(w (t + shift)) + c_cos cos(w (t + shift)).
inline double sinusoid_derivative(double c_sin, double c_cos, double w, double t, double shift,
                                  int k) {
  const double arg = w * (t + shift);
  const double sn = std::sin(arg);
  const double cs = std::cos(arg);
  const double wk = std::pow(w, k);
  switch (k % 4) {
    case 0: return wk * (c_sin * sn + c_cos * cs);
    case 1: return wk * (c_sin * cs - c_cos * sn);
    case 2: return wk * (-c_sin * sn - c_cos * cs);
    default: return wk * (-c_sin * cs + c_cos * sn);
  }
}

// Derivatives 0..3 of (a + b t) sin(w (t + shift)) + (c + d t) cos(w (t + shift)).
// Leibniz with a linear prefactor keeps two terms.
inline std::array<double, 4> secular_derivatives(double a, double b, double c, double d,
                                                 double w, double t, double shift) {
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k) {
    double v = sinusoid_derivative(a + b * t, c + d * t, w, t, shift, k);
    if (k > 0) v += k * sinusoid_derivative(b, d, w, t, shift, k - 1);
    out[k] = v;
  }
  return out;
}

}  // namespace pu::detail
