#pragma once

// Parameters, phase states and the two Hamiltonian/Poisson pairs of the
// fourth-order oscillator q'''' + alpha q'' + beta q = 0.
//
// Phase vectors are always ordered (q, q', q'', q''').

#include <array>
#include <optional>
#include <utility>

#include "pu/numkit.hpp"

namespace pu {

using num::Mat;
using num::Vec;

inline constexpr double kDegenerateTol = 1e-8;

class PuParams {
 public:
  static PuParams from_coefficients(double alpha, double beta);
  // alpha = w1^2 + w2^2, beta = w1^2 w2^2.
  static PuParams from_frequencies(double omega1, double omega2);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double discriminant() const { return alpha_ * alpha_ - 4.0 * beta_; }
  bool has_frequencies() const { return omega1_.has_value(); }

  // (w1^2, w2^2). When built from frequencies the caller's ordering is kept;
  // otherwise the larger root comes first. Throws ParameterDomainError when
  // the roots are complex.
  std::pair<double, double> omega_squared() const;
  // (w1, w2) as given, or sqrt of omega_squared(); requires both roots >= 0.
  std::pair<double, double> omegas() const;

  bool degenerate(double tol = kDegenerateTol) const;

 private:
  PuParams(double a, double b, std::optional<double> w1, std::optional<double> w2)
      : alpha_(a), beta_(b), omega1_(w1), omega2_(w2) {}
  double alpha_;
  double beta_;
  std::optional<double> omega1_;
  std::optional<double> omega2_;
};

struct PhaseState {
  double q = 0.0;
  double qd = 0.0;
  double qdd = 0.0;
  double qddd = 0.0;

  std::array<double, 4> as_array() const { return {q, qd, qdd, qddd}; }
  Vec to_vec() const { return {q, qd, qdd, qddd}; }
  static PhaseState from(std::span<const double> v);

  friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

// H(v) = 1/2 v^T S v with S symmetric.
class QuadHamiltonian {
 public:
  QuadHamiltonian() : s_(4, 4) {}
  explicit QuadHamiltonian(Mat s);

  const Mat& matrix() const { return s_; }
  std::size_t dim() const { return s_.rows(); }
  double value(std::span<const double> v) const;
  double value(const PhaseState& v) const { return value(v.to_vec()); }
  Vec gradient(std::span<const double> v) const;

  friend QuadHamiltonian operator+(const QuadHamiltonian& a, const QuadHamiltonian& b) {
    return QuadHamiltonian(a.s_ + b.s_);
  }
  friend QuadHamiltonian operator-(const QuadHamiltonian& a, const QuadHamiltonian& b) {
    return QuadHamiltonian(a.s_ - b.s_);
  }
  friend QuadHamiltonian operator*(double c, const QuadHamiltonian& a) {
    return QuadHamiltonian(c * a.s_);
  }

 private:
  Mat s_;
};

// Constant antisymmetric tensor; {F,G} = grad F . J . grad G.
class PoissonTensor {
 public:
  PoissonTensor() : j_(4, 4) {}
  explicit PoissonTensor(Mat j);

  const Mat& matrix() const { return j_; }
  double bracket(std::span<const double> grad_f, std::span<const double> grad_g) const;
  // Bracket of two phase coordinates by index (0 = q, ..., 3 = q''').
  double bracket(std::size_t i, std::size_t k) const { return j_(i, k); }

  friend PoissonTensor operator+(const PoissonTensor& a, const PoissonTensor& b) {
    return PoissonTensor(a.j_ + b.j_);
  }
  friend PoissonTensor operator*(double c, const PoissonTensor& a) {
    return PoissonTensor(c * a.j_);
  }

 private:
  Mat j_;
};

struct OstrogradskyState {
  double q1 = 0.0;
  double q2 = 0.0;
  double pi1 = 0.0;
  double pi2 = 0.0;
  Vec to_vec() const { return {q1, q2, pi1, pi2}; }
};

// Linear vector field v' = M v of the oscillator.
Mat companion_field(const PuParams& p);

QuadHamiltonian hamiltonian_h1(const PuParams& p);
QuadHamiltonian hamiltonian_h2(const PuParams& p);

PoissonTensor poisson_j1(const PuParams& p);
// Throws ParameterDomainError when beta == 0.
PoissonTensor poisson_j2(const PuParams& p);

// |J S - M| / (1 + |M|): zero iff (J, H) generates the oscillator flow.
double flow_residual(const PoissonTensor& j, const QuadHamiltonian& h, const PuParams& p);
// Same residual against an arbitrary linear field.
double field_residual(const PoissonTensor& j, const QuadHamiltonian& h, const Mat& field);

// {F,G} for quadratic F, G is again quadratic with matrix S_f J S_g - S_g J S_f
// (value 1/2 v^T (...) v).
QuadHamiltonian quad_bracket(const PoissonTensor& j, const QuadHamiltonian& f,
                             const QuadHamiltonian& g);

// Quadratic form 1/2 (c . v)^2 -- the square of a linear function.
QuadHamiltonian linear_square(std::span<const double> c);

OstrogradskyState ostrogradsky_map(const PuParams& p, const PhaseState& v);
// Jacobian of (q1, q2, pi1, pi2) with respect to (q, q', q'', q''').
Mat ostrogradsky_jacobian(const PuParams& p);
// H_PU = pi1 q2 + 1/2 pi2^2 + alpha/2 q2^2 - beta/2 q1^2 over (q1, q2, pi1, pi2).
QuadHamiltonian ostrogradsky_hamiltonian(const PuParams& p);
// Canonical tensor with {q_i, pi_k} = delta_ik.
PoissonTensor canonical_tensor();

// H o T for a linear change of variables w = T v.
QuadHamiltonian pullback(const QuadHamiltonian& h, const Mat& t);
// Tensor transported through w = T v: J_w = T J_v T^T.
PoissonTensor pushforward(const PoissonTensor& j, const Mat& t);

}  // namespace pu
