#include "pu/core.hpp"

#include <cmath>
#include <string>

#include "pu/errors.hpp"

namespace pu {

PuParams PuParams::from_coefficients(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw InvalidInput("PuParams: alpha and beta must be finite");
  }
  return PuParams(alpha, beta, std::nullopt, std::nullopt);
}

PuParams PuParams::from_frequencies(double omega1, double omega2) {
  if (!std::isfinite(omega1) || !std::isfinite(omega2)) {
    throw InvalidInput("PuParams: frequencies must be finite");
  }
  const double w1 = omega1 * omega1;
  const double w2 = omega2 * omega2;
  return PuParams(w1 + w2, w1 * w2, omega1, omega2);
}

std::pair<double, double> PuParams::omega_squared() const {
  if (omega1_) return {*omega1_ * *omega1_, *omega2_ * *omega2_};
  const double disc = discriminant();
  if (disc < 0.0) {
    throw ParameterDomainError("frequencies are complex: alpha^2 - 4 beta = " +
                               std::to_string(disc) + " < 0");
  }
  const double root = std::sqrt(disc);
  return {(alpha_ + root) / 2.0, (alpha_ - root) / 2.0};
}

std::pair<double, double> PuParams::omegas() const {
  if (omega1_) return {*omega1_, *omega2_};
  const auto [w1, w2] = omega_squared();
  if (w1 < 0.0 || w2 < 0.0) {
    throw ParameterDomainError("squared frequencies must be non-negative");
  }
  return {std::sqrt(w1), std::sqrt(w2)};
}

bool PuParams::degenerate(double tol) const {
  const auto [w1, w2] = omega_squared();
  return std::abs(w1 - w2) <= tol;
}

PhaseState PhaseState::from(std::span<const double> v) {
  if (v.size() != 4) throw InvalidInput("PhaseState: expected 4 components");
  return {v[0], v[1], v[2], v[3]};
}

QuadHamiltonian::QuadHamiltonian(Mat s) : s_(std::move(s)) {
  if (!s_.square()) throw InvalidInput("QuadHamiltonian: matrix must be square");
  if (!s_.all_finite()) throw InvalidInput("QuadHamiltonian: non-finite entry");
  if ((s_ - s_.transpose()).norm() > 1e-12 * std::max(1.0, s_.norm())) {
    throw InvalidInput("QuadHamiltonian: matrix is not symmetric");
  }
}

double QuadHamiltonian::value(std::span<const double> v) const {
  return 0.5 * num::dot(v, s_ * v);
}

Vec QuadHamiltonian::gradient(std::span<const double> v) const { return s_ * v; }

PoissonTensor::PoissonTensor(Mat j) : j_(std::move(j)) {
  if (!j_.square()) throw InvalidInput("PoissonTensor: matrix must be square");
  if (!j_.all_finite()) throw InvalidInput("PoissonTensor: non-finite entry");
  if ((j_ + j_.transpose()).norm() > 1e-12 * std::max(1.0, j_.norm())) {
    throw InvalidInput("PoissonTensor: matrix is not antisymmetric");
  }
}

double PoissonTensor::bracket(std::span<const double> grad_f,
                              std::span<const double> grad_g) const {
  return num::dot(grad_f, j_ * grad_g);
}

Mat companion_field(const PuParams& p) {
  return Mat{{0, 1, 0, 0},
             {0, 0, 1, 0},
             {0, 0, 0, 1},
             {-p.beta(), 0, -p.alpha(), 0}};
}

// H1 = 1/2 q''^2 - alpha/2 q'^2 - beta/2 q^2 - q' q'''
QuadHamiltonian hamiltonian_h1(const PuParams& p) {
  return QuadHamiltonian(Mat{{-p.beta(), 0, 0, 0},
                             {0, -p.alpha(), 0, -1},
                             {0, 0, 1, 0},
                             {0, -1, 0, 0}});
}

// H2 = beta/2 q'^2 - alpha/2 q''^2 - 1/2 q'''^2 - beta q q''
QuadHamiltonian hamiltonian_h2(const PuParams& p) {
  return QuadHamiltonian(Mat{{0, 0, -p.beta(), 0},
                             {0, p.beta(), 0, 0},
                             {-p.beta(), 0, -p.alpha(), 0},
                             {0, 0, 0, -1}});
}

PoissonTensor poisson_j1(const PuParams& p) {
  return PoissonTensor(Mat{{0, 0, 0, -1},
                           {0, 0, 1, 0},
                           {0, -1, 0, p.alpha()},
                           {1, 0, -p.alpha(), 0}});
}

PoissonTensor poisson_j2(const PuParams& p) {
  if (p.beta() == 0.0) throw ParameterDomainError("J2 requires beta != 0");
  const double ib = 1.0 / p.beta();
  return PoissonTensor(Mat{{0, ib, 0, 0},
                           {-ib, 0, 0, 0},
                           {0, 0, 0, -1},
                           {0, 0, 1, 0}});
}

double field_residual(const PoissonTensor& j, const QuadHamiltonian& h, const Mat& field) {
  return (j.matrix() * h.matrix() - field).norm() / (1.0 + field.norm());
}

double flow_residual(const PoissonTensor& j, const QuadHamiltonian& h, const PuParams& p) {
  return field_residual(j, h, companion_field(p));
}

QuadHamiltonian quad_bracket(const PoissonTensor& j, const QuadHamiltonian& f,
                             const QuadHamiltonian& g) {
  // {F,G}(v) = (S_f v)^T J (S_g v) = 1/2 v^T (S_f J S_g - S_g J S_f) v, using J^T = -J,
  // and (S_f J S_g)^T = -S_g J S_f.
  const Mat& sf = f.matrix();
  const Mat& sg = g.matrix();
  Mat b = sf * j.matrix() * sg;
  return QuadHamiltonian(b + b.transpose());
}

QuadHamiltonian linear_square(std::span<const double> c) {
  return QuadHamiltonian(Mat::outer(c, c));
}

OstrogradskyState ostrogradsky_map(const PuParams& p, const PhaseState& v) {
  return {v.q, v.qd, -v.qddd - p.alpha() * v.qd, v.qdd};
}

Mat ostrogradsky_jacobian(const PuParams& p) {
  return Mat{{1, 0, 0, 0},
             {0, 1, 0, 0},
             {0, -p.alpha(), 0, -1},
             {0, 0, 1, 0}};
}

QuadHamiltonian ostrogradsky_hamiltonian(const PuParams& p) {
  // Variables (q1, q2, pi1, pi2).
  return QuadHamiltonian(Mat{{-p.beta(), 0, 0, 0},
                             {0, p.alpha(), 1, 0},
                             {0, 1, 0, 0},
                             {0, 0, 0, 1}});
}

PoissonTensor canonical_tensor() {
  return PoissonTensor(Mat{{0, 0, 1, 0},
                           {0, 0, 0, 1},
                           {-1, 0, 0, 0},
                           {0, -1, 0, 0}});
}

QuadHamiltonian pullback(const QuadHamiltonian& h, const Mat& t) {
  Mat s = t.transpose() * h.matrix() * t;
  // Re-symmetrise rounding noise only; the input is symmetric by invariant.
  return QuadHamiltonian((s + s.transpose()) * 0.5);
}

PoissonTensor pushforward(const PoissonTensor& j, const Mat& t) {
  Mat w = t * j.matrix() * t.transpose();
  return PoissonTensor((w - w.transpose()) * 0.5);
}

}  // namespace pu
