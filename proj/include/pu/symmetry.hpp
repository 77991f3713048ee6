#pragma once

// Linear Lie point symmetries of the oscillator flow: discovery through the
// commutant of the companion matrix, the closed-form basis X1..X4, their
// action on quadratic Hamiltonians, and the finite group flows.

#include <array>
#include <functional>
#include <string_view>
#include <vector>

#include "pu/core.hpp"

namespace pu {

// Linear vector field X = (A v) . d/dv.
struct Generator {
  Mat a;

  Vec apply(std::span<const double> v) const { return a * v; }
};

// [X, Y] for X = A v, Y = B v is the linear field (B A - A B) v.
Generator commutator(const Generator& x, const Generator& y);

// 16x16 matrix of A -> M A - A M acting on row-major vec(A).
Mat sylvester_operator(const Mat& m);

// Orthonormal (in Frobenius sense) basis of the commutant of the companion
// matrix, from the nullspace of the Sylvester operator.
std::vector<Generator> solve_symmetries(const PuParams& p, double tol = 1e-10);

struct PowerProjection {
  std::array<double, 4> coeffs{};  // on I, M, M^2, M^3
  double residual = 0.0;           // |A - sum c_k M^k|_F / (1 + |A|_F)
};
// Least-squares identification of a commutant element as a polynomial in M.
PowerProjection project_onto_powers(const PuParams& p, const Mat& a);

// Residual of projecting a onto span(basis), relative to 1 + |a|.
double span_residual(const std::vector<Generator>& basis, const Mat& a);

struct SymmetryBasis {
  Generator x1;  // the flow itself
  Generator x2;  // Euler scaling, 1/2 identity
  Generator x3;  // 1/2 M^2
  Generator x4;  // M^3 + alpha M
};
// Built entry by entry from the component form of each generator.
SymmetryBasis standard_basis(const PuParams& p);

// Lie derivative X(H) = grad H . (A v); matrix S A + A^T S.
QuadHamiltonian act_on_hamiltonian(const Generator& x, const QuadHamiltonian& h);

// exp(s A) v0.
PhaseState group_flow(const Generator& x, double s, const PhaseState& v0);

enum class FlowKind { kX2, kX3, kX4 };
enum class Regime { kNondegenerate, kDegenerate };

std::string_view to_string(FlowKind k);
std::string_view to_string(Regime r);

// Solution amplitudes. Nondegenerate: A at w1, B at w2. Degenerate: A are the
// pure oscillation amplitudes, B multiply t.
struct Amplitudes {
  double a1 = 0.0;
  double a2 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
};

Regime regime_of(const PuParams& p, double tol = kDegenerateTol);

// phi_s applied to the classical solution at time t, in closed form. The
// first component is phi_1, the rest its first three t-derivatives. Throws
// InvalidRegime when the requested regime does not match p.
PhaseState closed_form_flow(FlowKind which, Regime regime, const Amplitudes& amp,
                            const PuParams& p, double t, double s);

struct FlowCurve {
  Generator generator;
  double s = 0.0;
  std::vector<std::pair<double, PhaseState>> samples;
};

// Samples phi_s(solution(t)) on the given times via group_flow.
FlowCurve flow_curve(const Generator& x, double s, std::span<const double> times,
                     const std::function<PhaseState(double)>& solution);

}  // namespace pu
