#include "pu/symmetry.hpp"

#include <cmath>
#include <string>

#include "pu/errors.hpp"
#include "sinusoid.hpp"

namespace pu {

Generator commutator(const Generator& x, const Generator& y) {
  return {y.a * x.a - x.a * y.a};
}

Mat sylvester_operator(const Mat& m) {
  const std::size_t n = m.rows();
  Mat op(n * n, n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = i * n + j;
      for (std::size_t k = 0; k < n; ++k) {
        op(row, k * n + j) += m(i, k);  // (M A)_ij
        op(row, i * n + k) -= m(k, j);  // (A M)_ij
      }
    }
  }
  return op;
}

std::vector<Generator> solve_symmetries(const PuParams& p, double tol) {
  const Mat m = companion_field(p);
  std::vector<Generator> basis;
  for (const auto& v : num::nullspace(sylvester_operator(m), tol)) {
    basis.push_back({num::unflatten(v, 4, 4)});
  }
  return basis;
}

PowerProjection project_onto_powers(const PuParams& p, const Mat& a) {
  const Mat m = companion_field(p);
  std::array<Mat, 4> powers{Mat::identity(4), m, m * m, m * m * m};
  Mat design(16, 4);
  for (std::size_t k = 0; k < 4; ++k) {
    const auto flat = num::flatten(powers[k]);
    for (std::size_t i = 0; i < 16; ++i) design(i, k) = flat[i];
  }
  const auto target = num::flatten(a);
  const auto fit = num::least_squares(design, target);
  PowerProjection out;
  for (std::size_t k = 0; k < 4; ++k) out.coeffs[k] = fit.coeffs[k];
  out.residual = fit.residual / (1.0 + a.norm());
  return out;
}

double span_residual(const std::vector<Generator>& basis, const Mat& a) {
  std::vector<Vec> flat;
  flat.reserve(basis.size());
  for (const auto& g : basis) flat.push_back(num::flatten(g.a));
  return num::projection_residual(flat, num::flatten(a)) / (1.0 + a.norm());
}

SymmetryBasis standard_basis(const PuParams& p) {
  const double al = p.alpha();
  const double be = p.beta();
  SymmetryBasis b;
  // X1 = q' d_q + q'' d_q' + q''' d_q'' - (alpha q'' + beta q) d_q'''
  b.x1.a = Mat{{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {-be, 0, -al, 0}};
  // X2 = 1/2 (q d_q + q' d_q' + q'' d_q'' + q''' d_q''')
  b.x2.a = 0.5 * Mat::identity(4);
  // X3 = 1/2 [q'' d_q + q''' d_q' - (alpha q'' + beta q) d_q'' - (alpha q''' + beta q') d_q''']
  b.x3.a = Mat{{0, 0, 0.5, 0},
               {0, 0, 0, 0.5},
               {-0.5 * be, 0, -0.5 * al, 0},
               {0, -0.5 * be, 0, -0.5 * al}};
  // X4 = (alpha q' + q''') d_q - beta q d_q' - beta q' d_q'' - beta q'' d_q'''
  b.x4.a = Mat{{0, al, 0, 1}, {-be, 0, 0, 0}, {0, -be, 0, 0}, {0, 0, -be, 0}};
  return b;
}

QuadHamiltonian act_on_hamiltonian(const Generator& x, const QuadHamiltonian& h) {
  const Mat sa = h.matrix() * x.a;
  return QuadHamiltonian(sa + sa.transpose());
}

PhaseState group_flow(const Generator& x, double s, const PhaseState& v0) {
  return PhaseState::from(num::expm(s * x.a) * std::span<const double>(v0.to_vec()));
}

std::string_view to_string(FlowKind k) {
  switch (k) {
    case FlowKind::kX2: return "X2";
    case FlowKind::kX3: return "X3";
    case FlowKind::kX4: return "X4";
  }
  return "?";
}

std::string_view to_string(Regime r) {
  return r == Regime::kDegenerate ? "degenerate" : "nondegenerate";
}

Regime regime_of(const PuParams& p, double tol) {
  return p.degenerate(tol) ? Regime::kDegenerate : Regime::kNondegenerate;
}

namespace {

using detail::secular_derivatives;
using detail::sinusoid_derivative;

PhaseState nondegenerate_flow(FlowKind which, const Amplitudes& amp, double w1, double w2,
                              double t, double s) {
  // Each frequency band gets an amplitude scale and a time shift.
  double scale1 = 1.0, scale2 = 1.0, shift1 = 0.0, shift2 = 0.0;
  switch (which) {
    case FlowKind::kX2:
      scale1 = scale2 = std::exp(s / 2.0);
      break;
    case FlowKind::kX3:
      scale1 = std::exp(-0.5 * s * w1 * w1);
      scale2 = std::exp(-0.5 * s * w2 * w2);
      break;
    case FlowKind::kX4:
      shift1 = s * w2 * w2;
      shift2 = s * w1 * w1;
      break;
  }
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k) {
    out[k] = scale1 * sinusoid_derivative(amp.a1, amp.a2, w1, t, shift1, k) +
             scale2 * sinusoid_derivative(amp.b1, amp.b2, w2, t, shift2, k);
  }
  return PhaseState::from(out);
}

PhaseState degenerate_flow(FlowKind which, const Amplitudes& amp, double w, double t,
                           double s) {
  // (a + b t) sin(w (t + shift)) + (c + d t) cos(w (t + shift)), times scale.
  double a = amp.a1, b = amp.b1, c = amp.a2, d = amp.b2;
  double scale = 1.0, shift = 0.0;
  switch (which) {
    case FlowKind::kX2:
      scale = std::exp(s / 2.0);
      break;
    case FlowKind::kX3:
      scale = std::exp(-0.5 * s * w * w);
      a = amp.a1 - amp.b2 * s * w;
      c = amp.a2 + amp.b1 * s * w;
      break;
    case FlowKind::kX4:
      shift = s * w * w;
      a = amp.a1 - amp.b1 * s * w * w;
      c = amp.a2 - amp.b2 * s * w * w;
      break;
  }
  auto out = secular_derivatives(a, b, c, d, w, t, shift);
  for (double& x : out) x *= scale;
  return PhaseState::from(out);
}

}  // namespace

PhaseState closed_form_flow(FlowKind which, Regime regime, const Amplitudes& amp,
                            const PuParams& p, double t, double s) {
  if (regime_of(p) != regime) {
    throw InvalidRegime(std::string("closed_form_flow: requested ") +
                        std::string(to_string(regime)) + " branch but parameters are " +
                        std::string(to_string(regime_of(p))));
  }
  const auto [w1, w2] = p.omegas();
  if (regime == Regime::kDegenerate) return degenerate_flow(which, amp, w1, t, s);
  return nondegenerate_flow(which, amp, w1, w2, t, s);
}

FlowCurve flow_curve(const Generator& x, double s, std::span<const double> times,
                     const std::function<PhaseState(double)>& solution) {
  FlowCurve curve{x, s, {}};
  const Mat flow = num::expm(s * x.a);
  for (double t : times) {
    const auto v0 = solution(t).to_vec();
    curve.samples.emplace_back(t, PhaseState::from(flow * std::span<const double>(v0)));
  }
  return curve;
}

}  // namespace pu
