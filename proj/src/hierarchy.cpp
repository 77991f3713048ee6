#include "pu/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pu/errors.hpp"

namespace pu {

ChargeCoords charge_coordinates(const PuParams& p, const QuadHamiltonian& h, double tol) {
  const Vec s1 = num::flatten(hamiltonian_h1(p).matrix());
  const Vec s2 = num::flatten(hamiltonian_h2(p).matrix());
  Mat basis(16, 2);
  for (std::size_t i = 0; i < 16; ++i) {
    basis(i, 0) = s1[i];
    basis(i, 1) = s2[i];
  }
  const Vec target = num::flatten(h.matrix());
  const auto fit = num::least_squares(basis, target);
  ChargeCoords c{fit.coeffs[0], fit.coeffs[1], fit.residual / (1.0 + num::norm(target))};
  if (c.residual > tol) {
    throw InvalidInput("charge_coordinates: form leaves the (H1, H2) plane, residual " +
                       std::to_string(c.residual));
  }
  return c;
}

QuadHamiltonian next_charge(const PuParams& p, const QuadHamiltonian& h) {
  if (p.beta() == 0.0) throw ParameterDomainError("next_charge requires beta != 0");
  const Mat step = num::inverse(poisson_j2(p).matrix()) * poisson_j1(p).matrix();
  const Mat s = step * h.matrix();
  const double asym = (s - s.transpose()).max_abs();
  if (asym > 1e-10 * std::max(1.0, s.max_abs())) {
    throw RecursionBreakdown("next_charge: J2^{-1} J1 S is not symmetric (asymmetry " +
                             std::to_string(asym) + ")");
  }
  return QuadHamiltonian((s + s.transpose()) * 0.5);
}

ChargeLadder ChargeLadder::build(const PuParams& p, std::size_t depth) {
  ChargeLadder ladder;
  if (depth == 0) return ladder;
  ladder.charges_.push_back(hamiltonian_h1(p));
  if (depth >= 2) ladder.charges_.push_back(hamiltonian_h2(p));
  while (ladder.charges_.size() < depth) {
    ladder.charges_.push_back(next_charge(p, ladder.charges_.back()));
  }
  for (const auto& h : ladder.charges_) ladder.coords_.push_back(charge_coordinates(p, h));
  return ladder;
}

double pu_polynomial(int n, const PuParams& p) {
  if (n < 0) throw InvalidInput("pu_polynomial: n must be >= 0");
  // floor((n-1)/2 + 1), computed on the reals so n = 0 gives 0.
  const int upper = static_cast<int>(std::floor((n - 1) / 2.0 + 1.0));
  double sum = 0.0;
  double factorial = 1.0;  // (k-1)!
  for (int k = 1; k <= upper; ++k) {
    if (k > 1) factorial *= (k - 1);
    double prod = 1.0;
    for (int l = k; l <= 2 * k - 2; ++l) prod *= (n - l);
    const double sign = ((n + k + 1) % 2 == 0) ? 1.0 : -1.0;
    const double c = sign / factorial * prod;
    sum += c * std::pow(p.alpha(), n + 1 - 2 * k) * std::pow(p.beta(), k - 1);
  }
  return sum;
}

QuadHamiltonian ladder_via_x3(const PuParams& p, int k) {
  if (k < 1) throw InvalidInput("ladder_via_x3: k must be >= 1");
  if (p.alpha() == 0.0) throw ParameterDomainError("ladder_via_x3 requires alpha != 0");
  const double pkm1 = pu_polynomial(k - 1, p);
  const double pkp1 = pu_polynomial(k + 1, p);
  const double on_h1 = p.beta() * pkm1;
  const double on_h2 = (pkp1 + p.beta() * pkm1) / p.alpha();
  return on_h1 * hamiltonian_h1(p) + on_h2 * hamiltonian_h2(p);
}

Mat x4_generator(const PuParams& p) {
  const Mat m = companion_field(p);
  return m * m * m + p.alpha() * m;
}

X4Pair x4_pair(const PuParams& p) {
  const auto h1 = hamiltonian_h1(p);
  const auto h2 = hamiltonian_h2(p);
  return {p.alpha() * h1 + h2, -p.beta() * h1};
}

std::string_view to_string(NumeratorVariant v) {
  return v == NumeratorVariant::kSymmetric ? "c1*w1^2*w2^2" : "c1*w1^4";
}

namespace {

void check_combination_denominators(double c1, double c2, double w1, double w2) {
  for (double w : {w1, w2}) {
    const double d = c2 - c1 * w;
    if (std::abs(d) <= 1e-10 * std::max(1.0, std::abs(c2) + std::abs(c1 * w))) {
      throw DegenerateCombination("combine: c2 - c1 w^2 vanishes (c1=" + std::to_string(c1) +
                                  ", c2=" + std::to_string(c2) + ", w^2=" + std::to_string(w) +
                                  ")");
    }
  }
}

}  // namespace

std::pair<double, double> combination_coefficients(const PuParams& p, double c1, double c2,
                                                   NumeratorVariant variant) {
  const auto [w1, w2] = p.omega_squared();
  check_combination_denominators(c1, c2, w1, w2);
  const double denom = (c2 - c1 * w1) * (c2 - c1 * w2);
  const double numer = variant == NumeratorVariant::kSymmetric ? c1 * w1 * w2 : c1 * w1 * w1;
  return {numer / denom, c2 / denom};
}

CombinedStructure combine(const PuParams& p, double c1, double c2) {
  const PoissonTensor jbar = c1 * poisson_j1(p) + c2 * poisson_j2(p);
  const auto h1 = hamiltonian_h1(p);
  const auto h2 = hamiltonian_h2(p);

  CombinedStructure best;
  bool found = false;
  for (auto variant : {NumeratorVariant::kLiteral, NumeratorVariant::kSymmetric}) {
    const auto [c3, c4] = combination_coefficients(p, c1, c2, variant);
    QuadHamiltonian hbar = c3 * h1 + c4 * h2;
    const double res = flow_residual(jbar, hbar, p);
    if (res <= 1e-10 && (!found || res < best.residual)) {
      best = {c1, c2, c3, c4, jbar, std::move(hbar), variant, res};
      found = true;
    }
  }
  if (!found) {
    throw DegenerateCombination("combine: no numerator reading reproduces the flow for c1=" +
                                std::to_string(c1) + ", c2=" + std::to_string(c2));
  }
  return best;
}

QuadHamiltonian square_pair_form(double wi2, double wj2) {
  const Vec u{0.0, wj2, 0.0, 1.0};   // q''' + wj^2 q'
  const Vec w{wj2, 0.0, 1.0, 0.0};   // q'' + wj^2 q
  // Value u.v^2 + wi^2 (w.v)^2 equals 1/2 v^T (2 u u^T + 2 wi^2 w w^T) v.
  return QuadHamiltonian(2.0 * Mat::outer(u, u) + (2.0 * wi2) * Mat::outer(w, w));
}

PdDecomposition pd_decompose(const PuParams& p, double c1, double c2) {
  const auto [w1, w2] = p.omega_squared();
  if (std::abs(w1 - w2) <= kDegenerateTol) {
    throw DecompositionUndefined("pd_decompose: degenerate frequencies");
  }
  if (w1 == 0.0 || w2 == 0.0) {
    throw DecompositionUndefined("pd_decompose: frequencies must be non-zero");
  }
  check_combination_denominators(c1, c2, w1, w2);
  const double pre12 = w1 / (2.0 * (c1 * w1 - c2) * (w1 - w2));
  const double pre21 = w2 / (2.0 * (c1 * w2 - c2) * (w2 - w1));
  return {pre12 * square_pair_form(w1, w2), pre21 * square_pair_form(w2, w1), pre12, pre21};
}

bool pd_window(const PuParams& p, double c1, double c2) {
  const auto [w1, w2] = p.omega_squared();
  return (c1 * w1 - c2) * (w1 - w2) > 0.0 && (c1 * w2 - c2) * (w2 - w1) > 0.0;
}

bool pd_window_by_minors(const PuParams& p, double c1, double c2) {
  return num::positive_definite(combine(p, c1, c2).hbar.matrix());
}

}  // namespace pu
