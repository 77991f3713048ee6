#pragma once

// Bi-Hamiltonian recursion, the conserved-charge ladder, the X4 Hamiltonian
// pair and flow-preserving combinations (c1 J1 + c2 J2, c3 H1 + c4 H2).

#include <string_view>
#include <vector>

#include "pu/core.hpp"

namespace pu {

// Coordinates of a quadratic form in the (H1, H2) plane.
struct ChargeCoords {
  double on_h1 = 0.0;
  double on_h2 = 0.0;
  double residual = 0.0;  // |S - a S1 - b S2| / (1 + |S|)
};

// Least-squares fit onto (H1, H2). Throws InvalidInput when the relative
// residual exceeds tol, i.e. the form leaves the plane.
ChargeCoords charge_coordinates(const PuParams& p, const QuadHamiltonian& h,
                                double tol = 1e-10);

// S_{n+1} = J2^{-1} J1 S_n. Throws ParameterDomainError for beta == 0 and
// RecursionBreakdown when the product is not symmetric (not integrable).
QuadHamiltonian next_charge(const PuParams& p, const QuadHamiltonian& h);

class ChargeLadder {
 public:
  static constexpr std::size_t kDefaultDepth = 8;

  // H1, H2, ..., H_depth via next_charge.
  static ChargeLadder build(const PuParams& p, std::size_t depth = kDefaultDepth);

  const std::vector<QuadHamiltonian>& charges() const { return charges_; }
  // 1-based, matching H_n.
  const QuadHamiltonian& at(std::size_t n) const { return charges_.at(n - 1); }
  const std::vector<ChargeCoords>& coordinates() const { return coords_; }
  std::size_t depth() const { return charges_.size(); }

 private:
  std::vector<QuadHamiltonian> charges_;
  std::vector<ChargeCoords> coords_;
};

// P_n = sum_{k=1}^{floor((n-1)/2 + 1)} c_k^n alpha^{n+1-2k} beta^{k-1},
// c_k^n = (-1)^{n+k+1}/(k-1)! prod_{l=k}^{2k-2} (n - l).
double pu_polynomial(int n, const PuParams& p);

// H_{k+1} = beta P_{k-1} H1 + (P_{k+1} + beta P_{k-1}) / alpha H2.
// Throws ParameterDomainError for alpha == 0, InvalidInput for k < 1.
QuadHamiltonian ladder_via_x3(const PuParams& p, int k);

// Generator matrix of X4 = M^3 + alpha M.
Mat x4_generator(const PuParams& p);

struct X4Pair {
  QuadHamiltonian hbar1;  // alpha H1 + H2, paired with J1
  QuadHamiltonian hbar2;  // -beta H1, paired with J2
};
X4Pair x4_pair(const PuParams& p);

enum class NumeratorVariant { kSymmetric, kLiteral };
std::string_view to_string(NumeratorVariant v);

struct CombinedStructure {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  PoissonTensor jbar;
  QuadHamiltonian hbar;
  NumeratorVariant variant = NumeratorVariant::kSymmetric;
  double residual = 0.0;  // flow residual of (jbar, hbar)
};

// (c3, c4) for a given (c1, c2) under either reading of the numerator of c3:
// kSymmetric uses c1 w1^2 w2^2, kLiteral uses c1 w1^4.
std::pair<double, double> combination_coefficients(const PuParams& p, double c1, double c2,
                                                   NumeratorVariant variant);

// Chooses the numerator reading whose flow residual is <= 1e-10 and records
// it. Throws DegenerateCombination when c2 is within 1e-10 of c1 w_i^2, and
// when neither reading reproduces the flow.
CombinedStructure combine(const PuParams& p, double c1, double c2);

// Value form of (q''' + wj2 q')^2 + wi2 (q'' + wj2 q)^2.
QuadHamiltonian square_pair_form(double wi2, double wj2);

struct PdDecomposition {
  QuadHamiltonian h12;
  QuadHamiltonian h21;
  double prefactor12 = 0.0;  // w1^2 / (2 (c1 w1^2 - c2)(w1^2 - w2^2))
  double prefactor21 = 0.0;
};

// hbar = h12 + h21 with h_ij = prefactor_ij * square_pair_form(wi^2, wj^2).
// Throws DecompositionUndefined for degenerate or vanishing frequencies.
PdDecomposition pd_decompose(const PuParams& p, double c1, double c2);

// (c1 w1^2 - c2)(w1^2 - w2^2) > 0 and (c1 w2^2 - c2)(w2^2 - w1^2) > 0.
bool pd_window(const PuParams& p, double c1, double c2);
// Sylvester test on the assembled hbar.
bool pd_window_by_minors(const PuParams& p, double c1, double c2);

}  // namespace pu
