#pragma once

// Linear maps from the fourth-order oscillator to two-dimensional first-order
// systems L = ax/2 x'^2 + ay/2 y'^2 - bx/2 x^2 - by/2 y^2 - g x y with
//   x = mu0 q + mu1 q' + mu2 q'',  y = nu0 q + nu1 q' + nu2 q''.
// Ta kinds send both Euler-Lagrange equations to the oscillator equation; Tb
// kinds send the first and make the second vanish identically.

#include <array>
#include <optional>
#include <string_view>

#include "pu/core.hpp"
#include "pu/hierarchy.hpp"

namespace pu {

enum class TransformKind { kTa1Plus, kTa1Minus, kTa2Plus, kTa2Minus, kTb1, kTb2Plus, kTb2Minus };

inline constexpr std::array<TransformKind, 7> kAllTransformKinds{
    TransformKind::kTa1Plus, TransformKind::kTa1Minus, TransformKind::kTa2Plus,
    TransformKind::kTa2Minus, TransformKind::kTb1,     TransformKind::kTb2Plus,
    TransformKind::kTb2Minus};

std::string_view to_string(TransformKind k);
// Accepts "Ta1+", "Ta1-", "Ta2+", "Ta2-", "Tb1", "Tb2+", "Tb2-".
TransformKind parse_transform_kind(std::string_view s);
// +1 / -1 for the branch label, +1 for Tb1.
int branch_sign(TransformKind k);
bool is_type_a(TransformKind k);

struct LagrangianParams {
  double ax = 0.0;
  double ay = 0.0;
  double bx = 0.0;
  double by = 0.0;
  double g = 0.0;
};

// Free parameters of a family. Ta1/Ta2 use (ax, ay, g); Tb1 uses (ax, bx, g);
// Tb2 uses (ax, by, g). Unused fields are ignored.
struct FreeParams {
  double ax = 1.0;
  double ay = 1.0;
  double bx = 0.0;
  double by = 1.0;
  double g = 0.0;
};

struct TransformSpec {
  TransformKind kind = TransformKind::kTa2Plus;
  std::array<double, 3> mu{};
  std::array<double, 3> nu{};
  LagrangianParams lag;

  // mu2 nu0 - mu0 nu2; zero for Ta1 (x proportional to y).
  double determinant() const { return mu[2] * nu[0] - mu[0] * nu[2]; }
};

struct XYState {
  double x = 0.0;
  double y = 0.0;
  double px = 0.0;
  double py = 0.0;
  Vec to_vec() const { return {x, y, px, py}; }
  static XYState from(std::span<const double> v) { return {v[0], v[1], v[2], v[3]}; }
};

struct RhoContext {
  std::optional<double> rho_g_plus;   // +sqrt(alpha^2 - 4 beta - 4 g^2/(ax ay)), when real
  std::optional<double> rho_g_minus;
  std::optional<double> rho0;         // +sqrt(alpha^2 - 4 beta), when real
  double tau = 0.0;                   // bx^2 - ax bx alpha + ax^2 beta
};
RhoContext rho_context(const PuParams& p, const LagrangianParams& lag);

// sign * sqrt(alpha^2 - 4 beta - 4 g^2 / (ax ay)); throws ComplexBranch.
double rho_g(const PuParams& p, double ax, double ay, double g, int sign);
// sign * sqrt(alpha^2 - 4 beta); throws ComplexBranch.
double rho_0(const PuParams& p, int sign);

// Quadratic form over (x, y, px, py).
class Quad4 {
 public:
  Quad4() = default;
  explicit Quad4(QuadHamiltonian h) : h_(std::move(h)) {}
  const QuadHamiltonian& form() const { return h_; }
  const Mat& matrix() const { return h_.matrix(); }
  double value(const XYState& w) const { return h_.value(w.to_vec()); }

 private:
  QuadHamiltonian h_;
};

// Throws ConstructionError naming the violated condition, ComplexBranch for a
// negative radicand.
TransformSpec build(TransformKind kind, const PuParams& p, const FreeParams& free);

// Max residual of the conditions that make each equation of motion a multiple
// of the oscillator equation (Ta) or vanish identically (second equation, Tb).
double equation_mapping_residual(const TransformSpec& spec, const PuParams& p);

// Kind-specific identities (mu1 = nu1 = 0, mu2 = 1/ax, ...) recomputed from
// the stored Lagrangian parameters.
double defining_relations_residual(const TransformSpec& spec, const PuParams& p);

// Jacobian of (x, y, px, py) with respect to (q, q', q'', q''') with px = ax x'.
Mat forward_jacobian(const TransformSpec& spec);
XYState forward(const TransformSpec& spec, const PhaseState& v);
// Closed-form inverse; throws NonInvertibleTransform when mu2 nu0 = mu0 nu2
// or a kinetic coefficient vanishes.
PhaseState inverse(const TransformSpec& spec, const XYState& w);

// H = px^2/(2 ax) + py^2/(2 ay) + bx/2 x^2 + by/2 y^2 + g x y. Throws
// DegenerateLegendre when a kinetic coefficient is zero.
Quad4 legendre(const TransformSpec& spec);

struct Pullback {
  QuadHamiltonian form;  // over (q, q', q'', q''')
  ChargeCoords coords;   // on (H1, H2)
};
// Energy ax/2 x'^2 + ay/2 y'^2 + bx/2 x^2 + by/2 y^2 + g x y expressed in the
// phase variables; defined for every kind including ay = 0.
Pullback pullback_hamiltonian(const TransformSpec& spec, const PuParams& p);

// Coefficients on (H1, H2) from the closed-form catalog of transformed
// Hamiltonians, using M+ = min(w1^2, w2^2), M- = max.
std::pair<double, double> catalog_pullback_coefficients(const TransformSpec& spec,
                                                        const PuParams& p);

// (c1, c2) with c1 J1 + c2 J2 generating the flow of c3 H1 + c4 H2. Throws
// SingularStructure when c3 is within tolerance of c4 w_i^2.
std::pair<double, double> flow_preserving_coefficients(const PuParams& p, double c3, double c4);
PoissonTensor flow_preserving_tensor(const PuParams& p, double c3, double c4);

// Closed-form J_Ta2 / J_Tb1. Throws SingularStructure for Ta1 / Tb2.
PoissonTensor catalog_flow_tensor(const TransformSpec& spec, const PuParams& p);

struct BracketTable {
  Mat full;  // T J T^T over (x, y, px, py)
  double x_px = 0.0;
  double x_py = 0.0;
  double y_px = 0.0;
  double y_py = 0.0;
};
// Requires mu1 = nu1 = 0 (InvalidInput otherwise).
BracketTable pushforward_brackets(const TransformSpec& spec, const PoissonTensor& jbar);
// The four nonvanishing brackets written out for jbar = c1 J1 + c2 J2.
BracketTable catalog_bracket_table(const TransformSpec& spec, const PuParams& p, double c1,
                                   double c2);

// Entries of the bracket table within tol of the canonical values.
bool is_canonical(const BracketTable& t, double tol);

// ax = -ay = s sqrt(alpha^2 - 4 beta - 4 g), s = +1 and -1. Each solution is
// paired with the Ta2 branch satisfying rho_g ax = ax^2 + 2 g, for which the
// flow-preserving tensor reduces to J1 and q = -x - y. Throws ComplexBranch
// for a negative radicand and ConstructionError when it vanishes.
std::array<TransformSpec, 2> j1_preserving_specs(const PuParams& p, double g);

// Ta2 with ay = -1 (ax = 1): opposite-sign oscillators for g = 0 and a
// Lorentzian-kinetic coupled pair otherwise. ay = +1 (ax = 1): positive
// space-coupled oscillators.
Quad4 ghost_variant(const PuParams& p, double g, int sign, int ay_choice);
// The same Hamiltonians written directly from frequencies and rho_g.
Quad4 ghost_variant_closed_form(const PuParams& p, double g, int sign, int ay_choice);
// 1/2 (px^2 + w1^2 x^2) - 1/2 (py^2 + w2^2 y^2) with w1^2 > w2^2.
Quad4 opposite_sign_oscillators(const PuParams& p);

enum class PdKind { kTa2, kTb1 };

// Ta2 (ax = ay = 1): control is g. Tb1 (ax = 1): control is bx.
bool pd_window_transformed(PdKind kind, const PuParams& p, double control);
QuadHamiltonian transformed_form(PdKind kind, const PuParams& p, double control);
bool pd_window_transformed_by_minors(PdKind kind, const PuParams& p, double control);

struct TransformedDecomposition {
  QuadHamiltonian h12;
  QuadHamiltonian h21;
  double prefactor12 = 0.0;
  double prefactor21 = 0.0;
  std::optional<TransformSpec> spec;  // present when the x-variable forms exist
  std::optional<Quad4> h12_x;
  std::optional<Quad4> h21_x;
};
// Ta2: control = g, aux = branch sign; x-forms need real rho_g.
// Tb1: control = bx, aux = g (non-zero) for the x-forms.
// Throws DecompositionUndefined for degenerate or vanishing frequencies.
TransformedDecomposition pd_decompose_transformed(PdKind kind, const PuParams& p, double control,
                                            double aux);

struct SmEmbedding {
  TransformSpec spec;  // the Tb1 realisation, x = w, y = z
  Quad4 h_sm;          // over (w, z, pw, pz) with pw = mu_w w', pz = mu_z z'
  double lambda = 0.0;
  double delta = 0.0;
  double omega4 = 0.0;  // Omega^4
  double nu_w = 0.0;
  double nu_z = 0.0;
  double mu_w = 0.0;
  double mu_z = 0.0;
  double tau_sm = 0.0;
  double scale = 0.0;  // h_sm = scale * (Tb1 Hamiltonian), scale = mu_w tau_sm^2
};
// Throws InvalidInput for non-positive masses, ComplexBranch for delta < 0.
SmEmbedding sm_embedding(const PuParams& p, double mu_w, double mu_z, double tau_sm, int sign);
// (w, z, pw, pz) for a phase state.
XYState sm_coordinates(const SmEmbedding& e, const PhaseState& v);

}  // namespace pu
