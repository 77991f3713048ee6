#pragma once

// Classical solutions, fixed-step RK4 integration of the linear and the
// interacting oscillator, charge monitoring, interaction-term analyses and
// the discovery of compatible (J, H) pairs.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pu/core.hpp"
#include "pu/symmetry.hpp"
#include "pu/transform.hpp"

namespace pu {

struct ClassicalSolution {
  PuParams p;
  Amplitudes amp;
  Regime regime;
};

// Picks the regime from the frequencies.
ClassicalSolution make_solution(const PuParams& p, const Amplitudes& amp);
// (q, q', q'', q''') at t. Throws InvalidRegime when sol.regime disagrees with p.
PhaseState eval_solution(const ClassicalSolution& sol, double t);

enum class PotentialTarget { kOnQ, kOnQdd };

struct Potential {
  std::string name;
  PotentialTarget target = PotentialTarget::kOnQ;
  double lambda = 0.0;
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  // The argument the potential acts on: q or q''.
  double argument(const PhaseState& v) const {
    return target == PotentialTarget::kOnQ ? v.q : v.qdd;
  }
};

// lambda u^4 / 4
Potential quartic(double lambda, PotentialTarget on = PotentialTarget::kOnQ);
// lambda u^3 / 3
Potential cubic(double lambda, PotentialTarget on = PotentialTarget::kOnQ);
// lambda (1 - cos u)
Potential cosine(double lambda, PotentialTarget on = PotentialTarget::kOnQ);

// "name:param=value[,param=value]" with name in {quartic, cubic, cosine},
// params lambda (default 1) and on in {q, qdd} (default q). Throws
// InvalidInput on malformed text.
Potential parse_potential(std::string_view spec);

// Max relative mismatch between derivative and a central difference of value.
double derivative_mismatch(const Potential& pot, std::span<const double> points);

// v' = M v, plus V'(q) or W'(q'') in the last component when a potential is set.
struct Field {
  PuParams p;
  std::optional<Potential> pot;

  PhaseState operator()(const PhaseState& v) const;
};

struct Trajectory {
  double h = 0.0;
  std::vector<std::pair<double, PhaseState>> samples;
  std::vector<std::string> charge_names;
  std::vector<std::vector<double>> charges;  // charges[k][i]: charge k at sample i
};

// Classical RK4 on the uniform grid t_k = k h, k = 0..round(t_end / h).
// Throws InvalidInput for h <= 0 or t_end < h, DivergenceError when the state
// stops being finite.
Trajectory integrate(const Field& field, const PhaseState& v0, double h, double t_end);

// Fills trajectory.charges with the given charges, each optionally augmented
// by the potential value.
void monitor(Trajectory& traj, const std::vector<std::pair<std::string, QuadHamiltonian>>& charges,
             const std::optional<Potential>& augment = std::nullopt);

// max_t |H(t) - H(0)| / (1 + |H(0)|) per charge.
std::vector<double> conservation_report(const Trajectory& traj,
                                        const std::vector<QuadHamiltonian>& charges,
                                        const std::optional<Potential>& augment = std::nullopt);

struct DirectionResidual {
  double angle = 0.0;  // J = cos(angle) J1 + sin(angle) J2
  double c1 = 0.0;
  double c2 = 0.0;
  double residual = 0.0;
};

struct CompatibilityReport {
  std::vector<DirectionResidual> directions;
  std::size_t compatible_index = 0;  // index of the smallest residual
  double compatible_residual = 0.0;
  double min_other_residual = 0.0;
  double floor = 0.0;
  bool unique = false;  // one direction at or below tol, all others >= floor
};

// Potential on q pairs with H1 + V, potential on q'' with H2 + W. Directions
// are `angles` points on the unit circle in (c1, c2), each scored by the max
// over `states` random states of |J grad H - v| / (1 + |v|). Throws
// InconclusiveTest when the potential derivative vanishes on the sample.
CompatibilityReport interaction_compatibility(const PuParams& p, const Potential& pot,
                                              std::uint64_t seed, std::size_t angles = 32,
                                              std::size_t states = 50, double tol = 1e-9,
                                              double floor = 1e-3);

struct InteractionConstraint {
  std::array<TransformSpec, 2> specs;  // ax > 0 first
  double constraint_residual = 0.0;    // max |dq/dx + 1|, |dq/dy + 1|
  bool ta1_singular = true;            // mu2 nu0 = mu0 nu2 for Ta1
};
// ax = -ay = +-sqrt(alpha^2 - 4 beta - 4 g) through the Ta2 family.
InteractionConstraint interaction_transform_constraint(const PuParams& p, double g);

struct XYTrajectory {
  double h = 0.0;
  std::vector<std::pair<double, XYState>> samples;
};
// RK4 for ax x'' + bx x + g y + dV/dx = 0 (and the y analogue) with
// V(x, y) = V(q(x, y)) and q = -x - y.
XYTrajectory integrate_xy(const TransformSpec& spec, const Potential& pot, const XYState& w0,
                          double h, double t_end);

// Integrates both routes from v0 and returns max |inverse(w(t)) - v(t)|.
double two_route_error(const PuParams& p, const TransformSpec& spec, const Potential& pot,
                       const PhaseState& v0, double h, double t_end);

struct DiscoveredStructure {
  Mat k;                                 // antisymmetric, K M + M^T K = 0
  double condition = 0.0;                // sigma_max / sigma_min of K
  std::optional<PoissonTensor> j;        // K^{-1}, when well conditioned
  std::optional<QuadHamiltonian> h;      // K M
  double residual = 0.0;                 // flow residual of (j, h)
};
// Solves for every antisymmetric K with K M symmetric. Throws
// ParameterDomainError when beta = 0.
std::vector<DiscoveredStructure> structure_discovery(const PuParams& p, double tol = 1e-10);
// Residual of projecting k onto the discovered span, relative to 1 + |k|.
double structure_span_residual(const std::vector<DiscoveredStructure>& basis, const Mat& k);

}  // namespace pu
