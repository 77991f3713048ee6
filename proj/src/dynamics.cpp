#include "pu/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pu/errors.hpp"
#include "pu/hierarchy.hpp"
#include "pu/sampling.hpp"
#include "sinusoid.hpp"

namespace pu {

ClassicalSolution make_solution(const PuParams& p, const Amplitudes& amp) {
  return {p, amp, regime_of(p)};
}

PhaseState eval_solution(const ClassicalSolution& sol, double t) {
  if (regime_of(sol.p) != sol.regime) {
    throw InvalidRegime("eval_solution: regime " + std::string(to_string(sol.regime)) +
                        " does not match the parameters");
  }
  const auto [w1, w2] = sol.p.omegas();
  const auto& a = sol.amp;
  std::array<double, 4> out{};
  if (sol.regime == Regime::kDegenerate) {
    out = detail::secular_derivatives(a.a1, a.b1, a.a2, a.b2, w1, t, 0.0);
  } else {
    for (int k = 0; k < 4; ++k) {
      out[k] = detail::sinusoid_derivative(a.a1, a.a2, w1, t, 0.0, k) +
               detail::sinusoid_derivative(a.b1, a.b2, w2, t, 0.0, k);
    }
  }
  return PhaseState::from(out);
}

namespace {

Potential make_potential(std::string name, double lambda, PotentialTarget on,
                         std::function<double(double)> v, std::function<double(double)> dv) {
  return {std::move(name), on, lambda, std::move(v), std::move(dv)};
}

double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw InvalidInput("potential: bad value for " + std::string(what) + ": '" +
                       std::string(text) + "'");
  }
  return v;
}

}  // namespace

Potential quartic(double lambda, PotentialTarget on) {
  return make_potential(
      "quartic", lambda, on, [lambda](double u) { return lambda * u * u * u * u / 4.0; },
      [lambda](double u) { return lambda * u * u * u; });
}

Potential cubic(double lambda, PotentialTarget on) {
  return make_potential(
      "cubic", lambda, on, [lambda](double u) { return lambda * u * u * u / 3.0; },
      [lambda](double u) { return lambda * u * u; });
}

Potential cosine(double lambda, PotentialTarget on) {
  return make_potential(
      "cosine", lambda, on, [lambda](double u) { return lambda * (1.0 - std::cos(u)); },
      [lambda](double u) { return lambda * std::sin(u); });
}

Potential parse_potential(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  double lambda = 1.0;
  PotentialTarget on = PotentialTarget::kOnQ;
  if (colon != std::string_view::npos) {
    std::string_view rest = spec.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw InvalidInput("potential: expected param=value, got '" + std::string(item) + "'");
      }
      const auto key = item.substr(0, eq);
      const auto val = item.substr(eq + 1);
      if (key == "lambda") {
        lambda = parse_double(val, key);
      } else if (key == "on") {
        if (val == "q") {
          on = PotentialTarget::kOnQ;
        } else if (val == "qdd") {
          on = PotentialTarget::kOnQdd;
        } else {
          throw InvalidInput("potential: on must be q or qdd");
        }
      } else {
        throw InvalidInput("potential: unknown parameter '" + std::string(key) + "'");
      }
    }
  }
  if (name == "quartic") return quartic(lambda, on);
  if (name == "cubic") return cubic(lambda, on);
  if (name == "cosine") return cosine(lambda, on);
  throw InvalidInput("potential: unknown name '" + std::string(name) +
                     "' (expected quartic, cubic or cosine)");
}

double derivative_mismatch(const Potential& pot, std::span<const double> points) {
  double worst = 0.0;
  for (double u : points) {
    const double h = 1e-4 * std::max(1.0, std::abs(u));
    const double fd = (pot.value(u + h) - pot.value(u - h)) / (2.0 * h);
    const double d = pot.derivative(u);
    worst = std::max(worst, std::abs(fd - d) / std::max(1.0, std::abs(d)));
  }
  return worst;
}

PhaseState Field::operator()(const PhaseState& v) const {
  PhaseState out{v.qd, v.qdd, v.qddd, -p.alpha() * v.qdd - p.beta() * v.q};
  if (pot) out.qddd += pot->derivative(pot->argument(v));
  return out;
}

namespace {

template <typename State, typename F>
State rk4_step(const F& f, const State& y, double h) {
  const auto k1 = f(y);
  const auto k2 = f(y + (0.5 * h) * k1);
  const auto k3 = f(y + (0.5 * h) * k2);
  const auto k4 = f(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Fixed-size state with the arithmetic the stepper needs.
struct S4 {
  std::array<double, 4> v{};
  friend S4 operator+(S4 a, const S4& b) {
    for (int i = 0; i < 4; ++i) a.v[i] += b.v[i];
    return a;
  }
  friend S4 operator*(double c, S4 a) {
    for (double& x : a.v) x *= c;
    return a;
  }
  bool finite() const {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  }
};

std::size_t step_count(double h, double t_end) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidInput("integrate: h must be > 0");
  if (!(t_end >= h) || !std::isfinite(t_end)) throw InvalidInput("integrate: t_end must be >= h");
  return static_cast<std::size_t>(std::llround(t_end / h));
}

template <typename F>
std::vector<std::pair<double, S4>> run_rk4(const F& f, const S4& y0, double h, double t_end) {
  const std::size_t n = step_count(h, t_end);
  std::vector<std::pair<double, S4>> out;
  out.reserve(n + 1);
  out.emplace_back(0.0, y0);
  S4 y = y0;
  for (std::size_t k = 1; k <= n; ++k) {
    y = rk4_step(f, y, h);
    const double t = static_cast<double>(k) * h;
    if (!y.finite()) {
      throw DivergenceError("integrate: state became non-finite at t = " + std::to_string(t));
    }
    out.emplace_back(t, y);
  }
  return out;
}

}  // namespace

Trajectory integrate(const Field& field, const PhaseState& v0, double h, double t_end) {
  auto f = [&field](const S4& y) {
    return S4{field(PhaseState::from(y.v)).as_array()};
  };
  Trajectory traj;
  traj.h = h;
  for (const auto& [t, y] : run_rk4(f, S4{v0.as_array()}, h, t_end)) {
    traj.samples.emplace_back(t, PhaseState::from(y.v));
  }
  return traj;
}

void monitor(Trajectory& traj, const std::vector<std::pair<std::string, QuadHamiltonian>>& charges,
             const std::optional<Potential>& augment) {
  for (const auto& [name, h] : charges) {
    traj.charge_names.push_back(name);
    auto& col = traj.charges.emplace_back();
    col.reserve(traj.samples.size());
    for (const auto& [t, v] : traj.samples) {
      double value = h.value(v);
      if (augment) value += augment->value(augment->argument(v));
      col.push_back(value);
    }
  }
}

std::vector<double> conservation_report(const Trajectory& traj,
                                        const std::vector<QuadHamiltonian>& charges,
                                        const std::optional<Potential>& augment) {
  std::vector<double> drift;
  for (const auto& h : charges) {
    auto value = [&](const PhaseState& v) {
      double e = h.value(v);
      if (augment) e += augment->value(augment->argument(v));
      return e;
    };
    double worst = 0.0;
    if (!traj.samples.empty()) {
      const double e0 = value(traj.samples.front().second);
      for (const auto& [t, v] : traj.samples) {
        worst = std::max(worst, std::abs(value(v) - e0) / (1.0 + std::abs(e0)));
      }
    }
    drift.push_back(worst);
  }
  return drift;
}

CompatibilityReport interaction_compatibility(const PuParams& p, const Potential& pot,
                                              std::uint64_t seed, std::size_t angles,
                                              std::size_t states, double tol, double floor) {
  if (angles < 2 || states == 0) throw InvalidInput("interaction_compatibility: empty sample");
  Sampler rng(seed);
  std::vector<PhaseState> sample;
  sample.reserve(states);
  bool nontrivial = false;
  for (std::size_t i = 0; i < states; ++i) {
    sample.push_back(rng.state());
    if (std::abs(pot.derivative(pot.argument(sample.back()))) > 1e-12) nontrivial = true;
  }
  if (!nontrivial) {
    throw InconclusiveTest("interaction_compatibility: potential derivative vanishes on the "
                           "sample, every direction is trivially equivalent");
  }
  const bool on_q = pot.target == PotentialTarget::kOnQ;
  const QuadHamiltonian base = on_q ? hamiltonian_h1(p) : hamiltonian_h2(p);
  const Field field{p, pot};
  const Mat j1 = poisson_j1(p).matrix();
  const Mat j2 = poisson_j2(p).matrix();

  CompatibilityReport rep;
  rep.floor = floor;
  for (std::size_t a = 0; a < angles; ++a) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(angles);
    DirectionResidual d{th, std::cos(th), std::sin(th), 0.0};
    const Mat j = d.c1 * j1 + d.c2 * j2;
    for (const auto& v : sample) {
      Vec grad = base.gradient(v.to_vec());
      grad[on_q ? 0 : 2] += pot.derivative(pot.argument(v));
      const Vec lhs = j * std::span<const double>(grad);
      const auto rhs = field(v).as_array();
      double diff = 0.0, nv = 0.0;
      for (int i = 0; i < 4; ++i) {
        diff += (lhs[i] - rhs[i]) * (lhs[i] - rhs[i]);
        nv += rhs[i] * rhs[i];
      }
      d.residual = std::max(d.residual, std::sqrt(diff) / (1.0 + std::sqrt(nv)));
    }
    rep.directions.push_back(d);
  }
  for (std::size_t a = 0; a < angles; ++a) {
    if (rep.directions[a].residual < rep.directions[rep.compatible_index].residual) {
      rep.compatible_index = a;
    }
  }
  rep.compatible_residual = rep.directions[rep.compatible_index].residual;
  rep.min_other_residual = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < angles; ++a) {
    if (a != rep.compatible_index) {
      rep.min_other_residual = std::min(rep.min_other_residual, rep.directions[a].residual);
    }
  }
  rep.unique = rep.compatible_residual <= tol && rep.min_other_residual >= floor;
  return rep;
}

InteractionConstraint interaction_transform_constraint(const PuParams& p, double g) {
  InteractionConstraint c;
  c.specs = j1_preserving_specs(p, g);
  for (const auto& s : c.specs) {
    const double den = s.determinant();
    // dq/dx = -nu2 / den, dq/dy = mu2 / den from the closed-form inverse.
    c.constraint_residual = std::max(
        {c.constraint_residual, std::abs(-s.nu[2] / den + 1.0), std::abs(s.mu[2] / den + 1.0)});
  }
  FreeParams f;
  f.ax = c.specs[0].lag.ax;
  f.ay = c.specs[0].lag.ay;
  f.g = g;
  const auto ta1 = build(TransformKind::kTa1Plus, p, f);
  c.ta1_singular = std::abs(ta1.determinant()) <=
                   1e-12 * (std::abs(ta1.mu[2] * ta1.nu[0]) + std::abs(ta1.mu[0] * ta1.nu[2]));
  return c;
}

XYTrajectory integrate_xy(const TransformSpec& spec, const Potential& pot, const XYState& w0,
                          double h, double t_end) {
  if (pot.target != PotentialTarget::kOnQ) {
    throw InvalidInput("integrate_xy: the two-dimensional route takes a potential on q");
  }
  const auto& L = spec.lag;
  if (L.ax == 0.0 || L.ay == 0.0) throw DegenerateLegendre("integrate_xy: ax, ay must be non-zero");
  // State (x, y, px, py); dV/dx = dV/dy = -V'(q) with q = -x - y.
  auto f = [&](const S4& s) {
    const double x = s.v[0], y = s.v[1];
    const double dv = pot.derivative(-x - y);
    return S4{{s.v[2] / L.ax, s.v[3] / L.ay, -L.bx * x - L.g * y + dv, -L.by * y - L.g * x + dv}};
  };
  XYTrajectory traj;
  traj.h = h;
  for (const auto& [t, s] : run_rk4(f, S4{{w0.x, w0.y, w0.px, w0.py}}, h, t_end)) {
    traj.samples.emplace_back(t, XYState::from(s.v));
  }
  return traj;
}

double two_route_error(const PuParams& p, const TransformSpec& spec, const Potential& pot,
                       const PhaseState& v0, double h, double t_end) {
  const auto direct = integrate(Field{p, pot}, v0, h, t_end);
  const auto xy = integrate_xy(spec, pot, forward(spec, v0), h, t_end);
  double err = 0.0;
  for (std::size_t i = 0; i < direct.samples.size(); ++i) {
    const auto a = direct.samples[i].second.as_array();
    const auto b = inverse(spec, xy.samples[i].second).as_array();
    for (int k = 0; k < 4; ++k) err = std::max(err, std::abs(a[k] - b[k]));
  }
  return err;
}

namespace {

// Index pairs (i < k) of the six independent entries of a 4x4 antisymmetric matrix.
constexpr std::array<std::pair<int, int>, 6> kUpper{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

Mat antisym_unit(std::size_t idx) {
  Mat e(4, 4);
  const auto [i, k] = kUpper[idx];
  e(i, k) = 1.0;
  e(k, i) = -1.0;
  return e;
}

}  // namespace

std::vector<DiscoveredStructure> structure_discovery(const PuParams& p, double tol) {
  if (p.beta() == 0.0) throw ParameterDomainError("structure_discovery requires beta != 0");
  const Mat m = companion_field(p);
  // Columns: vec(E M + M^T E) for each antisymmetric unit E.
  Mat op(16, 6);
  for (std::size_t c = 0; c < 6; ++c) {
    const Mat e = antisym_unit(c);
    const Vec col = num::flatten(e * m + m.transpose() * e);
    for (std::size_t r = 0; r < 16; ++r) op(r, c) = col[r];
  }
  std::vector<DiscoveredStructure> out;
  for (const auto& coeffs : num::nullspace(op, tol)) {
    DiscoveredStructure d;
    d.k = Mat(4, 4);
    for (std::size_t c = 0; c < 6; ++c) d.k += coeffs[c] * antisym_unit(c);
    const auto sv = num::singular_values(d.k);
    d.condition = sv.back() > 0.0 ? sv.front() / sv.back() : std::numeric_limits<double>::infinity();
    if (d.condition < 1e8) {
      const Mat km = d.k * m;
      const Mat inv = num::inverse(d.k);
      d.j = PoissonTensor((inv - inv.transpose()) * 0.5);
      d.h = QuadHamiltonian((km + km.transpose()) * 0.5);
      d.residual = flow_residual(*d.j, *d.h, p);
    }
    out.push_back(std::move(d));
  }
  return out;
}

double structure_span_residual(const std::vector<DiscoveredStructure>& basis, const Mat& k) {
  if (basis.empty()) return num::norm(num::flatten(k)) / (1.0 + k.norm());
  Mat design(16, basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c) {
    const Vec col = num::flatten(basis[c].k);
    for (std::size_t r = 0; r < 16; ++r) design(r, c) = col[r];
  }
  const Vec target = num::flatten(k);
  return num::least_squares(design, target).residual / (1.0 + k.norm());
}

}  // namespace pu
