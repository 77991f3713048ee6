#include "pu/transform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pu/errors.hpp"

namespace pu {

std::string_view to_string(TransformKind k) {
  switch (k) {
    case TransformKind::kTa1Plus: return "Ta1+";
    case TransformKind::kTa1Minus: return "Ta1-";
    case TransformKind::kTa2Plus: return "Ta2+";
    case TransformKind::kTa2Minus: return "Ta2-";
    case TransformKind::kTb1: return "Tb1";
    case TransformKind::kTb2Plus: return "Tb2+";
    case TransformKind::kTb2Minus: return "Tb2-";
  }
  return "?";
}

TransformKind parse_transform_kind(std::string_view s) {
  for (auto k : kAllTransformKinds) {
    if (to_string(k) == s) return k;
  }
  throw InvalidInput("unknown transformation kind '" + std::string(s) +
                     "' (expected Ta1+, Ta1-, Ta2+, Ta2-, Tb1, Tb2+, Tb2-)");
}

int branch_sign(TransformKind k) {
  switch (k) {
    case TransformKind::kTa1Minus:
    case TransformKind::kTa2Minus:
    case TransformKind::kTb2Minus:
      return -1;
    default:
      return 1;
  }
}

bool is_type_a(TransformKind k) {
  return k == TransformKind::kTa1Plus || k == TransformKind::kTa1Minus ||
         k == TransformKind::kTa2Plus || k == TransformKind::kTa2Minus;
}

namespace {

bool is_ta1(TransformKind k) {
  return k == TransformKind::kTa1Plus || k == TransformKind::kTa1Minus;
}
bool is_ta2(TransformKind k) {
  return k == TransformKind::kTa2Plus || k == TransformKind::kTa2Minus;
}

double signed_root(double radicand, int sign, const char* what) {
  // Tiny negative radicands from rounding are clamped.
  if (radicand < 0.0) {
    if (radicand > -1e-13) return 0.0;
    throw ComplexBranch(std::string(what) + ": negative radicand " + std::to_string(radicand));
  }
  return sign * std::sqrt(radicand);
}

double tau_of(const PuParams& p, double ax, double bx) {
  return bx * bx - ax * bx * p.alpha() + ax * ax * p.beta();
}

void require_nonzero(double v, const char* name, const char* kind) {
  if (v == 0.0) throw ConstructionError(std::string(kind) + ": requires " + name + " != 0");
}

// Symmetric form of c1 (u.w)^2 + c2 (v.w)^2 in the 1/2 w^T S w convention.
QuadHamiltonian two_squares(double c1, const Vec& u, double c2, const Vec& v) {
  return QuadHamiltonian((2.0 * c1) * Mat::outer(u, u) + (2.0 * c2) * Mat::outer(v, v));
}

}  // namespace

double rho_g(const PuParams& p, double ax, double ay, double g, int sign) {
  if (ax * ay == 0.0) throw ConstructionError("rho_g: requires ax ay != 0");
  return signed_root(p.discriminant() - 4.0 * g * g / (ax * ay), sign, "rho_g");
}

double rho_0(const PuParams& p, int sign) { return signed_root(p.discriminant(), sign, "rho_0"); }

RhoContext rho_context(const PuParams& p, const LagrangianParams& lag) {
  RhoContext c;
  if (lag.ax * lag.ay != 0.0) {
    const double r = p.discriminant() - 4.0 * lag.g * lag.g / (lag.ax * lag.ay);
    if (r >= 0.0) {
      c.rho_g_plus = std::sqrt(r);
      c.rho_g_minus = -std::sqrt(r);
    }
  }
  if (p.discriminant() >= 0.0) c.rho0 = std::sqrt(p.discriminant());
  c.tau = tau_of(p, lag.ax, lag.bx);
  return c;
}

TransformSpec build(TransformKind kind, const PuParams& p, const FreeParams& f) {
  const double al = p.alpha();
  const double be = p.beta();
  const int s = branch_sign(kind);
  const std::string name(to_string(kind));
  TransformSpec t;
  t.kind = kind;
  auto& L = t.lag;

  require_nonzero(f.ax, "ax", name.c_str());
  L.ax = f.ax;
  L.g = f.g;

  if (is_ta1(kind)) {
    require_nonzero(f.ay, "ay", name.c_str());
    L.ay = f.ay;
    const double r = rho_0(p, s);
    L.bx = f.ax / 2.0 * (al - 2.0 * f.g / f.ay + r);
    L.by = f.ay / 2.0 * (al - 2.0 * f.g / f.ax + r);
    t.mu = {(al - r) / (2.0 * f.ax), 0.0, 1.0 / f.ax};
    t.nu = {(al - r) / (2.0 * f.ay), 0.0, 1.0 / f.ay};
  } else if (is_ta2(kind)) {
    require_nonzero(f.ay, "ay", name.c_str());
    L.ay = f.ay;
    const double r = rho_g(p, f.ax, f.ay, f.g, s);
    L.bx = f.ax / 2.0 * (al + r);
    L.by = f.ay / 2.0 * (al - r);
    t.mu = {(al - r - 2.0 * f.g / f.ay) / (2.0 * f.ax), 0.0, 1.0 / f.ax};
    t.nu = {(al + r - 2.0 * f.g / f.ax) / (2.0 * f.ay), 0.0, 1.0 / f.ay};
  } else if (kind == TransformKind::kTb1) {
    require_nonzero(f.g, "g", name.c_str());
    const double tau = tau_of(p, f.ax, f.bx);
    const double scale = f.bx * f.bx + std::abs(f.ax * f.bx * al) + std::abs(f.ax * f.ax * be);
    if (std::abs(tau) <= 1e-12 * std::max(1.0, scale)) {
      throw ConstructionError(name + ": requires bx != ax (alpha + rho0)/2 (tau vanishes)");
    }
    L.bx = f.bx;
    L.ay = -f.ax * f.g * f.g / tau;
    L.by = f.g * f.g * (f.bx - f.ax * al) / tau;
    t.mu = {(al - f.bx / f.ax) / f.ax, 0.0, 1.0 / f.ax};
    t.nu = {tau / (f.g * f.ax * f.ax), 0.0, 0.0};
  } else {
    require_nonzero(f.by, "by", name.c_str());
    const double r = rho_0(p, s);
    const double ar = al + r;
    if (std::abs(ar) <= 1e-12 * std::max(1.0, std::abs(al))) {
      throw ConstructionError(name + ": requires alpha + rho0 != 0");
    }
    L.ay = 0.0;
    L.by = f.by;
    L.bx = f.g * f.g / f.by + f.ax / 2.0 * ar;
    t.mu = {2.0 * be / (f.ax * ar), 0.0, 1.0 / f.ax};
    // Sign fixed so the second equation vanishes identically.
    t.nu = {-2.0 * be * f.g / (f.ax * f.by * ar), 0.0, -f.g / (f.ax * f.by)};
  }
  return t;
}

double equation_mapping_residual(const TransformSpec& t, const PuParams& p) {
  const double al = p.alpha();
  const double be = p.beta();
  const auto& L = t.lag;
  const auto& mu = t.mu;
  const auto& nu = t.nu;
  // With x = mu0 q + mu2 q'' (mu1 = nu1 = 0) the first equation reads
  //   ax mu2 q'''' + (ax mu0 + bx mu2 + g nu2) q'' + (bx mu0 + g nu0) q
  // plus odd-derivative terms carrying mu1, nu1.
  auto rel = [](double v, double scale) { return std::abs(v) / (1.0 + std::abs(scale)); };
  double res = std::max({std::abs(mu[1]), std::abs(nu[1])});
  const double lead1 = L.ax * mu[2];
  const double q2_1 = L.ax * mu[0] + L.bx * mu[2] + L.g * nu[2];
  const double q0_1 = L.bx * mu[0] + L.g * nu[0];
  res = std::max(res, rel(q2_1 - al * lead1, q2_1));
  res = std::max(res, rel(q0_1 - be * lead1, q0_1));
  if (std::abs(lead1) <= 1e-14) res = std::max(res, 1.0);

  const double lead2 = L.ay * nu[2];
  const double q2_2 = L.ay * nu[0] + L.by * nu[2] + L.g * mu[2];
  const double q0_2 = L.by * nu[0] + L.g * mu[0];
  if (is_type_a(t.kind)) {
    res = std::max(res, rel(q2_2 - al * lead2, q2_2));
    res = std::max(res, rel(q0_2 - be * lead2, q0_2));
    if (std::abs(lead2) <= 1e-14) res = std::max(res, 1.0);
  } else {
    res = std::max({res, rel(lead2, 0.0), rel(q2_2, 0.0), rel(q0_2, 0.0)});
  }
  return res;
}

double defining_relations_residual(const TransformSpec& t, const PuParams& p) {
  const double al = p.alpha();
  const double be = p.beta();
  const auto& L = t.lag;
  const int s = branch_sign(t.kind);
  std::vector<std::pair<double, double>> pairs;  // (stored, expected)
  pairs.emplace_back(t.mu[1], 0.0);
  pairs.emplace_back(t.nu[1], 0.0);
  pairs.emplace_back(t.mu[2], 1.0 / L.ax);
  if (is_ta1(t.kind)) {
    const double r = rho_0(p, s);
    pairs.emplace_back(t.nu[2], 1.0 / L.ay);
    pairs.emplace_back(L.bx, L.ax / 2.0 * (al - 2.0 * L.g / L.ay + r));
    pairs.emplace_back(L.by, L.ay / 2.0 * (al - 2.0 * L.g / L.ax + r));
    pairs.emplace_back(t.mu[0], (al - r) / (2.0 * L.ax));
    pairs.emplace_back(t.nu[0], (al - r) / (2.0 * L.ay));
    // x proportional to y
    pairs.emplace_back(t.mu[0] * t.nu[2], t.mu[2] * t.nu[0]);
  } else if (is_ta2(t.kind)) {
    const double r = rho_g(p, L.ax, L.ay, L.g, s);
    pairs.emplace_back(t.nu[2], 1.0 / L.ay);
    pairs.emplace_back(L.bx, L.ax / 2.0 * (al + r));
    pairs.emplace_back(L.by, L.ay / 2.0 * (al - r));
    pairs.emplace_back(t.mu[0], (al - r - 2.0 * L.g / L.ay) / (2.0 * L.ax));
    pairs.emplace_back(t.nu[0], (al + r - 2.0 * L.g / L.ax) / (2.0 * L.ay));
  } else if (t.kind == TransformKind::kTb1) {
    const double tau = tau_of(p, L.ax, L.bx);
    pairs.emplace_back(t.nu[2], 0.0);
    pairs.emplace_back(L.ay, -L.ax * L.g * L.g / tau);
    pairs.emplace_back(L.by, L.g * L.g * (L.bx - L.ax * al) / tau);
    pairs.emplace_back(t.mu[0], (al - L.bx / L.ax) / L.ax);
    pairs.emplace_back(t.nu[0], tau / (L.g * L.ax * L.ax));
  } else {
    const double ar = al + rho_0(p, s);
    pairs.emplace_back(L.ay, 0.0);
    pairs.emplace_back(t.nu[2], -L.g / (L.ax * L.by));
    pairs.emplace_back(L.bx, L.g * L.g / L.by + L.ax / 2.0 * ar);
    pairs.emplace_back(t.mu[0], 2.0 * be / (L.ax * ar));
    pairs.emplace_back(t.nu[0], -2.0 * be * L.g / (L.ax * L.by * ar));
  }
  double res = 0.0;
  for (const auto& [got, want] : pairs) {
    res = std::max(res, std::abs(got - want) / (1.0 + std::abs(want)));
  }
  return res;
}

Mat forward_jacobian(const TransformSpec& t) {
  const auto& mu = t.mu;
  const auto& nu = t.nu;
  const double ax = t.lag.ax;
  const double ay = t.lag.ay;
  return Mat{{mu[0], mu[1], mu[2], 0.0},
             {nu[0], nu[1], nu[2], 0.0},
             {0.0, ax * mu[0], ax * mu[1], ax * mu[2]},
             {0.0, ay * nu[0], ay * nu[1], ay * nu[2]}};
}

XYState forward(const TransformSpec& t, const PhaseState& v) {
  const auto w = forward_jacobian(t) * std::span<const double>(v.to_vec());
  return XYState::from(w);
}

PhaseState inverse(const TransformSpec& t, const XYState& w) {
  const auto& mu = t.mu;
  const auto& nu = t.nu;
  const double ax = t.lag.ax;
  const double ay = t.lag.ay;
  const double den = t.determinant();
  const double scale = std::abs(mu[2] * nu[0]) + std::abs(mu[0] * nu[2]);
  if (std::abs(den) <= 1e-12 * std::max(1e-300, scale)) {
    throw NonInvertibleTransform(std::string(to_string(t.kind)) +
                                 ": mu2 nu0 = mu0 nu2, (x, y) do not determine (q, q'')");
  }
  if (ax == 0.0 || ay == 0.0) {
    throw NonInvertibleTransform(std::string(to_string(t.kind)) +
                                 ": momenta do not determine (q', q''') when a kinetic "
                                 "coefficient vanishes");
  }
  if (mu[1] != 0.0 || nu[1] != 0.0) {
    throw NonInvertibleTransform("inverse requires mu1 = nu1 = 0");
  }
  PhaseState v;
  v.q = (mu[2] * w.y - nu[2] * w.x) / den;
  v.qd = (ax * mu[2] * w.py - ay * nu[2] * w.px) / (ax * ay * den);
  v.qdd = (nu[0] * w.x - mu[0] * w.y) / den;
  v.qddd = (ay * nu[0] * w.px - ax * mu[0] * w.py) / (ax * ay * den);
  return v;
}

Quad4 legendre(const TransformSpec& t) {
  const auto& L = t.lag;
  if (L.ax == 0.0 || L.ay == 0.0) {
    throw DegenerateLegendre(std::string(to_string(t.kind)) +
                             ": kinetic coefficient vanishes, momenta are not invertible");
  }
  Mat s(4, 4);
  s(0, 0) = L.bx;
  s(1, 1) = L.by;
  s(0, 1) = s(1, 0) = L.g;
  s(2, 2) = 1.0 / L.ax;
  s(3, 3) = 1.0 / L.ay;
  return Quad4(QuadHamiltonian(std::move(s)));
}

Pullback pullback_hamiltonian(const TransformSpec& t, const PuParams& p) {
  const auto& L = t.lag;
  const Vec x{t.mu[0], t.mu[1], t.mu[2], 0.0};
  const Vec y{t.nu[0], t.nu[1], t.nu[2], 0.0};
  const Vec xd{0.0, t.mu[0], t.mu[1], t.mu[2]};
  const Vec yd{0.0, t.nu[0], t.nu[1], t.nu[2]};
  Mat s = L.ax * Mat::outer(xd, xd) + L.ay * Mat::outer(yd, yd) + L.bx * Mat::outer(x, x) +
          L.by * Mat::outer(y, y) + L.g * (Mat::outer(x, y) + Mat::outer(y, x));
  QuadHamiltonian form(std::move(s));
  auto coords = charge_coordinates(p, form);
  return {std::move(form), coords};
}

std::pair<double, double> catalog_pullback_coefficients(const TransformSpec& t,
                                                        const PuParams& p) {
  const auto& L = t.lag;
  const int s = branch_sign(t.kind);
  auto m_branch = [&]() {
    const auto [w1, w2] = p.omega_squared();
    return s > 0 ? std::min(w1, w2) : std::max(w1, w2);
  };
  if (is_ta1(t.kind)) {
    const double f = -(L.ax + L.ay) / (L.ax * L.ay);
    return {f * m_branch(), f};
  }
  if (is_ta2(t.kind)) {
    const double r = rho_g(p, L.ax, L.ay, L.g, s);
    const double f = 1.0 / (2.0 * L.ax * L.ay);
    return {f * (4.0 * L.g - r * (L.ax - L.ay) - p.alpha() * (L.ax + L.ay)),
            -2.0 * f * (L.ax + L.ay)};
  }
  if (t.kind == TransformKind::kTb1) {
    return {(L.bx / L.ax - p.alpha()) / L.ax, -1.0 / L.ax};
  }
  return {-m_branch() / L.ax, -1.0 / L.ax};
}

std::pair<double, double> flow_preserving_coefficients(const PuParams& p, double c3, double c4) {
  const double al = p.alpha();
  const double be = p.beta();
  // (c3 - c4 w1^2)(c3 - c4 w2^2) written through alpha, beta.
  const double d = c3 * c3 - al * c3 * c4 + be * c4 * c4;
  const double scale = c3 * c3 + std::abs(al * c3 * c4) + std::abs(be * c4 * c4);
  if (std::abs(d) <= 1e-9 * std::max(1e-300, scale)) {
    throw SingularStructure("flow_preserving_tensor: c3 = c4 w^2 for one of the frequencies, "
                            "no flow-preserving tensor exists");
  }
  return {c3 / d, c4 * be / d};
}

PoissonTensor flow_preserving_tensor(const PuParams& p, double c3, double c4) {
  const auto [c1, c2] = flow_preserving_coefficients(p, c3, c4);
  return c1 * poisson_j1(p) + c2 * poisson_j2(p);
}

PoissonTensor catalog_flow_tensor(const TransformSpec& t, const PuParams& p) {
  const auto& L = t.lag;
  const double al = p.alpha();
  const double be = p.beta();
  if (is_ta2(t.kind)) {
    const double r = rho_g(p, L.ax, L.ay, L.g, branch_sign(t.kind));
    const double base = L.ay * L.g - L.ax * (L.g + L.ay * r);
    const double pre = L.ax * L.ax * L.ay * L.ay / (2.0 * base * base);
    return pre * ((L.ax * (al + r) + L.ay * (al - r) - 4.0 * L.g) * poisson_j1(p) +
                  (2.0 * be * (L.ax + L.ay)) * poisson_j2(p));
  }
  if (t.kind == TransformKind::kTb1) {
    const double pre = L.ax * L.ax / tau_of(p, L.ax, L.bx);
    return pre * ((L.bx - al * L.ax) * poisson_j1(p) + (-be * L.ax) * poisson_j2(p));
  }
  throw SingularStructure(std::string(to_string(t.kind)) +
                          ": no flow-preserving Poisson tensor exists");
}

BracketTable pushforward_brackets(const TransformSpec& t, const PoissonTensor& jbar) {
  if (t.mu[1] != 0.0 || t.nu[1] != 0.0) {
    throw InvalidInput("pushforward_brackets requires mu1 = nu1 = 0");
  }
  BracketTable b;
  b.full = pushforward(jbar, forward_jacobian(t)).matrix();
  b.x_px = b.full(0, 2);
  b.x_py = b.full(0, 3);
  b.y_px = b.full(1, 2);
  b.y_py = b.full(1, 3);
  return b;
}

BracketTable catalog_bracket_table(const TransformSpec& t, const PuParams& p, double c1,
                                   double c2) {
  const double al = p.alpha();
  const double be = p.beta();
  const double m0 = t.mu[0], m2 = t.mu[2], n0 = t.nu[0], n2 = t.nu[2];
  const double ax = t.lag.ax, ay = t.lag.ay;
  BracketTable b;
  b.x_px = ax * (m2 * m2 * (al * c1 - c2) + c2 * m0 * m0 / be - 2.0 * c1 * m2 * m0);
  // Cross brackets share one factor; x_py carries ay, y_px carries ax.
  const double cross = -m2 * (n2 * (c2 - al * c1) + c1 * n0) + m0 * (c2 * n0 / be - c1 * n2);
  b.x_py = ay * cross;
  b.y_px = ax * cross;
  b.y_py = ay * (c2 * n0 * n0 / be - n2 * n2 * (c2 - al * c1) - 2.0 * c1 * n2 * n0);
  b.full = Mat(4, 4);
  b.full(0, 2) = b.x_px;
  b.full(0, 3) = b.x_py;
  b.full(1, 2) = b.y_px;
  b.full(1, 3) = b.y_py;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 2; k < 4; ++k) b.full(k, i) = -b.full(i, k);
  }
  return b;
}

bool is_canonical(const BracketTable& t, double tol) {
  const Mat& m = t.full;
  Mat want(4, 4);
  want(0, 2) = want(1, 3) = 1.0;
  want(2, 0) = want(3, 1) = -1.0;
  return (m - want).max_abs() <= tol;
}

std::array<TransformSpec, 2> j1_preserving_specs(const PuParams& p, double g) {
  const double r = p.discriminant() - 4.0 * g;
  if (r < 0.0) {
    throw ComplexBranch("J1-preserving choice needs alpha^2 - 4 beta - 4 g >= 0, got " +
                        std::to_string(r));
  }
  if (r <= 1e-14 * std::max(1.0, p.discriminant())) {
    throw ConstructionError("J1-preserving choice gives ax = 0, which is excluded");
  }
  std::array<TransformSpec, 2> out;
  for (int i = 0; i < 2; ++i) {
    const double ax = (i == 0 ? 1.0 : -1.0) * std::sqrt(r);
    // rho_g ax = ax^2 + 2 g fixes the branch.
    const double want = ax * (ax * ax + 2.0 * g);
    const auto kind = want >= 0.0 ? TransformKind::kTa2Plus : TransformKind::kTa2Minus;
    FreeParams f;
    f.ax = ax;
    f.ay = -ax;
    f.g = g;
    out[i] = build(kind, p, f);
  }
  return out;
}

Quad4 ghost_variant(const PuParams& p, double g, int sign, int ay_choice) {
  if (ay_choice != 1 && ay_choice != -1) {
    throw InvalidInput("ghost_variant: ay must be +1 or -1");
  }
  FreeParams f;
  f.ax = 1.0;
  f.ay = ay_choice;
  f.g = g;
  return legendre(build(sign > 0 ? TransformKind::kTa2Plus : TransformKind::kTa2Minus, p, f));
}

Quad4 ghost_variant_closed_form(const PuParams& p, double g, int sign, int ay_choice) {
  if (ay_choice != 1 && ay_choice != -1) {
    throw InvalidInput("ghost_variant: ay must be +1 or -1");
  }
  const double al = p.alpha();
  const double r = rho_g(p, 1.0, ay_choice, g, sign);
  Mat s(4, 4);
  s(2, 2) = 1.0;
  s(3, 3) = ay_choice;
  s(0, 0) = 0.5 * (r + al);
  s(1, 1) = ay_choice < 0 ? 0.5 * (r - al) : 0.5 * (-r + al);
  s(0, 1) = s(1, 0) = g;
  return Quad4(QuadHamiltonian(std::move(s)));
}

Quad4 opposite_sign_oscillators(const PuParams& p) {
  auto [w1, w2] = p.omega_squared();
  if (w1 < w2) std::swap(w1, w2);
  return Quad4(QuadHamiltonian(Mat::diag(Vec{w1, -w2, 1.0, -1.0})));
}

bool pd_window_transformed(PdKind kind, const PuParams& p, double control) {
  const auto [w1, w2] = p.omega_squared();
  if (w1 == 0.0 || w2 == 0.0) return false;
  if (kind == PdKind::kTa2) {
    const double two_g = 2.0 * control;
    return (w2 - w1 < two_g && two_g < w1 - w2) || (w1 - w2 < two_g && two_g < w2 - w1);
  }
  return (w1 < control && control < w2) || (w2 < control && control < w1);
}

QuadHamiltonian transformed_form(PdKind kind, const PuParams& p, double control) {
  const auto h1 = hamiltonian_h1(p);
  const auto h2 = hamiltonian_h2(p);
  if (kind == PdKind::kTa2) return (2.0 * control - p.alpha()) * h1 - 2.0 * h2;
  return (control - p.alpha()) * h1 - h2;
}

bool pd_window_transformed_by_minors(PdKind kind, const PuParams& p, double control) {
  return num::positive_definite(transformed_form(kind, p, control).matrix());
}

TransformedDecomposition pd_decompose_transformed(PdKind kind, const PuParams& p, double control,
                                            double aux) {
  if (p.discriminant() < 0.0) {
    throw DecompositionUndefined("pd_decompose_transformed: complex frequencies");
  }
  const auto [w1, w2] = p.omega_squared();
  if (std::abs(w1 - w2) <= kDegenerateTol) {
    throw DecompositionUndefined("pd_decompose_transformed: degenerate frequencies");
  }
  if (w1 == 0.0 || w2 == 0.0) {
    throw DecompositionUndefined("pd_decompose_transformed: frequencies must be non-zero");
  }
  const double ws[2] = {w1, w2};
  double pre[2];
  for (int i = 0; i < 2; ++i) {
    const double wi = ws[i];
    const double wj = ws[1 - i];
    pre[i] = kind == PdKind::kTa2 ? (2.0 * control + wi - wj) / (2.0 * wi - 2.0 * wj)
                                  : (control - wj) / (2.0 * wi - 2.0 * wj);
  }
  TransformedDecomposition d{pre[0] * square_pair_form(w1, w2), pre[1] * square_pair_form(w2, w1),
                          pre[0], pre[1], std::nullopt, std::nullopt, std::nullopt};

  std::optional<Quad4> xf[2];
  if (kind == PdKind::kTa2) {
    FreeParams f;
    f.g = control;
    const int sign = aux < 0 ? -1 : 1;
    TransformSpec spec;
    try {
      spec = build(sign > 0 ? TransformKind::kTa2Plus : TransformKind::kTa2Minus, p, f);
    } catch (const ComplexBranch&) {
      return d;
    }
    const double r = rho_g(p, 1.0, 1.0, control, sign);
    for (int i = 0; i < 2; ++i) {
      const double den = 4.0 * control + 2.0 * ws[i] - 2.0 * ws[1 - i];
      if (den == 0.0) return d;
      const double kp = 0.5 + r / den;
      const double km = 0.5 - r / den;
      xf[i] = Quad4(two_squares(pre[i], Vec{0.0, 0.0, kp, km}, pre[i] * ws[i],
                                Vec{kp, km, 0.0, 0.0}));
    }
    d.spec = spec;
  } else {
    if (aux == 0.0) return d;
    FreeParams f;
    f.bx = control;
    f.g = aux;
    TransformSpec spec;
    try {
      spec = build(TransformKind::kTb1, p, f);
    } catch (const ConstructionError&) {
      return d;
    }
    const double den = spec.determinant();
    const double tau_x = -1.0 / spec.lag.ay;  // (bx - w1^2)(bx - w2^2)/g^2
    for (int i = 0; i < 2; ++i) {
      const double wj = ws[1 - i];
      const double lm = (spec.mu[0] - spec.mu[2] * wj) / den;
      const double ln = (spec.nu[0] - spec.nu[2] * wj) / den;
      xf[i] = Quad4(two_squares(pre[i], Vec{0.0, 0.0, ln, tau_x * lm}, pre[i] * ws[i],
                                Vec{ln, -lm, 0.0, 0.0}));
    }
    d.spec = spec;
  }
  d.h12_x = xf[0];
  d.h21_x = xf[1];
  return d;
}

SmEmbedding sm_embedding(const PuParams& p, double mu_w, double mu_z, double tau_sm, int sign) {
  if (!(mu_w > 0.0) || !(mu_z > 0.0)) {
    throw InvalidInput("sm_embedding: masses must be positive");
  }
  if (tau_sm == 0.0) throw InvalidInput("sm_embedding: tau_sm must be non-zero");
  const double al = p.alpha();
  const double be = p.beta();
  const double t2 = tau_sm * tau_sm;
  SmEmbedding e;
  e.mu_w = mu_w;
  e.mu_z = mu_z;
  e.tau_sm = tau_sm;
  e.omega4 = 4.0 * mu_z / (mu_w * t2 * t2);
  e.delta = al * al - 4.0 * be - e.omega4;
  const double sd = signed_root(e.delta, sign, "sm_embedding delta");
  const double a2d = al * al - e.delta;  // 4 beta + Omega^4
  if (a2d <= 0.0) throw ParameterDomainError("sm_embedding: alpha^2 - delta must be positive");
  e.lambda = (al + sd) / 2.0;
  const double rw = mu_w * (al - sd);
  const double rz = mu_z * (al + sd);
  e.nu_w = std::sqrt(std::max(0.0, rw)) / 2.0;
  e.nu_z = std::sqrt(std::max(0.0, rz)) / 2.0;
  if (rw < -1e-13 || rz < -1e-13) {
    throw ComplexBranch("sm_embedding: alpha -+ sqrt(delta) must be non-negative");
  }
  FreeParams f;
  f.ax = 1.0 / t2;
  f.bx = (al - e.lambda) / t2;
  f.g = -e.omega4 / 4.0;
  e.spec = build(TransformKind::kTb1, p, f);
  e.scale = mu_w * t2;

  const double k = e.nu_z * std::sqrt(e.omega4) / std::sqrt(a2d);
  const Vec lin{e.nu_w, -k, 0.0, 0.0};
  Mat s = 2.0 * Mat::outer(lin, lin);
  s(1, 1) += 8.0 * be * e.nu_z * e.nu_z / a2d;
  s(2, 2) += 1.0 / mu_w;
  s(3, 3) += 1.0 / mu_z;
  e.h_sm = Quad4(QuadHamiltonian(std::move(s)));
  return e;
}

XYState sm_coordinates(const SmEmbedding& e, const PhaseState& v) {
  const double t2 = e.tau_sm * e.tau_sm;
  XYState w;
  w.x = e.lambda * t2 * v.q + t2 * v.qdd;
  w.y = v.q;
  w.px = e.mu_w * (e.lambda * t2 * v.qd + t2 * v.qddd);
  w.py = e.mu_z * v.qd;
  return w;
}

}  // namespace pu
