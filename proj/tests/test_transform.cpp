#include <doctest.h>

#include <cmath>

#include "pu/errors.hpp"
#include "pu/sampling.hpp"
#include "pu/transform.hpp"

using namespace pu;

namespace {

const PuParams k21 = PuParams::from_frequencies(2.0, 1.0);

double rel(const Mat& a, const Mat& b) { return (a - b).max_abs() / (1.0 + b.max_abs()); }

TransformSpec with_lag(double ax, double ay, double bx, double by, double g) {
  TransformSpec t;
  t.lag = {ax, ay, bx, by, g};
  return t;
}

// The cross entries in their literal reading, kept to document the discrepancy.
std::pair<double, double> literal_cross(const TransformSpec& t, const PuParams& p, double c1,
                                        double c2) {
  const double al = p.alpha(), be = p.beta();
  const double m0 = t.mu[0], m2 = t.mu[2], n0 = t.nu[0], n2 = t.nu[2];
  const double x_py = m2 * t.lag.ay * (n2 * (c2 - al * c1) + c1 * n0) +
                      m0 * t.lag.ay * (c1 * n2 - c2 * n0 / be);
  const double y_px = m2 * t.lag.ax * (n2 * (c2 - al * c1) + c1 * n0) +
                      m0 * t.lag.ax * (c2 * n0 / be - c1 * n2);
  return {x_py, y_px};
}

}  // namespace

TEST_CASE("kind names") {
  for (auto k : kAllTransformKinds) CHECK(parse_transform_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_transform_kind("Tc3"), InvalidInput);
}

TEST_CASE("Ta2+ with unit kinetic terms") {
  const auto t = build(TransformKind::kTa2Plus, k21, {1.0, 1.0, 0.0, 0.0, 0.0});
  CHECK(t.lag.bx == doctest::Approx(4.0));
  CHECK(t.lag.by == doctest::Approx(1.0));
  CHECK(equation_mapping_residual(t, k21) < 1e-12);
}

TEST_CASE("Tb1 kinetic coefficient") {
  const auto p = PuParams::from_coefficients(5.0, 4.0);
  FreeParams f;
  f.ax = 1.0;
  f.bx = -5.0;
  f.g = 1.0;
  const auto t = build(TransformKind::kTb1, p, f);
  CHECK(rho_context(p, t.lag).tau == doctest::Approx(54.0));
  CHECK(t.lag.ay == doctest::Approx(-1.0 / 54.0));
}

TEST_CASE("forward and inverse") {
  const auto t = build(TransformKind::kTa2Plus, k21, {});
  const PhaseState v{1, 0.5, -0.3, 2};
  const auto back = inverse(t, forward(t, v)).as_array();
  const auto orig = v.as_array();
  for (int k = 0; k < 4; ++k) CHECK(std::abs(back[k] - orig[k]) < 1e-10);
  const auto z = forward(t, PhaseState{});
  CHECK(z.x == 0.0);
  CHECK(z.py == 0.0);
  const auto t1 = build(TransformKind::kTa1Plus, k21, {});
  CHECK_THROWS_AS(inverse(t1, forward(t1, v)), NonInvertibleTransform);
}

TEST_CASE("inverse against the closed-form expressions") {
  const auto t = build(TransformKind::kTa2Minus, k21, {1.5, 0.7, 0.0, 0.0, 0.2});
  const XYState w{0.3, -0.4, 1.1, 0.6};
  const double m0 = t.mu[0], m2 = t.mu[2], n0 = t.nu[0], n2 = t.nu[2];
  const double ax = t.lag.ax, ay = t.lag.ay;
  const double d = m2 * n0 - m0 * n2;
  const auto v = inverse(t, w);
  CHECK(v.q == doctest::Approx((m2 * w.y - n2 * w.x) / d));
  CHECK(v.qd == doctest::Approx((ax * m2 * w.py - ay * n2 * w.px) / (ax * ay * d)));
  CHECK(v.qdd == doctest::Approx((n0 * w.x - m0 * w.y) / d));
  CHECK(v.qddd == doctest::Approx((ay * n0 * w.px - ax * m0 * w.py) / (ax * ay * d)));
}

TEST_CASE("legendre") {
  CHECK(legendre(with_lag(1, 1, 1, 1, 0)).matrix() == Mat::identity(4));
  CHECK(legendre(with_lag(1, 1, 1, 1, 0.3)).matrix()(0, 1) == 0.3);
  const auto t = build(TransformKind::kTa2Plus, k21, {1.0, -1.0, 0.0, 0.0, 0.0});
  const Mat s = legendre(t).matrix();
  CHECK(s(2, 2) == 1.0);
  CHECK(s(3, 3) == -1.0);
  CHECK_THROWS_AS(legendre(with_lag(0, 1, 1, 1, 0)), DegenerateLegendre);
}

TEST_CASE("pullback coefficients") {
  const auto p = PuParams::from_coefficients(5.0, 4.0);
  FreeParams f;
  f.ax = 1.0;
  f.bx = 0.0;
  f.g = 0.5;
  const auto tb1 = build(TransformKind::kTb1, p, f);
  const auto pb = pullback_hamiltonian(tb1, p);
  CHECK(pb.coords.on_h1 == doctest::Approx(-5.0));
  CHECK(pb.coords.on_h2 == doctest::Approx(-1.0));

  const auto ta2 = build(TransformKind::kTa2Plus, k21, {1.3, -1.3, 0.0, 0.0, 0.1});
  CHECK(std::abs(pullback_hamiltonian(ta2, k21).coords.on_h2) < 1e-12);

  const auto ta1 = build(TransformKind::kTa1Plus, k21, {1.0, 1.0, 0.0, 0.0, 0.2});
  const auto c = catalog_pullback_coefficients(ta1, k21);
  CHECK(c.first == doctest::Approx(-2.0));
  CHECK(c.second == doctest::Approx(-2.0));
  CHECK(pullback_hamiltonian(ta1, k21).coords.on_h1 == doctest::Approx(-2.0));
}

TEST_CASE("pullback agrees with the Legendre form") {
  Sampler rng(17);
  // Tb2 has ay = 0 and no Legendre form.
  for (auto kind : {TransformKind::kTa2Plus, TransformKind::kTa2Minus, TransformKind::kTb1}) {
    FreeParams f{1.2, 0.8, 0.4, 1.5, 0.1};
    const auto t = build(kind, k21, f);
    const auto pb = pullback_hamiltonian(t, k21);
    for (int i = 0; i < 10; ++i) {
      const auto v = rng.state();
      const double want = legendre(t).value(forward(t, v));
      CHECK(std::abs(pb.form.value(v) - want) < 1e-10 * (1.0 + std::abs(want)));
    }
  }
}

TEST_CASE("flow-preserving tensors") {
  const auto p = PuParams::from_coefficients(5.0, 4.0);
  FreeParams f;
  f.ax = 1.0;
  f.bx = 0.0;
  f.g = 0.5;
  const auto tb1 = build(TransformKind::kTb1, p, f);
  const auto [c3, c4] = catalog_pullback_coefficients(tb1, p);
  const auto j = flow_preserving_tensor(p, c3, c4);
  const auto want = 0.25 * ((-5.0) * poisson_j1(p) + (-4.0) * poisson_j2(p));
  CHECK(rel(j.matrix(), want.matrix()) < 1e-12);
  CHECK(rel(catalog_flow_tensor(tb1, p).matrix(), want.matrix()) < 1e-12);

  const auto ta1 = build(TransformKind::kTa1Plus, k21, {});
  const auto c = catalog_pullback_coefficients(ta1, k21);
  CHECK_THROWS_AS(flow_preserving_tensor(k21, c.first, c.second), SingularStructure);
  CHECK_THROWS_AS(catalog_flow_tensor(ta1, k21), SingularStructure);
}

TEST_CASE("J1-preserving choice") {
  for (double g : {0.0, 0.3, -0.7}) {
    for (const auto& t : j1_preserving_specs(k21, g)) {
      CHECK(t.lag.ax == doctest::Approx(-t.lag.ay));
      CHECK(std::abs(std::abs(t.lag.ax) - std::sqrt(9.0 - 4.0 * g)) < 1e-12);
      CHECK(rel(catalog_flow_tensor(t, k21).matrix(), poisson_j1(k21).matrix()) <= 1e-10);
    }
  }
  CHECK_THROWS_AS(j1_preserving_specs(k21, 9.0 / 4.0), ConstructionError);
}

TEST_CASE("canonical brackets on catalog specs") {
  Sampler rng(23);
  for (auto kind : {TransformKind::kTa2Plus, TransformKind::kTa2Minus, TransformKind::kTb1}) {
    for (int i = 0; i < 10; ++i) {
      FreeParams f{rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0), 1.0,
                   rng.uniform(-0.3, 0.3)};
      const auto t = build(kind, k21, f);
      const auto [c1, c2] = flow_preserving_coefficients(
          k21, catalog_pullback_coefficients(t, k21).first,
          catalog_pullback_coefficients(t, k21).second);
      const auto table = pushforward_brackets(t, catalog_flow_tensor(t, k21));
      CHECK(is_canonical(table, 1e-10));
      // The literal {x,py} is the expanded entry up to sign and vanishes here;
      // the literal {y,px} flips only the mu2 term and does not.
      const auto [px, py] = literal_cross(t, k21, c1, c2);
      CHECK(std::abs(px) < 1e-10);
      CHECK(std::abs(py) > 1e-6);
    }
  }
}

TEST_CASE("bracket table against the expanded formulas") {
  Sampler rng(29);
  for (int i = 0; i < 20; ++i) {
    const auto t = build(TransformKind::kTa2Plus, k21,
                         {rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), 0.0, 0.0,
                          rng.uniform(-0.3, 0.3)});
    const double c1 = rng.uniform(-2, 2), c2 = rng.uniform(-2, 2);
    const auto j = c1 * poisson_j1(k21) + c2 * poisson_j2(k21);
    const auto direct = pushforward_brackets(t, j);
    const auto closed = catalog_bracket_table(t, k21, c1, c2);
    CHECK(rel(direct.full, closed.full) < 1e-10);
  }
  // J1 alone: {x, px} = ax (mu2^2 alpha - 2 mu2 mu0)
  const auto t = build(TransformKind::kTa2Plus, k21, {1.4, 0.9, 0.0, 0.0, 0.2});
  const auto b = pushforward_brackets(t, poisson_j1(k21));
  const double want = t.lag.ax * (t.mu[2] * t.mu[2] * 5.0 - 2.0 * t.mu[2] * t.mu[0]);
  CHECK(b.x_px == doctest::Approx(want));
}

TEST_CASE("literal cross entries differ off the catalog") {
  const auto t = build(TransformKind::kTa2Plus, k21, {1.4, 0.9, 0.0, 0.0, 0.2});
  const double c1 = 0.7, c2 = -1.3;
  const auto direct = pushforward_brackets(t, c1 * poisson_j1(k21) + c2 * poisson_j2(k21));
  const auto [px, py] = literal_cross(t, k21, c1, c2);
  CHECK(std::abs(direct.x_py - px) > 1e-6);
  CHECK(direct.x_py == doctest::Approx(-px));
}

TEST_CASE("ghost variants") {
  const auto opp = ghost_variant(k21, 0.0, 1, -1);
  const auto minors = num::leading_minors(opp.matrix());
  bool positive = false, negative = false;
  for (double m : minors) (m > 0 ? positive : negative) = true;
  CHECK(positive);
  CHECK(negative);
  CHECK(rel(opp.matrix(), opposite_sign_oscillators(k21).matrix()) < 1e-12);

  const double g = 0.1;
  const double rho = std::sqrt(25.0 - 16.0 + 4.0 * g * g);
  const auto gv = ghost_variant(k21, g, 1, -1);
  // coefficient of x^2 is S(0,0)/2
  CHECK(gv.matrix()(0, 0) / 2.0 == doctest::Approx(0.25 * (rho + 5.0)));
  CHECK(gv.matrix()(1, 1) / 2.0 == doctest::Approx(0.25 * (rho - 5.0)));
  CHECK(rel(gv.matrix(), ghost_variant_closed_form(k21, g, 1, -1).matrix()) < 1e-12);

  const auto pos = ghost_variant(k21, 0.0, 1, 1);
  for (double m : num::leading_minors(pos.matrix())) CHECK(m > 0.0);
}

TEST_CASE("positivity windows") {
  CHECK(pd_window_transformed(PdKind::kTa2, k21, 1.0));
  CHECK(pd_window_transformed_by_minors(PdKind::kTa2, k21, 1.0));
  CHECK_FALSE(pd_window_transformed(PdKind::kTa2, k21, 2.0));
  CHECK_FALSE(pd_window_transformed_by_minors(PdKind::kTa2, k21, 2.0));
  const auto p12 = PuParams::from_frequencies(1.0, 2.0);
  CHECK(pd_window_transformed(PdKind::kTb1, p12, 2.5));
  CHECK(pd_window_transformed_by_minors(PdKind::kTb1, p12, 2.5));
  CHECK_FALSE(pd_window_transformed_by_minors(PdKind::kTb1, p12, 4.5));
}

TEST_CASE("transformed decompositions sum to the form") {
  for (double g : {0.5, -1.0}) {
    const auto d = pd_decompose_transformed(PdKind::kTa2, k21, g, 1);
    CHECK(rel((d.h12 + d.h21).matrix(), transformed_form(PdKind::kTa2, k21, g).matrix()) < 1e-12);
  }
  const auto p12 = PuParams::from_frequencies(1.0, 2.0);
  const auto d = pd_decompose_transformed(PdKind::kTb1, p12, 2.5, 0.3);
  CHECK(rel((d.h12 + d.h21).matrix(), transformed_form(PdKind::kTb1, p12, 2.5).matrix()) < 1e-12);
  REQUIRE(d.spec);
  Sampler rng(31);
  for (int i = 0; i < 10; ++i) {
    const auto v = rng.state();
    const auto w = forward(*d.spec, v);
    const double want = (d.h12 + d.h21).value(v);
    CHECK(d.h12_x->value(w) + d.h21_x->value(w) == doctest::Approx(want));
  }
}

TEST_CASE("SM embedding") {
  // Omega^4 = alpha^2 - 4 beta makes delta vanish and both branches meet.
  const double tau = std::pow(4.0 / 9.0, 0.25);
  const auto e1 = sm_embedding(k21, 1.0, 1.0, tau, 1);
  const auto e2 = sm_embedding(k21, 1.0, 1.0, tau, -1);
  CHECK(std::abs(e1.delta) < 1e-12);
  CHECK(e1.lambda == doctest::Approx(2.5));
  CHECK(e2.lambda == doctest::Approx(2.5));

  const auto e = sm_embedding(k21, 1.3, 0.7, 1.2, 1);
  const auto w = sm_coordinates(e, {1, 0, 0, 0});
  CHECK(w.y == 1.0);
  CHECK(w.x == doctest::Approx(e.lambda * 1.44));
  Sampler rng(37);
  const auto pb = pullback_hamiltonian(e.spec, k21);
  for (int i = 0; i < 20; ++i) {
    const auto v = rng.state();
    const double want = e.scale * pb.form.value(v);
    CHECK(std::abs(e.h_sm.value(sm_coordinates(e, v)) - want) <= 1e-9 * (1.0 + std::abs(want)));
  }
  CHECK_THROWS_AS(sm_embedding(k21, -1.0, 1.0, 1.0, 1), InvalidInput);
}
