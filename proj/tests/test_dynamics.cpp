#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pu/dynamics.hpp"
#include "pu/errors.hpp"
#include "pu/hierarchy.hpp"

using namespace pu;

namespace {
const PuParams k21 = PuParams::from_frequencies(2.0, 1.0);
}

TEST_CASE("classical solutions") {
  const auto zero = eval_solution(make_solution(k21, {}), 1.7);
  CHECK(zero == PhaseState{});
  const auto c = eval_solution(make_solution(k21, {0, 1, 0, 0}), 0.0);
  CHECK(c.q == doctest::Approx(1.0));
  CHECK(c.qd == doctest::Approx(0.0));
  CHECK(c.qdd == doctest::Approx(-4.0));
  CHECK(c.qddd == doctest::Approx(0.0));
  const auto p1 = PuParams::from_frequencies(1.0, 1.0);
  const auto d = eval_solution(make_solution(p1, {0, 0, 1, 0}), std::numbers::pi);
  CHECK(std::abs(d.q) < 1e-12);
  CHECK(d.qd == doctest::Approx(-std::numbers::pi));
  auto wrong = make_solution(k21, {1, 0, 0, 0});
  wrong.p = p1;
  CHECK_THROWS_AS(eval_solution(wrong, 0.0), InvalidRegime);
}

TEST_CASE("potentials") {
  const auto q = parse_potential("quartic:lambda=0.5,on=qdd");
  CHECK(q.target == PotentialTarget::kOnQdd);
  CHECK(q.value(2.0) == doctest::Approx(0.5 * 16.0 / 4.0));
  CHECK(q.derivative(2.0) == doctest::Approx(0.5 * 8.0));
  CHECK(parse_potential("cosine").lambda == 1.0);
  CHECK_THROWS_AS(parse_potential("quartic:lambda=x"), InvalidInput);
  CHECK_THROWS_AS(parse_potential("sextic"), InvalidInput);
  CHECK_THROWS_AS(parse_potential("cubic:on=p"), InvalidInput);
  const Vec pts{-1.3, -0.2, 0.4, 2.0};
  for (const auto& pot : {quartic(0.3), cubic(1.2), cosine(0.8)}) {
    CHECK(derivative_mismatch(pot, pts) < 1e-6);
  }
}

TEST_CASE("RK4 against the analytic solution") {
  const auto sol = make_solution(k21, {0.4, -0.2, 0.7, 0.1});
  const auto traj = integrate(Field{k21, std::nullopt}, eval_solution(sol, 0.0), 1e-3, 10.0);
  CHECK(traj.samples.size() == 10001);
  CHECK(traj.samples.back().first == doctest::Approx(10.0));
  double worst = 0.0;
  for (const auto& [t, v] : traj.samples) {
    const auto a = v.as_array();
    const auto b = eval_solution(sol, t).as_array();
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("zero state stays at rest") {
  const auto traj = integrate(Field{k21, quartic(1.0)}, PhaseState{}, 1e-2, 1.0);
  for (const auto& [t, v] : traj.samples) CHECK(v == PhaseState{});
  CHECK(conservation_report(traj, {hamiltonian_h1(k21)})[0] == 0.0);
}

TEST_CASE("integrator input checks") {
  CHECK_THROWS_AS(integrate(Field{k21, std::nullopt}, PhaseState{1, 0, 0, 0}, 0.0, 1.0),
                  InvalidInput);
  CHECK_THROWS_AS(integrate(Field{k21, quartic(50.0, PotentialTarget::kOnQdd)},
                            PhaseState{3, 0, 3, 0}, 0.05, 50.0),
                  DivergenceError);
}

TEST_CASE("charge conservation") {
  const auto sol = make_solution(k21, {0.5, -0.3, 0.2, 0.4});
  const auto traj = integrate(Field{k21, std::nullopt}, eval_solution(sol, 0.0), 1e-3, 50.0);
  for (double d : conservation_report(traj, ChargeLadder::build(k21, 4).charges())) {
    CHECK(d <= 1e-8);
  }
  const auto pot = quartic(0.25);
  const auto itraj = integrate(Field{k21, pot}, eval_solution(sol, 0.0), 1e-3, 50.0);
  CHECK(conservation_report(itraj, {hamiltonian_h1(k21)}, pot)[0] <= 1e-8);
  CHECK(conservation_report(itraj, {hamiltonian_h1(k21)})[0] > 1e-4);
}

TEST_CASE("monitor columns") {
  auto traj = integrate(Field{k21, std::nullopt}, PhaseState{1, 0, 0, 0}, 0.1, 1.0);
  monitor(traj, {{"H1", hamiltonian_h1(k21)}});
  REQUIRE(traj.charges.size() == 1);
  CHECK(traj.charge_names[0] == "H1");
  CHECK(traj.charges[0][0] == doctest::Approx(-2.0));
}

TEST_CASE("interaction compatibility") {
  const auto v = interaction_compatibility(k21, quartic(1.0), 5);
  CHECK(v.unique);
  CHECK(v.compatible_index == 0);
  CHECK(v.directions.size() == 32);
  const auto w = interaction_compatibility(k21, quartic(1.0, PotentialTarget::kOnQdd), 5);
  CHECK(w.unique);
  CHECK(w.compatible_index == 8);
  CHECK_THROWS_AS(interaction_compatibility(k21, quartic(0.0), 5), InconclusiveTest);
}

TEST_CASE("interaction transform") {
  const auto c = interaction_transform_constraint(k21, 0.0);
  CHECK(c.specs[0].lag.ax == doctest::Approx(3.0));
  CHECK(c.specs[1].lag.ax == doctest::Approx(-3.0));
  CHECK(c.constraint_residual < 1e-12);
  CHECK(c.ta1_singular);
  CHECK_THROWS_AS(interaction_transform_constraint(k21, 9.0 / 4.0), ConstructionError);
  const auto sol = make_solution(k21, {0.3, -0.2, 0.25, 0.1});
  CHECK(two_route_error(k21, c.specs[0], quartic(0.25), eval_solution(sol, 0.0), 1e-3, 10.0) <=
        1e-6);
}

TEST_CASE("structure discovery") {
  const auto p = PuParams::from_coefficients(5.0, 4.0);
  const auto found = structure_discovery(p);
  CHECK(found.size() == 2);
  for (const auto& d : found) {
    const Mat s = d.k * companion_field(p);
    CHECK((s - s.transpose()).max_abs() <= 1e-10 * (1.0 + s.max_abs()));
  }
  const Mat k1 = num::inverse(poisson_j1(p).matrix());
  CHECK(structure_span_residual(found, k1) <= 1e-9);
  CHECK(structure_span_residual(found, num::inverse(poisson_j2(p).matrix())) <= 1e-9);
  // H recovered from the J1^{-1} ray
  const auto c = charge_coordinates(p, QuadHamiltonian(k1 * companion_field(p)));
  CHECK(c.on_h1 == doctest::Approx(1.0));
  CHECK(std::abs(c.on_h2) < 1e-9);
  CHECK_THROWS_AS(structure_discovery(PuParams::from_coefficients(1.0, 0.0)), ParameterDomainError);
}
