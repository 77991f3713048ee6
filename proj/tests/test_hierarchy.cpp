#include <doctest.h>

#include <cmath>

#include "pu/errors.hpp"
#include "pu/hierarchy.hpp"
#include "pu/numkit.hpp"
#include "pu/sampling.hpp"

using namespace pu;

namespace {

const PuParams kP = PuParams::from_coefficients(5.0, 4.0);

// Independent oracle: the explicit polynomial list.
double explicit_p(int n, double a, double b) {
  switch (n) {
    case 0: return 0.0;
    case 1: return -1.0;
    case 2: return a;
    case 3: return b - a * a;
    case 4: return a * a * a - 2.0 * a * b;
    case 5: return -a * a * a * a + 3.0 * a * a * b - b * b;
  }
  return NAN;
}

double rel(const Mat& a, const Mat& b) { return (a - b).max_abs() / (1.0 + b.max_abs()); }

}  // namespace

TEST_CASE("next charge on (H1, H2)") {
  const auto h3 = next_charge(kP, hamiltonian_h2(kP));
  const auto c3 = charge_coordinates(kP, h3);
  CHECK(c3.on_h1 == doctest::Approx(-4.0));
  CHECK(c3.on_h2 == doctest::Approx(-5.0));
  const auto h4 = next_charge(kP, h3);
  const auto c4 = charge_coordinates(kP, h4);
  CHECK(c4.on_h1 == doctest::Approx(20.0));
  CHECK(c4.on_h2 == doctest::Approx(21.0));
  CHECK(rel(h3.matrix(), (-5.0 * hamiltonian_h2(kP) - 4.0 * hamiltonian_h1(kP)).matrix()) < 1e-12);
}

TEST_CASE("next_charge of H1 is H2") {
  CHECK(rel(next_charge(kP, hamiltonian_h1(kP)).matrix(), hamiltonian_h2(kP).matrix()) < 1e-12);
}

TEST_CASE("charge ladder against the closed recursion") {
  Sampler rng(11);
  for (int i = 0; i < 20; ++i) {
    const auto p = rng.coefficients();
    const double a = p.alpha(), b = p.beta();
    const auto ladder = ChargeLadder::build(p, 8);
    // H_{n+2} = -alpha H_{n+1} - beta H_n on coordinates
    for (std::size_t n = 0; n + 2 < ladder.depth(); ++n) {
      const auto& c0 = ladder.coordinates()[n];
      const auto& c1 = ladder.coordinates()[n + 1];
      const auto& c2 = ladder.coordinates()[n + 2];
      const double scale = 1.0 + std::abs(c2.on_h1) + std::abs(c2.on_h2);
      CHECK(std::abs(c2.on_h1 - (-a * c1.on_h1 - b * c0.on_h1)) / scale < 1e-10);
      CHECK(std::abs(c2.on_h2 - (-a * c1.on_h2 - b * c0.on_h2)) / scale < 1e-10);
    }
  }
}

TEST_CASE("polynomials") {
  CHECK(pu_polynomial(0, kP) == 0.0);
  CHECK(pu_polynomial(1, kP) == -1.0);
  CHECK(pu_polynomial(3, kP) == doctest::Approx(-21.0));
  CHECK(pu_polynomial(5, PuParams::from_coefficients(1.0, 1.0)) == doctest::Approx(1.0));
  Sampler rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto p = rng.coefficients();
    for (int n = 0; n <= 5; ++n) {
      const double want = explicit_p(n, p.alpha(), p.beta());
      CHECK(std::abs(pu_polynomial(n, p) - want) <= 1e-10 * (1.0 + std::abs(want)));
    }
  }
}

TEST_CASE("literal P4 reading disagrees with the recursion") {
  // The literal alpha^3 - alpha beta differs from the sum formula by alpha beta.
  const double literal = 125.0 - 20.0;
  CHECK(pu_polynomial(4, kP) == doctest::Approx(85.0));
  CHECK(std::abs(pu_polynomial(4, kP) - literal) == doctest::Approx(20.0));
  // H5 coefficient on H1 is beta P3 and on H2 is (P5 + beta P3) / alpha; both
  // follow from the same P-sequence that gives P4 = alpha^3 - 2 alpha beta.
  const auto c5 = ChargeLadder::build(kP, 5).coordinates()[4];
  CHECK(c5.on_h1 == doctest::Approx(4.0 * pu_polynomial(3, kP)));
}

TEST_CASE("ladder via X3") {
  const auto k1 = ladder_via_x3(kP, 1);
  CHECK(rel(k1.matrix(), hamiltonian_h2(kP).matrix()) < 1e-12);
  const auto c2 = charge_coordinates(kP, ladder_via_x3(kP, 2));
  CHECK(c2.on_h1 == doctest::Approx(-4.0));
  CHECK(c2.on_h2 == doctest::Approx(-5.0));
  const auto c3 = charge_coordinates(kP, ladder_via_x3(kP, 3));
  CHECK(c3.on_h1 == doctest::Approx(20.0));
  CHECK(c3.on_h2 == doctest::Approx(21.0));
}

TEST_CASE("X4 pair") {
  const auto pair = x4_pair(kP);
  CHECK(rel(pair.hbar1.matrix(), (5.0 * hamiltonian_h1(kP) + hamiltonian_h2(kP)).matrix()) < 1e-12);
  const auto p0 = PuParams::from_coefficients(2.0, 0.0);
  CHECK(x4_pair(p0).hbar2.matrix().max_abs() == 0.0);
  Sampler rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto p = rng.coefficients();
    const auto xp = x4_pair(p);
    const Mat x4 = x4_generator(p);
    CHECK(field_residual(poisson_j1(p), xp.hbar1, x4) <= 1e-10);
    CHECK(field_residual(poisson_j2(p), xp.hbar2, x4) <= 1e-10);
  }
}

TEST_CASE("combination coefficients") {
  const auto p = PuParams::from_frequencies(2.0, 1.0);
  const double w1 = 4.0, w2 = 1.0;
  const double c1 = 1.0, c2 = 10.0;
  const double d = (c2 - c1 * w1) * (c2 - c1 * w2);
  const auto [c3, c4] = combination_coefficients(p, c1, c2, NumeratorVariant::kSymmetric);
  CHECK(c3 == doctest::Approx(c1 * w1 * w2 / d));
  CHECK(c4 == doctest::Approx(c2 / d));
  CHECK(combine(p, c1, c2).residual <= 1e-10);
  const auto pure_j1 = combine(p, 1.0, 0.0);
  CHECK(pure_j1.residual <= 1e-10);
  CHECK(pure_j1.c4 == 0.0);
  const auto pure_j2 = combine(p, 0.0, 1.0);
  CHECK(pure_j2.residual <= 1e-10);
  CHECK(pure_j2.c3 == 0.0);
  CHECK(rel(pure_j2.jbar.matrix(), poisson_j2(p).matrix()) < 1e-15);
}

TEST_CASE("literal combination numerator fails the flow test") {
  const auto p = PuParams::from_frequencies(2.0, 1.0);
  const auto [c3, c4] = combination_coefficients(p, 1.0, 10.0, NumeratorVariant::kLiteral);
  const auto j = poisson_j1(p) + 10.0 * poisson_j2(p);
  const auto h = c3 * hamiltonian_h1(p) + c4 * hamiltonian_h2(p);
  CHECK(flow_residual(j, h, p) > 1e-3);
}

TEST_CASE("combined structure exclusions") {
  const auto p = PuParams::from_frequencies(2.0, 1.0);
  CHECK_THROWS_AS(combine(p, 1.0, 4.0), DegenerateCombination);
  CHECK_THROWS_AS(combine(p, 1.0, 1.0), DegenerateCombination);
}

TEST_CASE("positive definite window") {
  const auto p = PuParams::from_frequencies(2.0, 1.0);
  CHECK(pd_window(p, 1.0, 2.0));
  CHECK(pd_window_by_minors(p, 1.0, 2.0));
  for (double c : {-2.0, -0.5, 0.5, 3.0}) {
    CHECK_FALSE(pd_window(p, 0.0, c));
    CHECK_FALSE(pd_window(p, c, 0.0));
    CHECK_FALSE(pd_window_by_minors(p, 0.0, c));
    CHECK_FALSE(pd_window_by_minors(p, c, 0.0));
  }
  Sampler rng(9);
  for (int i = 0; i < 200; ++i) {
    const auto q = rng.nondegenerate_frequencies();
    const double c1 = rng.uniform(-3, 3), c2 = rng.uniform(-3, 3);
    const auto [w1, w2] = q.omega_squared();
    if (std::abs(c2 - c1 * w1) < 1e-3 || std::abs(c2 - c1 * w2) < 1e-3) continue;
    CHECK(pd_window(q, c1, c2) == pd_window_by_minors(q, c1, c2));
  }
}

TEST_CASE("square decomposition sums to the combined Hamiltonian") {
  const auto p = PuParams::from_frequencies(2.0, 1.0);
  const auto d = pd_decompose(p, 1.0, 2.0);
  CHECK(rel((d.h12 + d.h21).matrix(), combine(p, 1.0, 2.0).hbar.matrix()) < 1e-12);
  CHECK(num::positive_definite(d.h12.matrix() + d.h21.matrix()));
  CHECK_THROWS_AS(pd_decompose(PuParams::from_frequencies(1.0, 1.0), 1.0, 2.0),
                  DecompositionUndefined);
}
