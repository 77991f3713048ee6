#include <doctest.h>

#include <cmath>

#include "pu/core.hpp"
#include "pu/errors.hpp"
#include "pu/numkit.hpp"

using pu::num::Mat;
using pu::num::Vec;
namespace num = pu::num;

TEST_CASE("nullspace of trivial kernels") {
  CHECK(num::nullspace(Mat::identity(4), 1e-12).empty());
  const auto z = num::nullspace(Mat(2, 2), 1e-12);
  REQUIRE(z.size() == 2);
  CHECK(std::abs(num::dot(z[0], z[1])) < 1e-14);
  CHECK(num::norm(z[0]) == doctest::Approx(1.0));
}

TEST_CASE("companion matrix with beta != 0 is invertible") {
  const auto p = pu::PuParams::from_coefficients(5.0, 4.0);
  const Mat m = pu::companion_field(p);
  CHECK(num::nullspace(m, 1e-12).empty());
  CHECK(num::determinant(m) == doctest::Approx(4.0));
}

TEST_CASE("nullspace vectors are annihilated") {
  const Mat m{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  const auto z = num::nullspace(m, 1e-12);
  REQUIRE(z.size() == 1);
  CHECK(num::norm(m * z[0]) < 1e-13);
  CHECK(num::rank(m, 1e-12) == 2);
}

TEST_CASE("inverse") {
  CHECK(num::inverse(Mat::identity(3)) == Mat::identity(3));
  const auto j1 = pu::poisson_j1(pu::PuParams::from_coefficients(5.0, 4.0)).matrix();
  CHECK((num::inverse(j1) * j1 - Mat::identity(4)).max_abs() < 1e-12);
  CHECK_THROWS_AS(num::inverse(Mat(3, 3)), pu::SingularMatrix);
}

TEST_CASE("expm") {
  CHECK((num::expm(Mat(4, 4)) - Mat::identity(4)).max_abs() < 1e-15);
  const Mat e = num::expm(Mat::diag(Vec{1.0, 2.0}));
  CHECK(e(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK(e(1, 1) == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
  CHECK(e(0, 1) == 0.0);
  const Mat half = num::expm(0.5 * Mat::identity(4));
  CHECK((half - std::exp(0.5) * Mat::identity(4)).max_abs() < 1e-14);
  // rotation generator
  const Mat r = num::expm(Mat{{0, -1}, {1, 0}});
  CHECK(r(0, 0) == doctest::Approx(std::cos(1.0)));
  CHECK(r(1, 0) == doctest::Approx(std::sin(1.0)));
  // large norm goes through scaling and squaring
  const Mat big = num::expm(Mat::diag(Vec{-30.0, 20.0}));
  CHECK(big(1, 1) == doctest::Approx(std::exp(20.0)).epsilon(1e-12));
}

TEST_CASE("leading minors and definiteness") {
  const auto m3 = num::leading_minors(Mat::identity(3));
  CHECK(m3 == Vec{1, 1, 1});
  CHECK(num::leading_minors(Mat::diag(Vec{1.0, -1.0})) == Vec{1, -1});
  const auto p = pu::PuParams::from_coefficients(5.0, 4.0);
  const auto minors = num::leading_minors(pu::hamiltonian_h1(p).matrix());
  CHECK(minors[0] == doctest::Approx(-4.0));
  CHECK_FALSE(num::positive_definite(pu::hamiltonian_h1(p).matrix()));
  CHECK(num::positive_definite(Mat{{2, 1}, {1, 2}}));
}

TEST_CASE("least squares and projection") {
  const Mat a{{1, 0}, {0, 1}, {1, 1}};
  const auto ls = num::least_squares(a, Vec{1, 2, 3});
  CHECK(ls.coeffs[0] == doctest::Approx(1.0));
  CHECK(ls.coeffs[1] == doctest::Approx(2.0));
  CHECK(ls.residual < 1e-12);
  const std::vector<Vec> basis{{1, 0, 0}, {0, 1, 0}};
  CHECK(num::projection_residual(basis, Vec{3, 4, 0}) < 1e-15);
  CHECK(num::projection_residual(basis, Vec{0, 0, 1}) > 0.1);
}

TEST_CASE("singular values are sorted") {
  const auto s = num::singular_values(Mat::diag(Vec{1.0, -3.0, 2.0}));
  REQUIRE(s.size() == 3);
  CHECK(s[0] == doctest::Approx(3.0));
  CHECK(s[1] == doctest::Approx(2.0));
  CHECK(s[2] == doctest::Approx(1.0));
}

TEST_CASE("flatten round trip and symmetry tests") {
  const Mat m{{1, 2}, {3, 4}};
  CHECK(num::unflatten(num::flatten(m), 2, 2) == m);
  CHECK(num::is_symmetric(Mat{{1, 2}, {2, 1}}, 1e-12));
  CHECK(num::is_antisymmetric(Mat{{0, 2}, {-2, 0}}, 1e-12));
  CHECK_FALSE(num::is_symmetric(m, 1e-12));
}
