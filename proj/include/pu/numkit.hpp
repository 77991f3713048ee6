#pragma once

// Small dense real linear algebra. Sizes here never exceed 16x16, so every
// kernel is a straightforward O(n^3) loop over a row-major buffer.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace pu::num {

using Vec = std::vector<double>;

class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0);
  Mat(std::size_t rows, std::size_t cols, std::vector<double> entries);
  Mat(std::initializer_list<std::initializer_list<double>> rows);

  static Mat identity(std::size_t n);
  static Mat zeros(std::size_t rows, std::size_t cols) { return Mat(rows, cols); }
  static Mat diag(std::span<const double> d);
  static Mat outer(std::span<const double> u, std::span<const double> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  Mat transpose() const;
  // Frobenius norm.
  double norm() const;
  double max_abs() const;
  bool all_finite() const;

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(double s);

  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator-(Mat a);
Mat operator*(Mat a, double s);
Mat operator*(double s, Mat a);
Mat operator*(const Mat& a, const Mat& b);
Vec operator*(const Mat& a, std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> v);

// Orthonormal basis of {v : |m v| <= tol (1 + |m|_F)}, computed from a
// one-sided Jacobi SVD. Throws InvalidInput on non-finite entries or tol <= 0.
std::vector<Vec> nullspace(const Mat& m, double tol);

// Numerical rank under the same threshold as nullspace().
std::size_t rank(const Mat& m, double tol);

// Singular values in descending order.
Vec singular_values(const Mat& m);

// Gauss-Jordan with partial pivoting. Throws SingularMatrix when the best
// pivot falls below 1e-14 * max|m|.
Mat inverse(const Mat& m);

// Scaling-and-squaring with a degree-18 Taylor kernel.
Mat expm(const Mat& m);

// Determinants of the k x k top-left blocks, k = 1..n. Requires symmetry to
// 1e-10 (relative); throws InvalidInput otherwise.
Vec leading_minors(const Mat& m);
bool positive_definite(const Mat& m);

double determinant(const Mat& m);

struct LeastSquares {
  Vec coeffs;
  double residual = 0.0;  // |A x - b|
};
// Least squares via modified Gram-Schmidt on the columns of a.
LeastSquares least_squares(const Mat& a, std::span<const double> b);

// Distance from x to span(basis); basis must be orthonormal.
double projection_residual(std::span<const Vec> basis, std::span<const double> x);

// Row-major flattening helpers used by the Sylvester-type solvers.
Vec flatten(const Mat& m);
Mat unflatten(std::span<const double> v, std::size_t rows, std::size_t cols);

bool is_symmetric(const Mat& m, double rel_tol);
bool is_antisymmetric(const Mat& m, double rel_tol);

}  // namespace pu::num
