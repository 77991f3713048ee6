#include "pu/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pu/errors.hpp"

namespace pu::num {

Mat::Mat(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw InvalidInput("Mat: entry count " + std::to_string(data_.size()) +
                       " does not match " + std::to_string(rows_) + "x" +
                       std::to_string(cols_));
  }
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidInput("Mat: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::diag(std::span<const double> d) {
  Mat m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Mat Mat::outer(std::span<const double> u, std::span<const double> v) {
  Mat m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * v[j];
  return m;
}

Mat Mat::transpose() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Mat::norm() const { return num::norm(data_); }

double Mat::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

bool Mat::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

static void require_same_shape(const Mat& a, const Mat& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidInput(std::string("Mat ") + op + ": shape mismatch");
  }
}

Mat& Mat::operator+=(const Mat& o) {
  require_same_shape(*this, o, "+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  require_same_shape(*this, o, "-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }
Mat operator-(Mat a) { return a *= -1.0; }
Mat operator*(Mat a, double s) { return a *= s; }
Mat operator*(double s, Mat a) { return a *= s; }

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw InvalidInput("Mat *: inner dimension mismatch");
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vec operator*(const Mat& a, std::span<const double> v) {
  if (a.cols() != v.size()) throw InvalidInput("Mat * Vec: dimension mismatch");
  Vec r(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r[i] += a(i, j) * v[j];
  return r;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

namespace {

struct JacobiSvd {
  Vec sigma;  // unsorted, one per column
  Mat v;      // right singular vectors as columns
};

JacobiSvd one_sided_jacobi(const Mat& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Mat u = a;
  Mat v = Mat::identity(n);
  constexpr int kMaxSweeps = 80;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += u(i, p) * u(i, p);
          beta += u(i, q) * u(i, q);
          gamma += u(i, p) * u(i, q);
        }
        if (gamma == 0.0 || std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double up = u(i, p), uq = u(i, q);
          u(i, p) = c * up - s * uq;
          u(i, q) = s * up + c * uq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }
  JacobiSvd out{Vec(n, 0.0), std::move(v)};
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += u(i, j) * u(i, j);
    out.sigma[j] = std::sqrt(s);
  }
  return out;
}

void require_finite(const Mat& m, const char* who) {
  if (!m.all_finite()) throw InvalidInput(std::string(who) + ": non-finite entry");
}

void require_square(const Mat& m, const char* who) {
  if (!m.square()) throw InvalidInput(std::string(who) + ": matrix must be square");
}

}  // namespace

std::vector<Vec> nullspace(const Mat& m, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("nullspace: tol must be > 0");
  require_finite(m, "nullspace");
  const auto svd = one_sided_jacobi(m);
  const double threshold = tol * (1.0 + m.norm());
  std::vector<Vec> basis;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (svd.sigma[j] <= threshold) {
      Vec col(m.cols());
      for (std::size_t i = 0; i < m.cols(); ++i) col[i] = svd.v(i, j);
      basis.push_back(std::move(col));
    }
  }
  return basis;
}

std::size_t rank(const Mat& m, double tol) { return m.cols() - nullspace(m, tol).size(); }

Vec singular_values(const Mat& m) {
  require_finite(m, "singular_values");
  auto s = one_sided_jacobi(m).sigma;
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

Mat inverse(const Mat& m) {
  require_square(m, "inverse");
  require_finite(m, "inverse");
  const std::size_t n = m.rows();
  Mat a = m;
  Mat inv = Mat::identity(n);
  const double scale = m.max_abs();
  const double pivot_floor = 1e-14 * scale;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (scale == 0.0 || std::abs(a(piv, col)) <= pivot_floor) {
      throw SingularMatrix("inverse: pivot " + std::to_string(a(piv, col)) +
                           " below tolerance in column " + std::to_string(col));
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    const double d = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= d;
      inv(col, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

Mat expm(const Mat& m) {
  require_square(m, "expm");
  require_finite(m, "expm");
  const std::size_t n = m.rows();
  double inf_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(m(i, j));
    inf_norm = std::max(inf_norm, row);
  }
  int squarings = 0;
  if (inf_norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(inf_norm / 0.5)));
  const Mat a = m * std::ldexp(1.0, -squarings);

  // Horner evaluation of sum_{k<=18} a^k / k!.
  constexpr int kDegree = 18;
  Mat result = Mat::identity(n);
  for (int k = kDegree; k >= 1; --k) {
    result = Mat::identity(n) + (a * result) * (1.0 / k);
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

double determinant(const Mat& m) {
  require_square(m, "determinant");
  const std::size_t n = m.rows();
  Mat a = m;
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (a(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

bool is_symmetric(const Mat& m, double rel_tol) {
  if (!m.square()) return false;
  return (m - m.transpose()).max_abs() <= rel_tol * std::max(1.0, m.max_abs());
}

bool is_antisymmetric(const Mat& m, double rel_tol) {
  if (!m.square()) return false;
  return (m + m.transpose()).max_abs() <= rel_tol * std::max(1.0, m.max_abs());
}

Vec leading_minors(const Mat& m) {
  require_square(m, "leading_minors");
  require_finite(m, "leading_minors");
  if (!is_symmetric(m, 1e-10)) throw InvalidInput("leading_minors: matrix is not symmetric");
  const std::size_t n = m.rows();
  Vec minors;
  minors.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    Mat block(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) block(i, j) = m(i, j);
    minors.push_back(determinant(block));
  }
  return minors;
}

bool positive_definite(const Mat& m) {
  const auto minors = leading_minors(m);
  return std::all_of(minors.begin(), minors.end(), [](double d) { return d > 0.0; });
}

LeastSquares least_squares(const Mat& a, std::span<const double> b) {
  if (a.rows() != b.size()) throw InvalidInput("least_squares: dimension mismatch");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Mat q = a;
  Mat r(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double proj = 0.0;
      for (std::size_t i = 0; i < m; ++i) proj += q(i, k) * q(i, j);
      r(k, j) = proj;
      for (std::size_t i = 0; i < m; ++i) q(i, j) -= proj * q(i, k);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < m; ++i) nrm += q(i, j) * q(i, j);
    nrm = std::sqrt(nrm);
    double col_scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) col_scale = std::max(col_scale, std::abs(a(i, j)));
    if (nrm <= 1e-13 * std::max(1.0, col_scale)) {
      throw SingularMatrix("least_squares: column " + std::to_string(j) + " is dependent");
    }
    r(j, j) = nrm;
    for (std::size_t i = 0; i < m; ++i) q(i, j) /= nrm;
  }
  Vec qtb(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) qtb[j] += q(i, j) * b[i];
  Vec x(n, 0.0);
  for (std::size_t jj = n; jj-- > 0;) {
    double s = qtb[jj];
    for (std::size_t k = jj + 1; k < n; ++k) s -= r(jj, k) * x[k];
    x[jj] = s / r(jj, jj);
  }
  const Vec ax = a * std::span<const double>(x);
  double res = 0.0;
  for (std::size_t i = 0; i < m; ++i) res += (ax[i] - b[i]) * (ax[i] - b[i]);
  return {std::move(x), std::sqrt(res)};
}

double projection_residual(std::span<const Vec> basis, std::span<const double> x) {
  Vec r(x.begin(), x.end());
  for (const auto& b : basis) {
    const double c = dot(b, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * b[i];
  }
  return norm(r);
}

Vec flatten(const Mat& m) { return Vec(m.data().begin(), m.data().end()); }

Mat unflatten(std::span<const double> v, std::size_t rows, std::size_t cols) {
  return Mat(rows, cols, Vec(v.begin(), v.end()));
}

}  // namespace pu::num
