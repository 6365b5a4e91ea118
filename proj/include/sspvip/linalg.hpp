#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

// Dense vectors and operators. Everything here is deliberately plain:
// problems in this library are small (dims in the tens), determinism is a
// contract, and the spectral routines below are pinned to fixed seeds and
// stopping rules so repeated runs are bitwise identical.

namespace sspvip {

using Vec = std::vector<double>;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IterationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline void check_same_dim(const Vec& a, const Vec& b, const char* where) {
  if (a.size() != b.size())
    throw DimensionError(std::string(where) + ": dimension mismatch " +
                         std::to_string(a.size()) + " vs " + std::to_string(b.size()));
}

inline double inner(const Vec& a, const Vec& b) {
  check_same_dim(a, b, "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(inner(a, a)); }

inline Vec add(Vec a, const Vec& b) {
  check_same_dim(a, b, "add");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline Vec sub(Vec a, const Vec& b) {
  check_same_dim(a, b, "sub");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

inline Vec scale(double s, Vec a) {
  for (double& x : a) x *= s;
  return a;
}

// a += s*b
inline void axpy(double s, const Vec& b, Vec& a) {
  check_same_dim(a, b, "axpy");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
}

inline double distance(const Vec& a, const Vec& b) { return norm(sub(a, b)); }

// Row-major dense matrix; doubles as the bounded linear operator type.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;  // rows*cols, row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  Matrix(std::size_t r, std::size_t c, std::vector<double> d)
      : rows(r), cols(c), data(std::move(d)) {
    if (data.size() != rows * cols) throw DimensionError("Matrix: data size mismatch");
  }

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rws) {
    Matrix m(rws.size(), rws.size() ? rws.begin()->size() : 0);
    std::size_t i = 0;
    for (const auto& row : rws) {
      if (row.size() != m.cols) throw DimensionError("Matrix: ragged rows");
      std::size_t j = 0;
      for (double v : row) m.at(i, j++) = v;
      ++i;
    }
    return m;
  }

  bool operator==(const Matrix& o) const {
    return rows == o.rows && cols == o.cols && data == o.data;
  }
};

inline Vec apply(const Matrix& m, const Vec& x) {
  if (x.size() != m.cols)
    throw DimensionError("apply: vector length " + std::to_string(x.size()) +
                         " vs operator with " + std::to_string(m.cols) + " columns");
  Vec y(m.rows, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    double s = 0.0;
    const double* row = m.data.data() + i * m.cols;
    for (std::size_t j = 0; j < m.cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

inline Matrix adjoint(const Matrix& m) {
  Matrix t(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
  return t;
}

// y = M^T x without forming the transpose.
inline Vec apply_adjoint(const Matrix& m, const Vec& x) {
  if (x.size() != m.rows) throw DimensionError("apply_adjoint: dimension mismatch");
  Vec y(m.cols, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const double* row = m.data.data() + i * m.cols;
    for (std::size_t j = 0; j < m.cols; ++j) y[j] += row[j] * x[i];
  }
  return y;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw DimensionError("matmul: inner dimension mismatch");
  Matrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      double aik = a.at(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

// Deterministic power-iteration start: all ones, perturbed per index so the
// seed is never an unlucky eigenvector of a structured operator.
inline Vec power_seed(std::size_t n) {
  Vec v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * static_cast<double>(i);
  return v;
}

// Largest singular value via power iteration on T^T T. Rayleigh quotient
// sequence is nondecreasing, so the estimate approaches from below;
// convergence is declared when successive estimates differ by < tol relative.
inline double operator_norm(const Matrix& t, double tol = 1e-10,
                            std::size_t max_iters = 100000) {
  if (t.rows == 0 || t.cols == 0) return 0.0;
  Vec v = power_seed(t.cols);
  double inv = 1.0 / norm(v);
  for (double& x : v) x *= inv;
  double est = 0.0;
  for (std::size_t it = 0; it < max_iters; ++it) {
    Vec w = sspvip::apply(t, v);
    double lam = inner(w, w);  // = v^T (T^T T) v for unit v
    if (lam == 0.0) return 0.0;
    double next = std::sqrt(lam);
    Vec z = apply_adjoint(t, w);
    double zn = norm(z);
    if (zn == 0.0) return 0.0;
    inv = 1.0 / zn;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = z[i] * inv;
    if (it > 0 && std::abs(next - est) < tol * next) return next;
    est = next;
  }
  throw IterationError("operator_norm: no convergence after " + std::to_string(max_iters) +
                       " iterations (last estimate " + std::to_string(est) +
                       ", tol " + std::to_string(tol) + ")");
}

inline Matrix symmetric_part(const Matrix& m) {
  if (m.rows != m.cols) throw DimensionError("symmetric_part: matrix not square");
  Matrix s(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) s.at(i, j) = 0.5 * (m.at(i, j) + m.at(j, i));
  return s;
}

namespace detail {

// Cyclic Jacobi sweeps; returns all eigenvalues of a symmetric matrix.
// O(n^3) per sweep, fine for the n <= 64 sizes this library works at.
inline std::vector<double> jacobi_eigenvalues(Matrix s, std::size_t max_sweeps = 100) {
  const std::size_t n = s.rows;
  if (n == 0) return {};
  double scale = 0.0;
  for (double x : s.data) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return std::vector<double>(n, 0.0);
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += s.at(i, j) * s.at(i, j);
    if (std::sqrt(off) <= 1e-14 * scale * n) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = s.at(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        double tau = (s.at(q, q) - s.at(p, p)) / (2.0 * apq);
        double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t), sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double skp = s.at(k, p), skq = s.at(k, q);
          s.at(k, p) = c * skp - sn * skq;
          s.at(k, q) = sn * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double spk = s.at(p, k), sqk = s.at(q, k);
          s.at(p, k) = c * spk - sn * sqk;
          s.at(q, k) = sn * spk + c * sqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = s.at(i, i);
  return ev;
}

// In-place lower Cholesky; false on a nonpositive pivot (not PD).
inline bool cholesky(Matrix& a) {
  const std::size_t n = a.rows;
  for (std::size_t j = 0; j < n; ++j) {
    double d = a.at(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= a.at(j, k) * a.at(j, k);
    if (!(d > 0.0)) return false;
    double l = std::sqrt(d);
    a.at(j, j) = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a.at(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a.at(i, k) * a.at(j, k);
      a.at(i, j) = s / l;
    }
  }
  return true;
}

inline Vec cholesky_solve(const Matrix& l, Vec b) {
  const std::size_t n = l.rows;
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l.at(i, k) * b[k];
    b[i] = s / l.at(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l.at(k, ii) * b[k];
    b[ii] = s / l.at(ii, ii);
  }
  return b;
}

}  // namespace detail

// Smallest eigenvalue of the symmetric part of m. Primary route: shift-0
// inverse power iteration through a Cholesky factor (breakdown certifies the
// matrix is not positive definite). Fallback for n <= 64: Jacobi sweeps,
// which also report the exact smallest eigenvalue when it is <= 0.
inline double sym_eig_min(const Matrix& m, double tol = 1e-10) {
  Matrix s = symmetric_part(m);
  const std::size_t n = s.rows;
  if (n == 0) throw DimensionError("sym_eig_min: empty matrix");
  Matrix l = s;
  if (detail::cholesky(l)) {
    Vec v = power_seed(n);
    double inv = 1.0 / norm(v);
    for (double& x : v) x *= inv;
    double est = 0.0;
    for (std::size_t it = 0; it < 100000; ++it) {
      Vec z = detail::cholesky_solve(l, v);
      double zn = norm(z);
      if (zn == 0.0) break;
      inv = 1.0 / zn;
      for (std::size_t i = 0; i < n; ++i) v[i] = z[i] * inv;
      Vec sv = sspvip::apply(s, v);
      double lam = inner(v, sv);
      if (it > 0 && std::abs(lam - est) < tol * std::max(std::abs(lam), 1e-30)) return lam;
      est = lam;
    }
    // fall through to the dense route when iteration stalls
  }
  if (n <= 64) {
    auto ev = detail::jacobi_eigenvalues(s);
    double mn = ev[0];
    for (double e : ev) mn = std::min(mn, e);
    return mn;
  }
  throw IterationError(
      "sym_eig_min: symmetric part is not positive definite and the dense "
      "fallback is limited to n <= 64 (n = " + std::to_string(n) + ")");
}

}  // namespace sspvip
