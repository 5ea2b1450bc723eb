#pragma once

// Dense linear algebra kernels for desk-scale matrices (n <= 16 or so).
//
// Everything here is a pure function of its arguments. Tolerances are
// explicit parameters; the defaults below are the single thresholds used
// throughout the library so that all predicates agree on what "singular"
// means.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ave::linalg {

/// Relative pivot threshold below which a matrix is declared singular.
inline constexpr double kSingularTol = 1e-10;

using Vector = std::vector<double>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
      throw DimensionError("Matrix: entry count does not match shape");
  }
  Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("Matrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static Matrix diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  static Matrix ones(std::size_t rows, std::size_t cols) {
    return Matrix(rows, cols, 1.0);
  }
  /// u v^T
  static Matrix outer(std::span<const double> u, std::span<const double> v) {
    Matrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * v[j];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  Vector column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  Vector diag() const {
    Vector d(std::min(rows_, cols_));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(i, i);
    return d;
  }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(double a) {
    for (double& x : data_) x *= a;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) { return a *= -1.0; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("Matrix product: inner dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend Vector operator*(const Matrix& a, std::span<const double> x) {
    if (a.cols_ != x.size()) throw DimensionError("Matrix-vector product: dimension mismatch");
    Vector y(a.rows_, 0.0);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < a.cols_; ++j) s += a(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }
  friend Vector operator*(const Matrix& a, const Vector& x) {
    return a * std::span<const double>(x);
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw DimensionError("Matrix: shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Signature (inertia) of a symmetric matrix.
struct Inertia {
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  std::size_t n_zero = 0;
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

// ---------------------------------------------------------------------------
// Entrywise and norm helpers

inline Matrix abs(const Matrix& m) {
  Matrix r = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = std::abs(m(i, j));
  return r;
}

inline Vector abs(std::span<const double> v) {
  Vector r(v.size());
  std::transform(v.begin(), v.end(), r.begin(), [](double x) { return std::abs(x); });
  return r;
}

inline double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Maximum absolute row sum.
inline double norm_inf(const Matrix& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (double x : m.row(i)) s += std::abs(x);
    best = std::max(best, s);
  }
  return best;
}

inline double norm_frobenius(const Matrix& m) {
  double s = 0.0;
  for (double x : m.data()) s += x * x;
  return std::sqrt(s);
}

inline double max_abs_entry(const Matrix& m) {
  double best = 0.0;
  for (double x : m.data()) best = std::max(best, std::abs(x));
  return best;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline Vector add(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("add: length mismatch");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vector sub(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("sub: length mismatch");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vector scale(std::span<const double> a, double s) {
  Vector r(a.begin(), a.end());
  for (double& x : r) x *= s;
  return r;
}

inline bool is_symmetric(const Matrix& m, double rel_tol = 1e-12) {
  if (!m.square()) return false;
  const double tol = rel_tol * std::max(1.0, max_abs_entry(m));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol) return false;
  return true;
}

inline bool all_finite(const Matrix& m) {
  return std::all_of(m.data().begin(), m.data().end(),
                     [](double x) { return std::isfinite(x); });
}

inline bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

/// Entrywise check m >= -tol.
inline bool nonnegative(const Matrix& m, double tol = 0.0) {
  return std::all_of(m.data().begin(), m.data().end(), [tol](double x) { return x >= -tol; });
}

inline bool nonnegative(std::span<const double> v, double tol = 0.0) {
  return std::all_of(v.begin(), v.end(), [tol](double x) { return x >= -tol; });
}

/// Nonpositive off-diagonal entries.
inline bool is_z_matrix(const Matrix& m, double tol = 0.0) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) > tol) return false;
  return true;
}

// ---------------------------------------------------------------------------
// LU with partial pivoting

/// PA = LU with partial pivoting. Singular when some pivot magnitude drops
/// below tol * ||M||_inf.
class LuDecomposition {
 public:
  explicit LuDecomposition(const Matrix& m, double tol = kSingularTol)
      : lu_(m), perm_(m.rows()) {
    if (!m.square()) throw DimensionError("LU: matrix must be square");
    const std::size_t n = m.rows();
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    scale_ = norm_inf(m);
    threshold_ = tol * scale_;
    min_pivot_ = n ? std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        std::swap(perm_[k], perm_[p]);
        sign_ = -sign_;
      }
      const double piv = lu_(k, k);
      min_pivot_ = std::min(min_pivot_, std::abs(piv));
      if (std::abs(piv) <= threshold_ || piv == 0.0) {
        singular_ = true;
        if (piv == 0.0) continue;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        const double f = lu_(i, k) / piv;
        lu_(i, k) = f;
        if (f == 0.0) continue;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
      }
    }
    if (n > 0 && scale_ == 0.0) singular_ = true;
  }

  bool singular() const noexcept { return singular_; }
  std::size_t size() const noexcept { return lu_.rows(); }
  /// Smallest pivot magnitude divided by ||M||_inf (0 for the zero matrix).
  double min_pivot_ratio() const noexcept {
    return scale_ > 0.0 ? min_pivot_ / scale_ : 0.0;
  }

  double determinant() const {
    double d = sign_;
    for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
    return d;
  }

  /// Solves Mx = rhs; caller must have checked !singular().
  Vector solve(std::span<const double> rhs) const {
    const std::size_t n = lu_.rows();
    if (rhs.size() != n) throw DimensionError("LU solve: rhs length mismatch");
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
      x[i] /= lu_(i, i);
    }
    return x;
  }

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  double sign_ = 1.0;
  double scale_ = 0.0;
  double threshold_ = 0.0;
  double min_pivot_ = 0.0;
  bool singular_ = false;
};

/// Solves Mx = rhs. Returns nullopt when M is singular under the pivot rule.
inline std::optional<Vector> lu_factor_solve(const Matrix& m, std::span<const double> rhs,
                                             double tol = kSingularTol) {
  if (!m.square()) throw DimensionError("lu_factor_solve: matrix must be square");
  if (rhs.size() != m.rows()) throw DimensionError("lu_factor_solve: rhs length mismatch");
  LuDecomposition lu(m, tol);
  if (lu.singular()) return std::nullopt;
  Vector x = lu.solve(rhs);
  // One step of iterative refinement.
  Vector r = sub(m * std::span<const double>(x), rhs);
  Vector dx = lu.solve(r);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= dx[i];
  return x;
}

inline std::optional<Vector> lu_factor_solve(const Matrix& m, const Vector& rhs,
                                             double tol = kSingularTol) {
  return lu_factor_solve(m, std::span<const double>(rhs), tol);
}

inline double det(const Matrix& m) {
  if (!m.square()) throw DimensionError("det: matrix must be square");
  if (m.rows() == 0) return 1.0;
  return LuDecomposition(m, 0.0).determinant();
}

inline bool is_singular(const Matrix& m, double tol = kSingularTol) {
  return LuDecomposition(m, tol).singular();
}

inline std::optional<Matrix> inverse(const Matrix& m, double tol = kSingularTol) {
  if (!m.square()) throw DimensionError("inverse: matrix must be square");
  const std::size_t n = m.rows();
  LuDecomposition lu(m, tol);
  if (lu.singular()) return std::nullopt;
  Matrix inv(n, n);
  Vector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    Vector col = lu.solve(e);
    Vector r = sub(m * std::span<const double>(col), e);
    Vector dc = lu.solve(r);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i] - dc[i];
  }
  return inv;
}

/// Numerical rank by Gaussian elimination with full pivoting.
inline std::size_t rank(Matrix m, double rel_tol = 1e-9) {
  const std::size_t rows = m.rows(), cols = m.cols();
  const double tol = rel_tol * std::max(1.0, max_abs_entry(m));
  std::size_t r = 0;
  std::vector<bool> used_col(cols, false);
  for (std::size_t step = 0; step < std::min(rows, cols); ++step) {
    std::size_t pi = 0, pj = 0;
    double best = 0.0;
    for (std::size_t i = r; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (!used_col[j] && std::abs(m(i, j)) > best) {
          best = std::abs(m(i, j));
          pi = i;
          pj = j;
        }
    if (best <= tol) break;
    for (std::size_t j = 0; j < cols; ++j) std::swap(m(r, j), m(pi, j));
    used_col[pj] = true;
    for (std::size_t i = r + 1; i < rows; ++i) {
      const double f = m(i, pj) / m(r, pj);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Symmetric eigenvalues (cyclic Jacobi)

/// Eigenvalues of a symmetric matrix, sorted descending.
inline Vector sym_eigenvalues(const Matrix& m) {
  if (!m.square()) throw DimensionError("sym_eigenvalues: matrix must be square");
  if (!is_symmetric(m)) throw std::invalid_argument("sym_eigenvalues: matrix is not symmetric");
  const std::size_t n = m.rows();
  Matrix a = m;
  // Symmetrize exactly so that rotations keep a symmetric.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (m(i, j) + m(j, i));

  const double target = 1e-12 * std::max(norm_frobenius(a), std::numeric_limits<double>::min());
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
      }
  }
  Vector ev = a.diag();
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

/// Counts eigenvalues > tol, < -tol and within [-tol, tol].
inline Inertia signature(const Matrix& m, double tol) {
  Inertia in;
  for (double l : sym_eigenvalues(m)) {
    if (l > tol)
      ++in.n_pos;
    else if (l < -tol)
      ++in.n_neg;
    else
      ++in.n_zero;
  }
  return in;
}

inline double lambda_min(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  return sym_eigenvalues(m).back();
}

inline double lambda_max(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  return sym_eigenvalues(m).front();
}

inline double min_singular_value(const Matrix& m) {
  if (!m.square()) throw DimensionError("min_singular_value: matrix must be square");
  return std::sqrt(std::max(0.0, lambda_min(m.transpose() * m)));
}

inline double spectral_norm(const Matrix& m) {
  if (!m.square()) throw DimensionError("spectral_norm: matrix must be square");
  return std::sqrt(std::max(0.0, lambda_max(m.transpose() * m)));
}

// ---------------------------------------------------------------------------
// Spectral radius

/// Perron root and vector of a nonnegative matrix.
struct PerronPair {
  double root = 0.0;
  Vector vector;  // positive, max-normalized
};

/// Power iteration on M + eps*ee^T (shifted to break periodicity) with
/// Collatz-Wielandt bounds as the stopping rule.
inline PerronPair perron(const Matrix& m) {
  if (!m.square()) throw DimensionError("perron: matrix must be square");
  if (!nonnegative(m)) throw std::invalid_argument("perron: matrix has a negative entry");
  const std::size_t n = m.rows();
  PerronPair out;
  out.vector.assign(n, 1.0);
  const double amax = max_abs_entry(m);
  if (n == 0 || amax == 0.0) return out;

  const double eps = 1e-12 * amax;
  Matrix b = m;
  for (double& x : b.data()) x += eps;
  const double shift = 0.5 * norm_inf(b);

  Vector x(n, 1.0), y(n);
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  double prev = -1.0;
  for (int it = 0; it < 200000; ++it) {
    y = b * x;
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] / x[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    const double est = 0.5 * (lo + hi);
    if (hi - lo <= 1e-13 * hi) break;
    if (it > 50 && std::abs(est - prev) <= 1e-15 * est && hi - lo <= 1e-9 * hi) break;
    prev = est;
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += shift * x[i];
      nrm = std::max(nrm, y[i]);
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / nrm;
  }
  out.root = 0.5 * (lo + hi);
  const double xm = norm_inf(x);
  for (std::size_t i = 0; i < n; ++i) out.vector[i] = x[i] / xm;
  return out;
}

/// Perron root of a nonnegative matrix.
inline double spectral_radius_nonneg(const Matrix& m) { return perron(m).root; }

/// rho(M) via the Gelfand limit ||M^(2^k)||^(1/2^k) with renormalized
/// repeated squaring.
inline double spectral_radius_general(const Matrix& m) {
  if (!m.square()) throw DimensionError("spectral_radius_general: matrix must be square");
  const double s0 = norm_inf(m);
  if (m.rows() == 0 || s0 == 0.0) return 0.0;
  // Invariant: M^(2^k) = exp(log_total) * B with ||B||_inf = 1.
  Matrix b = m * (1.0 / s0);
  double est = s0;
  double power = 1.0;
  double log_total = std::log(s0);
  for (int k = 1; k <= 40; ++k) {
    Matrix sq = b * b;
    const double nrm = norm_inf(sq);
    if (nrm == 0.0 || !std::isfinite(nrm)) return nrm == 0.0 ? 0.0 : est;
    power *= 2.0;
    log_total = 2.0 * log_total + std::log(nrm);
    b = sq * (1.0 / nrm);
    const double next = std::exp(log_total / power);
    if (std::abs(next - est) <= 1e-15 * std::max(next, 1e-300) && k > 8) {
      est = next;
      break;
    }
    est = next;
  }
  return est;
}

}  // namespace ave::linalg
