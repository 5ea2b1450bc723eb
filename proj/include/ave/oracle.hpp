#pragma once

// Brute-force ground truth and reduction generators for tests and audits.
//
// Nothing here calls into the orthant decomposition or the predicates; the
// only shared piece is the Matrix type. Linear solves use a private
// Gauss-Jordan elimination so that a bug in the main LU path cannot hide.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ave/core.hpp"
#include "ave/linalg.hpp"
#include "ave/random.hpp"

namespace ave::oracle {

using linalg::Matrix;
using linalg::Vector;

/// Ax + |x| - b computed directly.
inline Vector plain_residual(const Matrix& a, std::span<const double> b, std::span<const double> x) {
  Vector r(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    double acc = std::abs(x[i]) - b[i];
    for (std::size_t j = 0; j < x.size(); ++j) acc += a(i, j) * x[j];
    r[i] = acc;
  }
  return r;
}

/// Gauss-Jordan inverse with full pivoting; nullopt when a pivot falls below
/// rel_tol times the largest entry.
inline std::optional<Matrix> gauss_jordan_inverse(const Matrix& m, double rel_tol = 1e-11) {
  const std::size_t n = m.rows();
  Matrix a = m, inv = Matrix::identity(n);
  double big = 0.0;
  for (double v : a.data()) big = std::max(big, std::abs(v));
  if (n > 0 && big == 0.0) return std::nullopt;
  std::vector<std::size_t> col_of(n);
  std::vector<bool> used_row(n, false), used_col(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pr = 0, pc = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used_row[i]) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (!used_col[j] && std::abs(a(i, j)) > best) {
          best = std::abs(a(i, j));
          pr = i;
          pc = j;
        }
    }
    if (best <= rel_tol * big) return std::nullopt;
    used_row[pr] = used_col[pc] = true;
    col_of[pc] = pr;
    const double p = a(pr, pc);
    for (std::size_t j = 0; j < n; ++j) {
      a(pr, j) /= p;
      inv(pr, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == pr || a(i, pc) == 0.0) continue;
      const double f = a(i, pc);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(pr, j);
        inv(i, j) -= f * inv(pr, j);
      }
    }
  }
  // Row col_of[c] of the reduced system holds unknown c.
  Matrix out(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t j = 0; j < n; ++j) out(c, j) = inv(col_of[c], j);
  return out;
}

/// All solutions found in orthants where A + D_s is invertible, deduplicated.
/// Exact for instances whose solution set is finite and whose shifted
/// matrices are all nonsingular.
inline std::vector<Vector> orthant_point_solutions(const Matrix& a, std::span<const double> b) {
  const std::size_t n = a.rows();
  std::vector<Vector> out;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
    Matrix m = a;
    std::vector<int> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = ((k >> (n - 1 - i)) & 1u) ? -1 : 1;
      m(i, i) += s[i];
    }
    auto inv = gauss_jordan_inverse(m);
    if (!inv) continue;
    Vector x = *inv * Vector(b.begin(), b.end());
    const double scale = 1.0 + std::abs(*std::max_element(x.begin(), x.end(), [](double p, double q) {
      return std::abs(p) < std::abs(q);
    }));
    bool inside = true;
    for (std::size_t i = 0; i < n; ++i) inside = inside && s[i] * x[i] >= -1e-9 * scale;
    if (!inside) continue;
    bool dup = false;
    for (const auto& y : out) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(x[i] - y[i]));
      dup = dup || d <= 1e-8 * scale;
    }
    if (!dup) out.push_back(std::move(x));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Grid scan

struct GridScan {
  std::vector<std::pair<double, double>> box;
  double step = 0.0;
  double threshold = 0.0;
  std::vector<std::pair<Vector, double>> hits;
};

/// Residual infinity-norm on a regular grid over a 2-D box; keeps the points
/// below threshold.
inline GridScan residual_grid_scan(const AveInstance& inst,
                                   const std::vector<std::pair<double, double>>& box, double step,
                                   double threshold) {
  if (inst.n() != 2) throw std::invalid_argument("residual_grid_scan: n must be 2");
  if (box.size() != 2 || !(step > 0.0))
    throw std::invalid_argument("residual_grid_scan: need a 2-D box and a positive step");
  GridScan g{box, step, threshold, {}};
  auto count = [&](const std::pair<double, double>& r) {
    return static_cast<std::size_t>(std::floor((r.second - r.first) / step + 1e-9)) + 1;
  };
  const std::size_t nx = count(box[0]), ny = count(box[1]);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const Vector x{box[0].first + static_cast<double>(i) * step,
                     box[1].first + static_cast<double>(j) * step};
      const Vector r = plain_residual(inst.A, inst.b, x);
      const double norm = std::max(std::abs(r[0]), std::abs(r[1]));
      if (norm < threshold) g.hits.emplace_back(x, norm);
    }
  return g;
}

// ---------------------------------------------------------------------------
// Subset-sum reductions

/// v^T s = -1 over s in {+-1}^n, first hit in lexicographic order (+1 first).
inline std::optional<std::vector<int>> signed_sum_witness(const std::vector<std::uint64_t>& v) {
  const std::size_t n = v.size();
  if (n > 20) throw std::invalid_argument("signed_sum_witness: at most 20 entries");
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
    std::int64_t sum = 0;
    std::vector<int> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = ((k >> (n - 1 - i)) & 1u) ? -1 : 1;
      sum += s[i] * static_cast<std::int64_t>(v[i]);
    }
    if (sum == -1) return s;
  }
  return std::nullopt;
}

struct SubsetSumInstance {
  Matrix A;  // e v^T
  std::vector<std::uint64_t> v;
  /// Finite solution set for every b; equally, bounded for every b.
  bool expected_finiteness = true;
  bool expected_boundedness = true;
  std::optional<std::vector<int>> witness;
  /// Nontrivial solution of Ax + |x| = 0 (x = s, so |x| = e) when a witness exists.
  std::optional<Vector> homogeneous_solution;
};

/// A + D_s = e v^T + D_s is singular iff v^T s = -1, and then x = s solves
/// Ax + |x| = 0.
inline SubsetSumInstance subset_sum_instance(const std::vector<std::uint64_t>& v) {
  const std::size_t n = v.size();
  SubsetSumInstance out;
  out.v = v;
  out.A = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.A(i, j) = static_cast<double>(v[j]);
  out.witness = signed_sum_witness(v);
  if (out.witness) {
    out.expected_finiteness = out.expected_boundedness = false;
    out.homogeneous_solution = Vector(out.witness->begin(), out.witness->end());
  }
  return out;
}

struct ConvexityGadget {
  AveInstance inst;
  bool expected_convex = true;
  /// (x*, 1) and (x*, -1) when a witness x* exists.
  std::optional<Vector> point_plus, point_minus;
};

/// (e v^T) x + |x| = 0, v^T x + |y| = 0 in the variables (x, y).
inline ConvexityGadget convexity_gadget(const std::vector<std::uint64_t>& v) {
  const std::size_t n = v.size();
  Matrix a(n + 1, n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = static_cast<double>(v[j]);
  ConvexityGadget g{AveInstance(std::move(a), Vector(n + 1, 0.0)), true, std::nullopt, std::nullopt};
  if (auto s = signed_sum_witness(v)) {
    g.expected_convex = false;
    Vector p(s->begin(), s->end());
    p.push_back(1.0);
    Vector m = p;
    m.back() = -1.0;
    g.point_plus = std::move(p);
    g.point_minus = std::move(m);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Random generators

struct InverseNonnegInstance {
  AveInstance inst;
  Matrix N;
  double alpha = 0.0;
  std::size_t attempts = 0;
};

/// A = alpha I - N with N >= 0 random (density about one half, entries in
/// [0, 1)) and alpha in (1 + rho(N), 2 + rho(N)); b uniform in [-5, 5]^n.
/// Rejection-samples until both inverses of A - I and A + I are verified
/// nonnegative by the private elimination.
inline InverseNonnegInstance inverse_nonneg_generator(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("inverse_nonneg_generator: n must be positive");
  Rng rng(seed);
  for (std::size_t attempt = 1; attempt <= 1000; ++attempt) {
    Matrix nm(n, n);
    for (double& x : nm.data()) {
      const double keep = rng.unit();
      const double val = rng.unit();
      x = keep < 0.5 ? val : 0.0;
    }
    const double rho = linalg::spectral_radius_nonneg(nm);
    const double alpha = 1.0 + rho + rng.uniform(0.01, 1.0);
    Matrix a = Matrix::identity(n) * alpha - nm;
    Vector b = rng.vector(n, -5.0, 5.0);
    bool ok = true;
    for (double d : {-1.0, 1.0}) {
      auto inv = gauss_jordan_inverse(a + Matrix::identity(n) * d);
      ok = ok && inv && std::all_of(inv->data().begin(), inv->data().end(),
                                    [](double x) { return x >= -1e-12; });
    }
    if (ok) return {AveInstance(std::move(a), std::move(b)), std::move(nm), alpha, attempt};
  }
  throw std::runtime_error("inverse_nonneg_generator: no instance accepted");
}

/// Entries of A and b uniform in [lo, hi).
inline AveInstance random_instance(std::size_t n, std::uint64_t seed, double lo = -2.0,
                                   double hi = 2.0) {
  Rng rng(seed);
  Matrix a = rng.matrix(n, n, lo, hi);
  Vector b = rng.vector(n, lo, hi);
  return AveInstance(std::move(a), std::move(b));
}

}  // namespace ave::oracle
