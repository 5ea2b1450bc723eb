#pragma once

// Matrix-class predicates: unique solvability, nonnegativity classes,
// inverse nonnegativity of interval matrices, M-matrix and positive definite
// interval classes, and the finiteness / boundedness / convexity properties
// of the solution set over all right-hand sides.
//
// Exact tests enumerate sign vectors in lexicographic order (+1 first); the
// first witness found is the canonical certificate. Strict spectral and
// singular-value comparisons use kDecisionMargin and answer Unknown inside it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ave/core.hpp"
#include "ave/linalg.hpp"
#include "ave/lp.hpp"

namespace ave {

inline constexpr double kDecisionMargin = 1e-6;
/// Entrywise tolerance for "inverse is nonnegative".
inline constexpr double kInverseNonnegTol = 1e-10;
/// LU pivot ratios in (kSingularTol, kBorderlineTol] are too close to call.
inline constexpr double kBorderlineTol = 1e-8;
inline constexpr std::size_t kDefaultConvexityLimit = 6;

enum class Truth { True, False, Unknown };

inline const char* to_string(Truth t) {
  switch (t) {
    case Truth::True: return "true";
    case Truth::False: return "false";
    case Truth::Unknown: return "unknown";
  }
  return "?";
}

inline Truth truth(bool b) { return b ? Truth::True : Truth::False; }

/// value < threshold, decided with a margin.
inline Truth less_than(double value, double threshold, double margin = kDecisionMargin) {
  if (value < threshold - margin) return Truth::True;
  if (value > threshold + margin) return Truth::False;
  return Truth::Unknown;
}
inline Truth greater_than(double value, double threshold, double margin = kDecisionMargin) {
  return less_than(-value, -threshold, margin);
}

/// Named witnesses attached to a verdict.
struct Certificate {
  std::vector<std::pair<std::string, SignVector>> signs;
  std::vector<std::pair<std::string, Vector>> vectors;
  std::vector<std::pair<std::string, Matrix>> matrices;
  std::vector<std::pair<std::string, double>> scalars;

  bool empty() const noexcept {
    return signs.empty() && vectors.empty() && matrices.empty() && scalars.empty();
  }

  const SignVector* sign(const std::string& name) const { return find(signs, name); }
  const Vector* vector(const std::string& name) const { return find(vectors, name); }
  const Matrix* matrix(const std::string& name) const { return find(matrices, name); }
  const double* scalar(const std::string& name) const { return find(scalars, name); }

 private:
  template <typename T>
  static const T* find(const std::vector<std::pair<std::string, T>>& list, const std::string& key) {
    for (const auto& [k, v] : list)
      if (k == key) return &v;
    return nullptr;
  }
};

struct Verdict {
  Truth value = Truth::Unknown;
  std::string method;
  Certificate certificate;
  std::string note;

  bool is_true() const noexcept { return value == Truth::True; }
  bool is_false() const noexcept { return value == Truth::False; }
  bool is_unknown() const noexcept { return value == Truth::Unknown; }
};

using ClassificationReport = std::map<std::string, Verdict>;

struct IntervalMatrix {
  Matrix lo;
  Matrix hi;

  IntervalMatrix(Matrix l, Matrix h) : lo(std::move(l)), hi(std::move(h)) {
    if (!lo.square() || !hi.square() || lo.rows() != hi.rows())
      throw linalg::DimensionError("IntervalMatrix: bounds must be square and of equal size");
    for (std::size_t i = 0; i < lo.data().size(); ++i)
      if (lo.data()[i] > hi.data()[i])
        throw std::invalid_argument("IntervalMatrix: lo must not exceed hi");
  }
  /// [center - radius, center + radius].
  static IntervalMatrix around(const Matrix& center, const Matrix& radius) {
    return IntervalMatrix(center - radius, center + radius);
  }

  std::size_t n() const noexcept { return lo.rows(); }
  Matrix midpoint() const { return (lo + hi) * 0.5; }
  Matrix radius() const { return (hi - lo) * 0.5; }
  bool contains(const Matrix& m) const {
    for (std::size_t i = 0; i < lo.data().size(); ++i)
      if (m.data()[i] < lo.data()[i] || m.data()[i] > hi.data()[i]) return false;
    return true;
  }
};

namespace detail {

enum class Singularity { Singular, Borderline, Regular };

inline Singularity singularity(const linalg::LuDecomposition& lu) {
  if (lu.singular()) return Singularity::Singular;
  if (lu.min_pivot_ratio() <= kBorderlineTol) return Singularity::Borderline;
  return Singularity::Regular;
}

inline Verdict over_limit(std::size_t n, std::size_t limit, const char* method) {
  Verdict v;
  v.method = method;
  v.note = "dimension " + std::to_string(n) + " exceeds limit " + std::to_string(limit);
  return v;
}

inline bool inverse_nonneg(const Matrix& m, std::optional<Matrix>& inv) {
  inv = linalg::inverse(m);
  return inv && linalg::nonnegative(*inv, kInverseNonnegTol);
}

inline Matrix times_signs(const Matrix& a, const SignVector& s) {
  Matrix m = a;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= s[j];
  return m;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Unique solvability

/// Regularity of [A - I, A + I]: det(A + D_s) nonzero with one sign over all s.
inline Verdict unique_solvability_oracle(const Matrix& a,
                                         std::size_t enum_limit = kDefaultEnumLimit) {
  const std::size_t n = a.rows();
  if (n > enum_limit || n > 30) return detail::over_limit(n, enum_limit, "vertex-determinant");
  Verdict v;
  v.method = "vertex-determinant";
  std::optional<SignVector> borderline;
  std::optional<std::pair<SignVector, double>> first;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::uint64_t k = 0; k < orthant_count(n); ++k) {
    const SignVector s = SignVector::from_index(n, k);
    linalg::LuDecomposition lu(shifted(a, s));
    switch (detail::singularity(lu)) {
      case detail::Singularity::Singular:
        v.value = Truth::False;
        v.note = "A + D_s singular";
        v.certificate.signs.emplace_back("singular", s);
        return v;
      case detail::Singularity::Borderline:
        if (!borderline) borderline = s;
        continue;
      case detail::Singularity::Regular: break;
    }
    min_ratio = std::min(min_ratio, lu.min_pivot_ratio());
    const double d = lu.determinant();
    if (!first) {
      first.emplace(s, d);
    } else if ((d > 0) != (first->second > 0)) {
      v.value = Truth::False;
      v.note = "determinant changes sign";
      v.certificate.signs.emplace_back("first", first->first);
      v.certificate.signs.emplace_back("second", s);
      return v;
    }
  }
  if (borderline) {
    v.note = "A + D_s nearly singular";
    v.certificate.signs.emplace_back("borderline", *borderline);
    return v;
  }
  v.value = Truth::True;
  v.certificate.scalars.emplace_back("det_sign", first && first->second < 0 ? -1.0 : 1.0);
  v.certificate.scalars.emplace_back("min_pivot_ratio", min_ratio);
  return v;
}

/// Sufficient conditions for regularity of [A +- I], plus the exact
/// signature test for symmetric A.
inline ClassificationReport regularity_sufficient(const Matrix& a) {
  ClassificationReport r;
  const std::size_t n = a.rows();
  {
    Verdict v;
    v.method = "rho(|inv(A)|) < 1";
    if (auto inv = linalg::inverse(a)) {
      const double rho = linalg::spectral_radius_nonneg(linalg::abs(*inv));
      v.value = less_than(rho, 1.0);
      v.certificate.scalars.emplace_back("rho", rho);
    } else {
      v.value = Truth::False;
      v.note = "A singular";
    }
    r["rho_abs_inverse"] = v;
  }
  {
    Verdict v;
    v.method = "sigma_min(A) > 1";
    const double sigma = linalg::min_singular_value(a);
    v.value = greater_than(sigma, 1.0);
    v.certificate.scalars.emplace_back("sigma_min", sigma);
    r["sigma_min"] = v;
  }
  {
    Verdict v;
    v.method = "signature(A - I) == signature(A + I)";
    if (!linalg::is_symmetric(a)) {
      v.note = "not applicable: A not symmetric";
    } else {
      // [A +- I] is regular iff no eigenvalue of A lies in [-1, 1].
      const Matrix id = Matrix::identity(n);
      const double tol = 1e-9 * std::max(1.0, linalg::norm_inf(a));
      const auto sp = linalg::signature(a + id, tol);
      const auto sm = linalg::signature(a - id, tol);
      double gap = std::numeric_limits<double>::infinity();  // min |lambda| - 1
      for (double lam : linalg::sym_eigenvalues(a)) gap = std::min(gap, std::abs(lam) - 1.0);
      v.certificate.scalars = {{"plus_pos", double(sp.n_pos)},  {"plus_neg", double(sp.n_neg)},
                               {"plus_zero", double(sp.n_zero)}, {"minus_pos", double(sm.n_pos)},
                               {"minus_neg", double(sm.n_neg)},  {"minus_zero", double(sm.n_zero)},
                               {"min_abs_eigenvalue_minus_1", gap}};
      const bool same = sp.n_pos == sm.n_pos && sp.n_neg == sm.n_neg && sp.n_zero == sm.n_zero;
      if (std::abs(gap) > kDecisionMargin) {
        v.value = truth(same && gap > 0);
      } else if (linalg::is_singular(a + id) || linalg::is_singular(a - id)) {
        v.value = Truth::False;
        v.note = "A + I or A - I singular";
      }
    }
    r["symmetric_signature"] = v;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Nonnegative solutions and orthant shortcuts for b >= 0

inline Verdict nonneg_unique_solvability(const Matrix& a) {
  Verdict v;
  v.method = "inv(A + I) >= 0";
  std::optional<Matrix> inv;
  v.value = truth(detail::inverse_nonneg(a + Matrix::identity(a.rows()), inv));
  if (inv)
    v.certificate.matrices.emplace_back("inverse", *inv);
  else
    v.note = "A + I singular";
  return v;
}

namespace detail {

/// A = u v^T when A has numerical rank one (relative tolerance 1e-8).
inline std::optional<std::pair<Vector, Vector>> rank_one_factors(const Matrix& a) {
  const std::size_t n = a.rows();
  const double big = linalg::max_abs_entry(a);
  if (big == 0.0) return std::nullopt;
  std::size_t p = 0, q = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (std::abs(a(i, j)) == big) {
        p = i;
        q = j;
        i = n;
        break;
      }
  Vector u = a.column(q), w(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) w[j] = a(p, j) / a(p, q);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (std::abs(a(i, j) - u[i] * w[j]) > 1e-8 * big) return std::nullopt;
  return std::make_pair(std::move(u), std::move(w));
}

/// inv(I + u w^T) = I - u w^T / (1 + w^T u); nullopt when 1 + w^T u ~ 0.
inline std::optional<Matrix> sherman_morrison_identity(const Vector& u, const Vector& w) {
  const double c = 1.0 + linalg::dot(u, w);
  const double scale = 1.0 + std::abs(linalg::dot(linalg::abs(u), linalg::abs(w)));
  if (std::abs(c) <= linalg::kSingularTol * scale) return std::nullopt;
  Matrix m = Matrix::identity(u.size()) - Matrix::outer(u, w) * (1.0 / c);
  return m;
}

/// Sign vectors that can make inv(A D_s + I) >= 0 when A = u v^T.
/// Off-diagonal entries -u_i s_j v_j / c must be >= 0, which pins s_j for each
/// sign of c = 1 + sum_k u_k s_k v_k unless u vanishes off position j.
inline std::vector<SignVector> rank_one_candidates(const Vector& u, const Vector& v) {
  const std::size_t n = u.size();
  const double tol = 1e-12 * std::max(linalg::norm_inf(u), 1e-300);
  std::vector<SignVector> out;
  for (int sigma : {1, -1}) {
    std::vector<int> s(n, 1);
    std::vector<std::size_t> free;
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) {
      if (v[j] == 0.0) continue;
      bool pos = false, neg = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == j) continue;
        pos = pos || u[i] > tol;
        neg = neg || u[i] < -tol;
      }
      const int sv = v[j] > 0 ? 1 : -1;
      if (pos && neg) ok = false;
      else if (pos) s[j] = -sv * sigma;
      else if (neg) s[j] = sv * sigma;
      else free.push_back(j);
    }
    if (!ok || free.size() > 16) continue;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << free.size()); ++m) {
      for (std::size_t f = 0; f < free.size(); ++f) s[free[f]] = ((m >> f) & 1u) ? -1 : 1;
      SignVector cand(s);
      if (std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(std::move(cand));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const SignVector& x, const SignVector& y) { return x.index() < y.index(); });
  return out;
}

}  // namespace detail

/// Searches s with inv(A D_s + I) >= 0 (then Ax + |x| = b is solvable for all
/// b >= 0, with a solution in orthant s).
inline Verdict orthant_solvability_search(const Matrix& a,
                                          std::size_t enum_limit = kDefaultEnumLimit) {
  const std::size_t n = a.rows();
  Verdict v;
  if (auto uv = detail::rank_one_factors(a)) {
    v.method = "rank-one Sherman-Morrison";
    const auto& [u, w] = *uv;
    for (const SignVector& s : detail::rank_one_candidates(u, w)) {
      Vector ws(n);
      for (std::size_t j = 0; j < n; ++j) ws[j] = w[j] * s[j];
      auto inv = detail::sherman_morrison_identity(u, ws);
      if (inv && linalg::nonnegative(*inv, kInverseNonnegTol)) {
        v.value = Truth::True;
        v.certificate.signs.emplace_back("s", s);
        v.certificate.matrices.emplace_back("inverse", *inv);
        return v;
      }
    }
    v.value = Truth::False;
    return v;
  }
  if (n > enum_limit || n > 30) return detail::over_limit(n, enum_limit, "orthant search");
  v.method = "orthant search";
  const Matrix id = Matrix::identity(n);
  for (std::uint64_t k = 0; k < orthant_count(n); ++k) {
    const SignVector s = SignVector::from_index(n, k);
    std::optional<Matrix> inv;
    if (detail::inverse_nonneg(detail::times_signs(a, s) + id, inv)) {
      v.value = Truth::True;
      v.certificate.signs.emplace_back("s", s);
      v.certificate.matrices.emplace_back("inverse", *inv);
      return v;
    }
  }
  v.value = Truth::False;
  return v;
}

/// rho(A) < 1 together with A D_s <= 0 for some s.
inline Verdict rho_sign_condition(const Matrix& a) {
  const std::size_t n = a.rows();
  Verdict v;
  v.method = "rho(A) < 1 and A D_s <= 0";
  std::vector<int> s(n, 1);
  for (std::size_t j = 0; j < n; ++j) {
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < n; ++i) {
      pos = pos || a(i, j) > 0;
      neg = neg || a(i, j) < 0;
    }
    if (pos && neg) {
      v.value = Truth::False;
      v.note = "column " + std::to_string(j) + " has mixed signs";
      return v;
    }
    if (pos) s[j] = -1;
  }
  const double rho = linalg::spectral_radius_general(a);
  v.value = less_than(rho, 1.0);
  v.certificate.signs.emplace_back("s", SignVector(s));
  v.certificate.scalars.emplace_back("rho", rho);
  v.certificate.scalars.emplace_back("a_nonpositive", linalg::nonnegative(-a) ? 1.0 : 0.0);
  return v;
}

// ---------------------------------------------------------------------------
// Interval matrix classes

/// Inverse nonnegativity of [lo, hi]: both bounds nonsingular with
/// nonnegative inverses.
inline Verdict inverse_nonneg_interval(const IntervalMatrix& m) {
  Verdict v;
  v.method = "bound inverses >= 0";
  std::optional<Matrix> lo_inv, hi_inv;
  const bool lo_ok = detail::inverse_nonneg(m.lo, lo_inv);
  const bool hi_ok = detail::inverse_nonneg(m.hi, hi_inv);
  if (lo_inv) v.certificate.matrices.emplace_back("lo_inverse", *lo_inv);
  if (hi_inv) v.certificate.matrices.emplace_back("hi_inverse", *hi_inv);
  v.value = truth(lo_ok && hi_ok);
  if (!lo_ok) v.note = lo_inv ? "lo inverse has a negative entry" : "lo singular";
  else if (!hi_ok) v.note = hi_inv ? "hi inverse has a negative entry" : "hi singular";
  return v;
}

/// One-sided variant: a regular interval matrix whose upper bound has a
/// nonnegative inverse is inverse nonnegative.
inline Verdict inverse_nonneg_interval(const IntervalMatrix& m, const Verdict& regular) {
  Verdict v;
  v.method = "regular and inv(hi) >= 0";
  std::optional<Matrix> hi_inv;
  const bool hi_ok = detail::inverse_nonneg(m.hi, hi_inv);
  if (hi_inv) v.certificate.matrices.emplace_back("hi_inverse", *hi_inv);
  if (regular.is_false()) {
    v.value = Truth::False;
    v.note = "interval matrix not regular";
  } else if (!hi_ok) {
    v.value = Truth::False;
    v.note = hi_inv ? "hi inverse has a negative entry" : "hi singular";
  } else if (regular.is_true()) {
    v.value = Truth::True;
  }
  return v;
}

inline Verdict interval_m_matrix(const IntervalMatrix& m) {
  Verdict v;
  v.method = "lo M-matrix, hi off-diagonal <= 0";
  if (!linalg::is_z_matrix(m.lo)) {
    v.value = Truth::False;
    v.note = "lo has a positive off-diagonal entry";
    return v;
  }
  if (!linalg::is_z_matrix(m.hi)) {
    v.value = Truth::False;
    v.note = "hi has a positive off-diagonal entry";
    return v;
  }
  std::optional<Matrix> inv;
  v.value = truth(detail::inverse_nonneg(m.lo, inv));
  if (inv) v.certificate.matrices.emplace_back("lo_inverse", *inv);
  if (!v.is_true()) v.note = inv ? "lo inverse has a negative entry" : "lo singular";
  return v;
}

/// Positive definiteness of [A - ee^T, A + ee^T] for symmetric A. Every
/// symmetric member is A + R with |R| <= ee^T, and x^T R x >= -(e^T|x|)^2,
/// attained at R = -zz^T with z = sgn(x); so the class is PD iff A - zz^T is
/// PD for all z in {+-1}^n (z and -z give the same matrix).
inline Verdict interval_pd_rank1(const Matrix& a, std::size_t enum_limit = kDefaultEnumLimit) {
  if (!a.square() || !linalg::is_symmetric(a))
    throw std::invalid_argument("interval_pd_rank1: A must be symmetric");
  const std::size_t n = a.rows();
  Verdict v;
  const double lmin = linalg::lambda_min(a);
  if (lmin > static_cast<double>(n) + kDecisionMargin) {
    v.value = Truth::True;
    v.method = "lambda_min(A) > n";
    v.certificate.scalars.emplace_back("lambda_min", lmin);
    return v;
  }
  if (n == 0) {
    v.value = Truth::True;
    v.method = "empty";
    return v;
  }
  if (n > enum_limit || n > 30) return detail::over_limit(n, enum_limit, "vertex z z^T");
  v.method = "vertex z z^T";
  std::optional<SignVector> borderline;
  double worst = std::numeric_limits<double>::infinity();
  for (std::uint64_t k = 0; k < orthant_count(n - 1); ++k) {
    const SignVector z = SignVector::from_index(n, k);  // z_0 = +1
    const Vector zv = z.as_vector();
    const double l = linalg::lambda_min(a - Matrix::outer(zv, zv));
    worst = std::min(worst, l);
    if (l < -kDecisionMargin) {
      v.value = Truth::False;
      v.certificate.signs.emplace_back("z", z);
      v.certificate.scalars.emplace_back("lambda_min", l);
      return v;
    }
    if (l <= kDecisionMargin && !borderline) borderline = z;
  }
  if (borderline) {
    v.note = "A - zz^T nearly singular";
    v.certificate.signs.emplace_back("z", *borderline);
  } else {
    v.value = Truth::True;
  }
  v.certificate.scalars.emplace_back("lambda_min", worst);
  return v;
}

// ---------------------------------------------------------------------------
// Properties over all right-hand sides

/// Solution set finite for every b iff A + D_s is nonsingular for all s.
inline Verdict finiteness_all_b(const Matrix& a, std::size_t enum_limit = kDefaultEnumLimit) {
  const std::size_t n = a.rows();
  if (n > enum_limit || n > 30) return detail::over_limit(n, enum_limit, "vertex nonsingularity");
  Verdict v;
  v.method = "vertex nonsingularity";
  std::optional<SignVector> borderline;
  for (std::uint64_t k = 0; k < orthant_count(n); ++k) {
    const SignVector s = SignVector::from_index(n, k);
    linalg::LuDecomposition lu(shifted(a, s));
    const auto kind = detail::singularity(lu);
    if (kind == detail::Singularity::Singular) {
      v.value = Truth::False;
      v.certificate.signs.emplace_back("singular", s);
      return v;
    }
    if (kind == detail::Singularity::Borderline && !borderline) borderline = s;
  }
  if (borderline) {
    v.note = "A + D_s nearly singular";
    v.certificate.signs.emplace_back("borderline", *borderline);
  } else {
    v.value = Truth::True;
  }
  return v;
}

/// Sufficient finiteness conditions with the quantities they compare.
/// C defaults to the identity.
inline ClassificationReport finiteness_sufficient(const Matrix& a,
                                                  const std::optional<Matrix>& c = std::nullopt) {
  const std::size_t n = a.rows();
  const Matrix id = Matrix::identity(n);
  const Matrix cm = c.value_or(id);
  if (!cm.square() || cm.rows() != n)
    throw linalg::DimensionError("finiteness_sufficient: C must match A");
  ClassificationReport r;
  const Matrix abs_a = linalg::abs(a);
  {
    const Matrix sym = abs_a + abs_a.transpose();
    const double rho = n ? linalg::lambda_max(sym) : 0.0;  // symmetric and nonnegative
    const double lam = n ? linalg::lambda_min(a.transpose() * a) : 0.0;
    Verdict v;
    v.method = "rho(|A| + |A|^T) < 1 + lambda_min(A^T A)";
    v.value = less_than(rho - lam, 1.0);
    v.certificate.scalars = {{"rho", rho}, {"lambda_min", lam}};
    r["rho_sym_abs"] = v;
  }
  {
    const double s = linalg::spectral_norm(a);
    Verdict v;
    v.method = "||A||_2 < 1/2";
    v.value = less_than(s, 0.5);
    v.certificate.scalars.emplace_back("norm2", s);
    r["spectral_norm"] = v;
  }
  {
    const double rho = linalg::spectral_radius_nonneg(abs_a);
    Verdict v;
    v.method = "rho(|A|) < 1";
    v.value = less_than(rho, 1.0);
    v.certificate.scalars.emplace_back("rho", rho);
    r["rho_abs"] = v;
  }
  {
    const double rho = linalg::spectral_radius_nonneg(linalg::abs(cm * a) + linalg::abs(id - cm));
    Verdict v;
    v.method = "rho(|CA| + |I - C|) < 1";
    v.value = less_than(rho, 1.0);
    v.certificate.scalars.emplace_back("rho", rho);
    if (c) v.certificate.matrices.emplace_back("C", cm);
    r["rho_preconditioned"] = v;
  }
  return r;
}

/// Solution set bounded for every b iff Ax + |x| = 0 only has x = 0.
inline Verdict boundedness_all_b(const Matrix& a, std::size_t enum_limit = kDefaultEnumLimit) {
  const std::size_t n = a.rows();
  if (n > enum_limit || n > 30) return detail::over_limit(n, enum_limit, "homogeneous orthant LP");
  Verdict v;
  v.method = "homogeneous orthant LP";
  for (std::uint64_t k = 0; k < orthant_count(n); ++k) {
    const SignVector s = SignVector::from_index(n, k);
    const Matrix m = shifted(a, s);
    if (!linalg::is_singular(m)) continue;
    lp::LinearProgram prog(n);
    Vector norm(n);
    for (std::size_t i = 0; i < n; ++i) {
      prog.add(Vector(m.row(i).begin(), m.row(i).end()), lp::Relation::Equal, 0.0);
      if (s[i] > 0) prog.set_lower(i, 0.0);
      else prog.set_upper(i, 0.0);
      norm[i] = s[i];
    }
    prog.add(norm, lp::Relation::Equal, 1.0);
    if (auto x = lp::feasible(prog)) {
      detail::clean_zeros(*x, 1e-13);
      v.value = Truth::False;
      v.certificate.signs.emplace_back("s", s);
      v.certificate.vectors.emplace_back("x", *x);
      return v;
    }
  }
  v.value = Truth::True;
  return v;
}

/// Solution set convex for every b. Looks for x1, x2 with
/// Ax1 + |x1| = Ax2 + |x2| and x1_i x2_i < 0 for some i; strict signs are
/// normalized to s_i x_i >= 1 since the system is positively homogeneous.
inline Verdict convexity_all_b(const Matrix& a,
                               std::size_t convexity_limit = kDefaultConvexityLimit) {
  const std::size_t n = a.rows();
  if (n > convexity_limit || n > 15)
    return detail::over_limit(n, convexity_limit, "orthant pair LP");
  Verdict v;
  v.method = "orthant pair LP";
  const auto total = orthant_count(n);
  for (std::uint64_t k1 = 0; k1 < total; ++k1) {
    const SignVector s1 = SignVector::from_index(n, k1);
    const Matrix m1 = shifted(a, s1);
    for (std::uint64_t k2 = k1 + 1; k2 < total; ++k2) {
      const SignVector s2 = SignVector::from_index(n, k2);
      const Matrix m2 = shifted(a, s2);
      for (std::size_t i = 0; i < n; ++i) {
        if (s1[i] == s2[i]) continue;
        lp::LinearProgram prog(2 * n);
        for (std::size_t r = 0; r < n; ++r) {
          Vector row(2 * n);
          for (std::size_t j = 0; j < n; ++j) {
            row[j] = m1(r, j);
            row[n + j] = -m2(r, j);
          }
          prog.add(std::move(row), lp::Relation::Equal, 0.0);
        }
        for (std::size_t j = 0; j < n; ++j) {
          const double b1 = j == i ? 1.0 : 0.0;
          if (s1[j] > 0) prog.set_lower(j, b1);
          else prog.set_upper(j, -b1);
          if (s2[j] > 0) prog.set_lower(n + j, b1);
          else prog.set_upper(n + j, -b1);
        }
        if (auto z = lp::feasible(prog)) {
          Vector x1(z->begin(), z->begin() + static_cast<std::ptrdiff_t>(n));
          Vector x2(z->begin() + static_cast<std::ptrdiff_t>(n), z->end());
          detail::clean_zeros(x1, 1e-13);
          detail::clean_zeros(x2, 1e-13);
          Vector bstar = linalg::add(a * x1, linalg::abs(x1));
          detail::clean_zeros(bstar, 1e-12);
          v.value = Truth::False;
          v.certificate.signs.emplace_back("s1", s1);
          v.certificate.signs.emplace_back("s2", s2);
          v.certificate.vectors.emplace_back("x1", std::move(x1));
          v.certificate.vectors.emplace_back("x2", std::move(x2));
          v.certificate.vectors.emplace_back("b", std::move(bstar));
          v.certificate.scalars.emplace_back("i", static_cast<double>(i));
          return v;
        }
      }
    }
  }
  v.value = Truth::True;
  return v;
}

}  // namespace ave
