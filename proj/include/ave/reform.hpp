#pragma once

// Optimization reformulations of Ax + |x| = b.
//
// The feasibility system (A + I)x <= b, (A - I)x <= b describes exactly
// Ax + |x| <= b. Over it: three objectives whose optimal value is 0 iff the
// equation is solvable, the greatest-element LP for Z-matrices, the KKT
// analysis of the bilinear form min x^T y s.t. (A+I)x - (A-I)y = b, x, y >= 0,
// and the auxiliary LP min e^T(b - (A + D)x) with the condition that makes
// its optimum a solution for every b.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ave/classify.hpp"
#include "ave/core.hpp"
#include "ave/linalg.hpp"
#include "ave/lp.hpp"
#include "ave/random.hpp"

namespace ave {

struct FeasibilitySystem {
  std::size_t n = 0;
  /// Rows of (A + I)x <= b followed by rows of (A - I)x <= b.
  std::vector<lp::LinearConstraint> constraints;

  bool satisfied_by(std::span<const double> x, double tol = 1e-9) const {
    for (const auto& c : constraints)
      if (linalg::dot(c.coefficients, x) > c.rhs + tol) return false;
    return true;
  }
};

inline FeasibilitySystem feasibility_constraints(const AveInstance& inst) {
  inst.validate();
  const std::size_t n = inst.n();
  FeasibilitySystem sys;
  sys.n = n;
  for (double d : {1.0, -1.0})
    for (std::size_t i = 0; i < n; ++i) {
      Vector row(inst.A.row(i).begin(), inst.A.row(i).end());
      row[i] += d;
      sys.constraints.push_back({std::move(row), lp::Relation::LessEqual, inst.b[i]});
    }
  return sys;
}

namespace detail {

inline lp::LinearProgram program_over(const FeasibilitySystem& sys) {
  lp::LinearProgram prog(sys.n);
  prog.constraints = sys.constraints;
  return prog;
}

inline double feasibility_tol(const AveInstance& inst) {
  return 1e-9 * std::max(1.0, linalg::norm_inf(inst.b));
}

}  // namespace detail

enum class Objective { Sum, AbsSquare, PlusMinus };

/// e^T r, r^T r, or (b - Ax - x)^T (b - Ax + x), where r = b - Ax - |x|.
/// Throws std::invalid_argument if x violates the feasibility system.
inline double objective_eval(Objective which, const AveInstance& inst, std::span<const double> x) {
  if (x.size() != inst.n()) throw linalg::DimensionError("objective_eval: x length differs from n");
  if (!feasibility_constraints(inst).satisfied_by(x, detail::feasibility_tol(inst)))
    throw std::invalid_argument("objective_eval: x is not feasible");
  const Vector ax = inst.A * x;
  const std::size_t n = inst.n();
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double base = inst.b[i] - ax[i];
    switch (which) {
      case Objective::Sum: value += base - std::abs(x[i]); break;
      case Objective::AbsSquare: {
        const double r = base - std::abs(x[i]);
        value += r * r;
        break;
      }
      case Objective::PlusMinus: value += (base - x[i]) * (base + x[i]); break;
    }
  }
  return value;
}

/// Ax + |x| <= b is solvable for every b iff Ax + |x| < 0 is solvable, i.e.
/// (A + I)x <= -e and (A - I)x <= -e.
inline Verdict feasible_for_all_b(const Matrix& a) {
  const std::size_t n = a.rows();
  Verdict v;
  v.method = "(A +- I)x <= -e";
  const auto sys = feasibility_constraints(AveInstance(a, Vector(n, -1.0)));
  if (auto x = lp::feasible(detail::program_over(sys))) {
    detail::clean_zeros(*x, 1e-13);
    v.value = Truth::True;
    v.certificate.vectors.emplace_back("x", *x);
  } else {
    v.value = Truth::False;
  }
  return v;
}

/// For a Z-matrix A with A + I an M-matrix the feasible set has a greatest
/// element, the unique maximizer of p^T x for any p > 0, and it solves the
/// equation.
inline Vector greatest_element_solve(const AveInstance& inst, std::span<const double> p) {
  inst.validate();
  const std::size_t n = inst.n();
  if (p.size() != n) throw linalg::DimensionError("greatest_element_solve: p length differs from n");
  for (double pi : p)
    if (!(pi > 0.0)) throw std::invalid_argument("greatest_element_solve: p must be positive");
  if (!linalg::is_z_matrix(inst.A))
    throw std::invalid_argument("greatest_element_solve: A is not a Z-matrix");
  const IntervalMatrix ai(inst.A + Matrix::identity(n), inst.A + Matrix::identity(n));
  if (!interval_m_matrix(ai).is_true())
    throw std::invalid_argument("greatest_element_solve: A + I is not an M-matrix");
  lp::LinearProgram prog = detail::program_over(feasibility_constraints(inst));
  prog.sense = lp::Sense::Maximize;
  prog.objective.assign(p.begin(), p.end());
  const auto out = lp::solve(prog);
  if (out.status == lp::Status::Infeasible)
    throw std::domain_error("greatest_element_solve: feasible set is empty");
  if (out.status == lp::Status::Unbounded)
    throw std::domain_error("greatest_element_solve: objective unbounded");
  Vector x = out.point;
  detail::clean_zeros(x, 1e-13 * std::max(1.0, linalg::norm_inf(x)));
  if (!is_solution(inst, x)) throw std::runtime_error("greatest_element_solve: optimum is not a solution");
  return x;
}

/// Three equivalent statements for a Z-matrix A:
///   (1) A + I is an M-matrix,
///   (2) the feasible set is nonempty and bounded above for every b >= 0,
///   (3) the same holds for at least one b.
/// (2) and (3) are probed at b = 0, b = e and random right-hand sides.
/// Bounded above is tested through max e^T x, which suffices for Z-matrices
/// because the feasible set is closed under componentwise maximum.
inline ClassificationReport m_matrix_equivalence(const Matrix& a, std::size_t probe_count = 20,
                                                 std::uint64_t seed = 1) {
  const std::size_t n = a.rows();
  ClassificationReport r;
  const bool z = linalg::is_z_matrix(a);
  {
    Verdict v = interval_m_matrix(IntervalMatrix(a + Matrix::identity(n), a + Matrix::identity(n)));
    v.method = "A + I is an M-matrix";
    r["statement1"] = v;
  }
  auto bounded_feasible = [&](const Vector& b) {
    lp::LinearProgram prog = detail::program_over(feasibility_constraints(AveInstance(a, b)));
    prog.sense = lp::Sense::Maximize;
    prog.objective.assign(n, 1.0);
    return lp::solve(prog).status == lp::Status::Optimal;
  };
  Rng rng(seed);
  std::vector<Vector> nonneg{Vector(n, 0.0), Vector(n, 1.0)};
  for (std::size_t k = 0; k < probe_count; ++k) nonneg.push_back(rng.vector(n, 0.0, 5.0));
  std::vector<Vector> general;
  for (std::size_t k = 0; k < probe_count; ++k) general.push_back(rng.vector(n, -5.0, 5.0));

  Verdict s2;
  s2.method = "probe b >= 0";
  s2.value = Truth::True;
  for (const auto& b : nonneg)
    if (!bounded_feasible(b)) {
      s2.value = Truth::False;
      s2.certificate.vectors.emplace_back("b", b);
      break;
    }
  Verdict s3;
  s3.method = "probe any b";
  s3.value = Truth::False;
  for (const auto* set : {&nonneg, &general}) {
    for (const auto& b : *set)
      if (bounded_feasible(b)) {
        s3.value = Truth::True;
        s3.certificate.vectors.emplace_back("b", b);
        break;
      }
    if (s3.is_true()) break;
  }
  if (!z) {
    s2.note = s3.note = "A is not a Z-matrix; equivalence not claimed";
  }
  Verdict agree;
  agree.method = "statements coincide";
  agree.value = truth(r["statement1"].value == s2.value && s2.value == s3.value);
  if (!z) agree.note = "A is not a Z-matrix";
  r["statement2"] = s2;
  r["statement3"] = s3;
  r["agree"] = agree;
  return r;
}

// ---------------------------------------------------------------------------
// KKT points of the bilinear form

/// Solvability of |u| >= |A^T u| with strict inequality somewhere. Each KKT
/// point of the bilinear form yields a solution for every b iff this fails.
/// Verdict true means the system is feasible; the witness is "u".
inline Verdict kkt_gap_feasible(const Matrix& a, std::size_t enum_limit = kDefaultEnumLimit) {
  const std::size_t n = a.rows();
  if (n > enum_limit || n > 30) return detail::over_limit(n, enum_limit, "sign-split LP");
  Verdict v;
  v.method = "sign-split LP";
  const Matrix at = a.transpose();
  for (std::uint64_t k = 0; k < orthant_count(n); ++k) {
    const SignVector t = SignVector::from_index(n, k);
    for (std::size_t i = 0; i < n; ++i) {
      lp::LinearProgram prog(n);
      for (std::size_t j = 0; j < n; ++j) {
        if (t[j] > 0) prog.set_lower(j, 0.0);
        else prog.set_upper(j, 0.0);
      }
      for (std::size_t r = 0; r < n; ++r) {
        const double rhs = r == i ? 1.0 : 0.0;
        for (double sg : {1.0, -1.0}) {
          // (D_t u - sg * A^T u)_r >= rhs
          Vector row(n);
          for (std::size_t j = 0; j < n; ++j) row[j] = -sg * at(r, j);
          row[r] += t[r];
          prog.add(std::move(row), lp::Relation::GreaterEqual, rhs);
        }
      }
      if (auto u = lp::feasible(prog)) {
        detail::clean_zeros(*u, 1e-13);
        v.value = Truth::True;
        v.certificate.signs.emplace_back("t", t);
        v.certificate.vectors.emplace_back("u", *u);
        v.certificate.scalars.emplace_back("i", static_cast<double>(i));
        return v;
      }
    }
  }
  v.value = Truth::False;
  return v;
}

struct KktCertificate {
  Vector u;  // after the sign normalization
  Vector x_star, y_star, v, w, b;
  std::size_t strict_index = 0;
  bool flipped = false;  // u was negated so that -u_i > |A^T u|_i
};

/// Builds a KKT point of the bilinear form that yields no solution, from a
/// witness u of the strict system. Throws std::invalid_argument when u is
/// not a witness or the constructed point fails validation.
inline KktCertificate kkt_expand(const Matrix& a, std::span<const double> u_in) {
  const std::size_t n = a.rows();
  if (u_in.size() != n) throw linalg::DimensionError("kkt_expand: u length differs from n");
  Vector u(u_in.begin(), u_in.end());
  const Matrix at = a.transpose();
  Vector atu = at * u;
  const double scale = std::max(1.0, linalg::norm_inf(u));
  const double tol = 1e-9 * scale;
  std::optional<std::size_t> strict;
  for (std::size_t i = 0; i < n; ++i) {
    const double gap = std::abs(u[i]) - std::abs(atu[i]);
    if (gap < -tol) throw std::invalid_argument("kkt_expand: |u| >= |A^T u| violated");
    if (gap > tol && !strict) strict = i;
  }
  if (!strict) throw std::invalid_argument("kkt_expand: no strict coordinate");

  KktCertificate c;
  c.strict_index = *strict;
  if (u[*strict] > 0) {
    for (double& x : u) x = -x;
    for (double& x : atu) x = -x;
    c.flipped = true;
  }
  c.u = u;
  c.y_star.resize(n);
  c.v.resize(n);
  c.x_star.resize(n);
  c.w.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double plus = atu[j] + u[j];   // ((A + I)^T u)_j
    const double minus = atu[j] - u[j];  // ((A - I)^T u)_j
    c.y_star[j] = std::max(0.0, -plus);
    c.v[j] = c.y_star[j] + plus;
    c.x_star[j] = std::max(0.0, minus);
    c.w[j] = c.x_star[j] - minus;
  }
  const Matrix id = Matrix::identity(n);
  c.b = linalg::sub((a + id) * c.x_star, (a - id) * c.y_star);

  const double ctol = 1e-8 * scale;
  for (const Vector* z : {&c.x_star, &c.y_star, &c.v, &c.w})
    if (!linalg::nonnegative(*z, 1e-9 * scale))
      throw std::invalid_argument("kkt_expand: sign condition violated");
  if (std::abs(linalg::dot(c.v, c.x_star)) > ctol || std::abs(linalg::dot(c.w, c.y_star)) > ctol)
    throw std::invalid_argument("kkt_expand: complementarity violated");
  const Vector st1 = linalg::sub(linalg::add(c.y_star, (a + id).transpose() * u), c.v);
  const Vector st2 = linalg::sub(linalg::sub(c.x_star, (a - id).transpose() * u), c.w);
  if (linalg::norm_inf(st1) > ctol || linalg::norm_inf(st2) > ctol)
    throw std::invalid_argument("kkt_expand: stationarity violated");
  if (!(linalg::dot(c.x_star, c.y_star) > 0.0))
    throw std::invalid_argument("kkt_expand: KKT point yields a solution");
  return c;
}

// ---------------------------------------------------------------------------
// Auxiliary LP and its condition

/// min e^T (b - (A + D)x) over the feasibility system, for diagonal D given
/// by its diagonal d with |d_i| = 1. The reported value includes e^T b.
inline lp::LpOutcome aux_lp_solve(const AveInstance& inst, std::span<const double> d) {
  inst.validate();
  const std::size_t n = inst.n();
  if (d.size() != n) throw linalg::DimensionError("aux_lp_solve: D size differs from n");
  for (double di : d)
    if (std::abs(di) != 1.0) throw std::invalid_argument("aux_lp_solve: |D| must be I");
  lp::LinearProgram prog = detail::program_over(feasibility_constraints(inst));
  const Matrix ad = shifted(inst.A, d);
  double eb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    eb += inst.b[i];
    for (std::size_t j = 0; j < n; ++j) prog.objective[j] -= ad(i, j);
  }
  auto out = lp::solve(prog);
  if (out.status == lp::Status::Optimal) {
    out.value += eb;
    detail::clean_zeros(out.point, 1e-13 * std::max(1.0, linalg::norm_inf(out.point)));
  }
  return out;
}

inline lp::LpOutcome aux_lp_solve(const AveInstance& inst, const SignVector& d) {
  const Vector dv = d.as_vector();
  return aux_lp_solve(inst, std::span<const double>(dv));
}

/// For every vertex D (|D| = I) and every i, the system
/// (Ax + |x|)_j <= 0 (j != i), e^T (A + D)x > 0 must be solvable.
/// Strictness is normalized to >= 1. On failure the certificate carries D
/// and i.
inline Verdict aux_lp_condition_check(const Matrix& a, std::size_t enum_limit = kDefaultEnumLimit) {
  const std::size_t n = a.rows();
  if (n > enum_limit || n > 30) return detail::over_limit(n, enum_limit, "orthant LP per (D, i)");
  Verdict v;
  v.method = "orthant LP per (D, i)";
  const auto total = orthant_count(n);
  for (std::uint64_t kd = 0; kd < total; ++kd) {
    const SignVector dsv = SignVector::from_index(n, kd);
    const Matrix ad = shifted(a, dsv);
    Vector col_sum(n, 0.0);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t j = 0; j < n; ++j) col_sum[j] += ad(r, j);
    for (std::size_t i = 0; i < n; ++i) {
      bool found = false;
      for (std::uint64_t ks = 0; ks < total && !found; ++ks) {
        const SignVector s = SignVector::from_index(n, ks);
        const Matrix as = shifted(a, s);
        lp::LinearProgram prog(n);
        for (std::size_t j = 0; j < n; ++j) {
          if (s[j] > 0) prog.set_lower(j, 0.0);
          else prog.set_upper(j, 0.0);
        }
        for (std::size_t r = 0; r < n; ++r)
          if (r != i) prog.add(Vector(as.row(r).begin(), as.row(r).end()), lp::Relation::LessEqual, 0.0);
        prog.add(col_sum, lp::Relation::GreaterEqual, 1.0);
        found = lp::feasible(prog).has_value();
      }
      if (!found) {
        v.value = Truth::False;
        v.certificate.signs.emplace_back("D", dsv);
        v.certificate.scalars.emplace_back("i", static_cast<double>(i));
        return v;
      }
    }
  }
  v.value = Truth::True;
  return v;
}

/// Sufficient conditions for the auxiliary LP condition: [A +- ee^T] positive definite,
/// the same for -A and for column-sign-flipped copies A D_s, and
/// [A +- (2ee^T - I)] an M-matrix. The positive definite and M-matrix
/// conditions are stated for symmetric A and are not applied otherwise.
inline ClassificationReport aux_lp_condition_sufficient(const Matrix& a,
                                                   std::size_t enum_limit = kDefaultEnumLimit) {
  const std::size_t n = a.rows();
  ClassificationReport r;
  const bool sym = linalg::is_symmetric(a);
  auto na = [](const char* method) {
    Verdict v;
    v.method = method;
    v.note = "not applicable: A not symmetric";
    return v;
  };
  if (sym) {
    r["pd_interval"] = interval_pd_rank1(a, enum_limit);
    r["pd_interval_negated"] = interval_pd_rank1(-a, enum_limit);
    const Matrix radius = Matrix::ones(n, n) * 2.0 - Matrix::identity(n);
    r["m_matrix_interval"] = interval_m_matrix(IntervalMatrix(a - radius, a + radius));
  } else {
    r["pd_interval"] = na("vertex z z^T");
    r["pd_interval_negated"] = na("vertex z z^T");
    r["m_matrix_interval"] = na("lo M-matrix, hi off-diagonal <= 0");
  }
  {
    Verdict v;
    v.method = "column sign flip";
    if (n > enum_limit || n > 30) {
      v = detail::over_limit(n, enum_limit, "column sign flip");
    } else {
      v.value = Truth::False;
      for (std::uint64_t k = 1; k < orthant_count(n) && !v.is_true(); ++k) {
        const SignVector s = SignVector::from_index(n, k);
        const Matrix b = detail::times_signs(a, s);
        if (!linalg::is_symmetric(b)) continue;
        for (int neg = 0; neg < 2 && !v.is_true(); ++neg)
          if (interval_pd_rank1(neg ? Matrix(-b) : b, enum_limit).is_true()) {
            v.value = Truth::True;
            v.certificate.signs.emplace_back("s", s);
            v.certificate.scalars.emplace_back("negated", neg);
          }
      }
    }
    r["pd_interval_column_flip"] = v;
  }
  Verdict any;
  any.method = "any sufficient condition";
  any.value = Truth::False;
  for (const auto& [name, v] : r)
    if (v.is_true()) {
      any.value = Truth::True;
      any.note = name;
      break;
    }
  r["any"] = any;
  return r;
}

}  // namespace ave
