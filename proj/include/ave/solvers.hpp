#pragma once

// Solvers with certificates: the sign-update iteration for inverse
// nonnegative [A - I, A + I], a Picard iteration under rho(|inv(A)|) < 1,
// and a dispatcher that picks the first certified method.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ave/classify.hpp"
#include "ave/core.hpp"
#include "ave/linalg.hpp"
#include "ave/reform.hpp"

namespace ave {

enum class SolveStatus {
  Solved,      // a certified solution point
  Enumerated,  // the whole solution set, nonempty
  Unsolvable,  // enumeration proved the set empty
  Undecided,   // no applicable method
};

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::Enumerated: return "enumerated";
    case SolveStatus::Unsolvable: return "unsolvable";
    case SolveStatus::Undecided: return "undecided";
  }
  return "?";
}

struct SolveOutcome {
  SolveStatus status = SolveStatus::Undecided;
  std::string method;
  std::optional<Vector> solution;
  std::optional<SolutionSetDescription> set;
  /// Certified to be the only solution.
  bool unique = false;
  std::optional<SignVector> orthant;
  std::size_t iterations = 0;
  bool converged = true;
  std::vector<Vector> iterates;
  /// Verdicts that justified the method, in the order they were checked.
  std::vector<std::pair<std::string, Verdict>> certificates;
  std::vector<std::pair<std::string, double>> diagnostics;
};

struct SolveLimits {
  std::size_t enum_limit = kDefaultEnumLimit;
  double tol = 1e-12;
  std::size_t max_iter = 10000;
};

namespace detail {

inline std::vector<int> sgn(std::span<const double> x) {
  const double tol = 1e-12 * (1.0 + linalg::norm_inf(x));
  std::vector<int> s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] > tol ? 1 : (x[i] < -tol ? -1 : 0);
  return s;
}

inline Vector shifted_solve(const AveInstance& inst, const std::vector<int>& s) {
  Vector d(s.begin(), s.end());
  auto x = linalg::lu_factor_solve(shifted(inst.A, d), inst.b);
  if (!x) throw std::runtime_error("A + D_s singular during iteration");
  return *x;
}

inline IntervalMatrix unit_interval(const Matrix& a) {
  const Matrix id = Matrix::identity(a.rows());
  return IntervalMatrix(a - id, a + id);
}

}  // namespace detail

/// x0 = inv(A + I) b, then x(k+1) = inv(A + D_sgn(x(k))) b until two
/// consecutive iterates agree. Requires [A - I, A + I] inverse nonnegative.
/// `iterations` counts the solves performed; the sign changes number one
/// less (diagnostic "sign_changes").
inline SolveOutcome sign_iteration(const AveInstance& inst) {
  inst.validate();
  Verdict pre = inverse_nonneg_interval(detail::unit_interval(inst.A));
  if (!pre.is_true()) throw std::domain_error("sign_iteration: [A - I, A + I] is not inverse nonnegative");
  const std::size_t n = inst.n();
  SolveOutcome out;
  out.method = "sign-iteration";
  out.certificates.emplace_back("inverse_nonneg_interval", std::move(pre));
  Vector x = detail::shifted_solve(inst, std::vector<int>(n, 1));
  out.iterates.push_back(x);
  out.iterations = 1;
  // Monotone convergence takes at most n sign changes; the cap only guards
  // against numerical breakdown.
  const std::size_t cap = 2 * n + 4;
  for (;;) {
    Vector next = detail::shifted_solve(inst, detail::sgn(x));
    const double step = linalg::norm_inf(linalg::sub(next, x));
    const bool done = step <= 1e-10 * (1.0 + linalg::norm_inf(x));
    if (done) break;
    x = std::move(next);
    out.iterates.push_back(x);
    if (++out.iterations > cap) {
      out.converged = false;
      break;
    }
  }
  detail::clean_zeros(x, 1e-13 * (1.0 + linalg::norm_inf(x)));
  out.diagnostics.emplace_back("sign_changes", static_cast<double>(out.iterations - 1));
  out.solution = x;
  out.unique = true;
  out.status = SolveStatus::Solved;
  if (!out.converged || !is_solution(inst, x))
    throw std::runtime_error("sign_iteration: iteration did not reach a solution");
  return out;
}

/// Fixed point of x = inv(A)(b - |x|). Requires rho(|inv(A)|) < 1 - margin.
/// Diagnostic "observed_ratio" is the largest step contraction measured in
/// the max norm weighted by the Perron vector of |inv(A)|, where the map is
/// a contraction with factor rho.
inline SolveOutcome picard(const AveInstance& inst, double tol = 1e-12, std::size_t max_iter = 10000) {
  inst.validate();
  auto inv = linalg::inverse(inst.A);
  if (!inv) throw std::domain_error("picard: A is singular");
  const Matrix abs_inv = linalg::abs(*inv);
  const auto pp = linalg::perron(abs_inv);
  Verdict pre;
  pre.method = "rho(|inv(A)|) < 1";
  pre.value = less_than(pp.root, 1.0);
  pre.certificate.scalars.emplace_back("rho", pp.root);
  if (!pre.is_true()) throw std::domain_error("picard: rho(|inv(A)|) is not below 1");

  const std::size_t n = inst.n();
  const Vector& w = pp.vector;
  auto weighted = [&](std::span<const double> z) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(z[i]) / w[i]);
    return m;
  };

  SolveOutcome out;
  out.method = "picard";
  out.certificates.emplace_back("rho_abs_inverse", pre);
  Vector x = *inv * inst.b;
  out.iterates.push_back(x);
  double prev_step = -1.0, ratio = 0.0;
  out.converged = false;
  for (std::size_t k = 0; k < max_iter; ++k) {
    Vector next = *inv * linalg::sub(inst.b, linalg::abs(x));
    const Vector delta = linalg::sub(next, x);
    const double step = weighted(delta);
    const double floor = 1e-9 * (1.0 + linalg::norm_inf(x));
    if (prev_step > 0.0 && linalg::norm_inf(delta) > floor) ratio = std::max(ratio, step / prev_step);
    prev_step = step;
    x = std::move(next);
    out.iterates.push_back(x);
    ++out.iterations;
    if (linalg::norm_inf(delta) <= tol) {
      out.converged = true;
      break;
    }
  }
  detail::clean_zeros(x, 1e-13 * (1.0 + linalg::norm_inf(x)));
  out.solution = x;
  out.unique = true;
  out.status = SolveStatus::Solved;
  out.diagnostics.emplace_back("rho", pp.root);
  out.diagnostics.emplace_back("observed_ratio", ratio);
  out.diagnostics.emplace_back("residual", linalg::norm_inf(residual(inst, x)));
  return out;
}

namespace detail {

inline bool accept(SolveOutcome& out, const AveInstance& inst, Vector x,
                   std::optional<SignVector> orthant) {
  clean_zeros(x, 1e-13 * (1.0 + linalg::norm_inf(x)));
  if (!is_solution(inst, x)) return false;
  if (orthant && !orthant->contains(x, 1e-8 * (1.0 + linalg::norm_inf(x)))) return false;
  out.solution = std::move(x);
  out.orthant = std::move(orthant);
  out.status = SolveStatus::Solved;
  return true;
}

/// sgn(inv(A)) = s e^T: every row of inv(A) has one uniform sign s_i.
inline std::optional<SignVector> row_sign_pattern(const Matrix& inv) {
  std::vector<int> s(inv.rows());
  for (std::size_t i = 0; i < inv.rows(); ++i) {
    bool pos = true, neg = true;
    for (std::size_t j = 0; j < inv.cols(); ++j) {
      pos = pos && inv(i, j) > 0;
      neg = neg && inv(i, j) < 0;
    }
    if (!pos && !neg) return std::nullopt;
    s[i] = pos ? 1 : -1;
  }
  return SignVector(std::move(s));
}

}  // namespace detail

/// Tries, in order: the sign-update iteration, Picard, orthant shortcuts
/// for b >= 0, the greatest-element LP, full enumeration.
inline SolveOutcome solve_auto(const AveInstance& inst, const SolveLimits& limits = {}) {
  inst.validate();
  const std::size_t n = inst.n();
  std::vector<std::pair<std::string, Verdict>> tried;

  {
    Verdict v = inverse_nonneg_interval(detail::unit_interval(inst.A));
    tried.emplace_back("inverse_nonneg_interval", v);
    if (v.is_true()) {
      SolveOutcome out = sign_iteration(inst);
      out.certificates = tried;
      return out;
    }
  }

  if (auto inv = linalg::inverse(inst.A)) {
    Verdict v;
    v.method = "rho(|inv(A)|) < 1";
    const double rho = linalg::spectral_radius_nonneg(linalg::abs(*inv));
    v.value = less_than(rho, 1.0);
    v.certificate.scalars.emplace_back("rho", rho);
    tried.emplace_back("rho_abs_inverse", v);
    if (v.is_true()) {
      SolveOutcome out = picard(inst, limits.tol, limits.max_iter);
      out.certificates = tried;
      if (out.converged && is_solution(inst, *out.solution)) return out;
    }
  }

  if (linalg::nonnegative(inst.b)) {
    SolveOutcome out;
    const Matrix id = Matrix::identity(n);
    auto finish = [&](const char* method, bool unique) {
      out.method = method;
      out.unique = unique;
      out.certificates = tried;
      return out;
    };
    Verdict v = nonneg_unique_solvability(inst.A);
    tried.emplace_back("nonneg_unique_solvability", v);
    if (v.is_true() &&
        detail::accept(out, inst, *v.certificate.matrix("inverse") * inst.b, SignVector::all_plus(n)))
      return finish("nonneg-inverse", false);

    v = rho_sign_condition(inst.A);
    tried.emplace_back("rho_sign_condition", v);
    if (v.is_true()) {
      const SignVector s = *v.certificate.sign("s");
      if (auto x = linalg::lu_factor_solve(shifted(inst.A, s), inst.b);
          x && detail::accept(out, inst, *x, s))
        return finish("rho-sign", false);
    }

    if (auto inv = linalg::inverse(inst.A)) {
      if (auto s = detail::row_sign_pattern(*inv)) {
        const Matrix ad = detail::times_signs(inst.A, *s);
        v = inverse_nonneg_interval(IntervalMatrix(ad - id, ad + id));
        tried.emplace_back("sign_pattern", v);
        if (v.is_true()) {
          if (auto x = linalg::lu_factor_solve(shifted(inst.A, *s), inst.b);
              x && detail::accept(out, inst, *x, *s))
            return finish("sign-pattern", true);
        }
      }
    }

    v = orthant_solvability_search(inst.A, limits.enum_limit);
    tried.emplace_back("orthant_solvability_search", v);
    if (v.is_true()) {
      const SignVector s = *v.certificate.sign("s");
      Vector y = *v.certificate.matrix("inverse") * inst.b;
      for (std::size_t i = 0; i < n; ++i) y[i] *= s[i];
      if (detail::accept(out, inst, std::move(y), s)) return finish("orthant-search", false);
    }
  }

  if (linalg::is_z_matrix(inst.A)) {
    const Matrix ai = inst.A + Matrix::identity(n);
    Verdict v = interval_m_matrix(IntervalMatrix(ai, ai));
    tried.emplace_back("m_matrix", v);
    if (v.is_true()) {
      try {
        SolveOutcome out;
        out.method = "greatest-element";
        out.solution = greatest_element_solve(inst, Vector(n, 1.0));
        out.status = SolveStatus::Solved;
        out.certificates = tried;
        return out;
      } catch (const std::domain_error&) {
        // Feasible set empty: fall through to enumeration.
      }
    }
  }

  SolveOutcome out;
  out.certificates = tried;
  if (n <= limits.enum_limit && n <= 30) {
    out.method = "enumeration";
    out.set = enumerate_solution_set(inst, limits.enum_limit);
    if (out.set->is_empty) {
      out.status = SolveStatus::Unsolvable;
    } else {
      out.status = SolveStatus::Enumerated;
      if (out.set->is_finite && out.set->points.size() == 1) {
        out.solution = out.set->points.front();
        out.unique = true;
      }
    }
    return out;
  }
  out.method = "undecided";
  out.status = SolveStatus::Undecided;
  return out;
}

}  // namespace ave
