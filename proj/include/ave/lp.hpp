#pragma once

// Dense two-phase simplex with Bland's anti-cycling rule.
//
// Variables are free unless bounded; bounds are folded into the standard
// form by substitution so they never cost a constraint row (except when a
// variable carries both a lower and an upper bound). The final basic
// solution is recomputed from the original data with a pivoted LU so that
// reported points do not carry the tableau's accumulated rounding.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ave/linalg.hpp"

namespace ave::lp {

using linalg::Matrix;
using linalg::Vector;

/// Feasibility tolerance for reported points and the phase-1 optimum.
inline constexpr double kFeasTol = 1e-9;

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Minimize, Maximize };
enum class Status { Optimal, Infeasible, Unbounded };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "?";
}

struct LinearConstraint {
  Vector coefficients;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

struct LinearProgram {
  Sense sense = Sense::Minimize;
  Vector objective;
  std::vector<LinearConstraint> constraints;
  /// Per-variable bounds; an empty vector means "all free".
  std::vector<std::optional<double>> lower;
  std::vector<std::optional<double>> upper;

  LinearProgram() = default;
  explicit LinearProgram(std::size_t n) : objective(n, 0.0), lower(n), upper(n) {}

  std::size_t variables() const noexcept { return objective.size(); }

  LinearProgram& add(Vector coefficients, Relation rel, double rhs) {
    constraints.push_back({std::move(coefficients), rel, rhs});
    return *this;
  }
  LinearProgram& set_lower(std::size_t j, double v) {
    ensure_bounds();
    lower[j] = v;
    return *this;
  }
  LinearProgram& set_upper(std::size_t j, double v) {
    ensure_bounds();
    upper[j] = v;
    return *this;
  }

 private:
  void ensure_bounds() {
    lower.resize(objective.size());
    upper.resize(objective.size());
  }
};

struct LpOutcome {
  Status status = Status::Infeasible;
  Vector point;  // set when optimal
  double value = 0.0;
  std::size_t pivots = 0;
};

/// Largest violation of the program's constraints and bounds at x.
inline double max_violation(const LinearProgram& lp, std::span<const double> x) {
  double worst = 0.0;
  for (const auto& c : lp.constraints) {
    const double lhs = linalg::dot(c.coefficients, x);
    double v = 0.0;
    switch (c.relation) {
      case Relation::LessEqual: v = lhs - c.rhs; break;
      case Relation::GreaterEqual: v = c.rhs - lhs; break;
      case Relation::Equal: v = std::abs(lhs - c.rhs); break;
    }
    worst = std::max(worst, v);
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j < lp.lower.size() && lp.lower[j]) worst = std::max(worst, *lp.lower[j] - x[j]);
    if (j < lp.upper.size() && lp.upper[j]) worst = std::max(worst, x[j] - *lp.upper[j]);
  }
  return worst;
}

namespace detail {

// x_j = offset + sign * y[col] (- y[col + 1] when free).
struct VarMap {
  enum class Kind { Free, Lower, Upper, Boxed } kind = Kind::Free;
  std::size_t col = 0;
  double offset = 0.0;
  double sign = 1.0;
  double width = 0.0;  // boxed only
};

class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp) : lp_(lp), n_(lp.variables()) {
    validate();
    build_standard_form();
  }

  LpOutcome run() {
    LpOutcome out;
    if (!phase_one()) {
      out.status = Status::Infeasible;
      out.pivots = pivots_;
      return out;
    }
    drive_out_artificials();
    const bool bounded = phase_two();
    out.pivots = pivots_;
    if (!bounded) {
      out.status = Status::Unbounded;
      return out;
    }
    out.status = Status::Optimal;
    out.point = recover_point();
    out.value = linalg::dot(lp_.objective, out.point);
    return out;
  }

 private:
  void validate() const {
    for (const auto& c : lp_.constraints)
      if (c.coefficients.size() != n_)
        throw linalg::DimensionError("LinearProgram: constraint length differs from variable count");
    if ((!lp_.lower.empty() && lp_.lower.size() != n_) ||
        (!lp_.upper.empty() && lp_.upper.size() != n_))
      throw linalg::DimensionError("LinearProgram: bound vector length differs from variable count");
    for (std::size_t j = 0; j < n_; ++j) {
      auto lo = j < lp_.lower.size() ? lp_.lower[j] : std::nullopt;
      auto hi = j < lp_.upper.size() ? lp_.upper[j] : std::nullopt;
      if (lo && hi && *lo > *hi) infeasible_bounds_ = true;
    }
  }

  void build_standard_form() {
    maps_.resize(n_);
    std::size_t col = 0;
    std::vector<std::pair<std::size_t, double>> box_rows;
    for (std::size_t j = 0; j < n_; ++j) {
      const bool has_lo = j < lp_.lower.size() && lp_.lower[j].has_value();
      const bool has_hi = j < lp_.upper.size() && lp_.upper[j].has_value();
      const double lo = has_lo ? *lp_.lower[j] : 0.0;
      const double hi = has_hi ? *lp_.upper[j] : 0.0;
      VarMap& m = maps_[j];
      m.col = col;
      if (has_lo && has_hi) {
        m.kind = VarMap::Kind::Boxed;
        m.offset = lo;
        m.width = std::max(0.0, hi - lo);
        box_rows.emplace_back(col, m.width);
        col += 1;
      } else if (has_lo) {
        m.kind = VarMap::Kind::Lower;
        m.offset = lo;
        col += 1;
      } else if (has_hi) {
        m.kind = VarMap::Kind::Upper;
        m.offset = hi;
        m.sign = -1.0;
        col += 1;
      } else {
        m.kind = VarMap::Kind::Free;
        col += 2;
      }
    }
    structural_ = col;

    // Rows in terms of y, before slack/artificial columns.
    struct Row {
      Vector a;
      Relation rel;
      double rhs;
    };
    std::vector<Row> rows;
    for (const auto& c : lp_.constraints) {
      Row r{Vector(structural_, 0.0), c.relation, c.rhs};
      for (std::size_t j = 0; j < n_; ++j) {
        const double a = c.coefficients[j];
        if (a == 0.0) continue;
        const VarMap& m = maps_[j];
        r.rhs -= a * m.offset;
        r.a[m.col] += a * m.sign;
        if (m.kind == VarMap::Kind::Free) r.a[m.col + 1] -= a;
      }
      rows.push_back(std::move(r));
    }
    for (auto [c, w] : box_rows) {
      Row r{Vector(structural_, 0.0), Relation::LessEqual, w};
      r.a[c] = 1.0;
      rows.push_back(std::move(r));
    }
    for (auto& r : rows)
      if (r.rhs < 0.0) {
        for (double& v : r.a) v = -v;
        r.rhs = -r.rhs;
        if (r.rel == Relation::LessEqual)
          r.rel = Relation::GreaterEqual;
        else if (r.rel == Relation::GreaterEqual)
          r.rel = Relation::LessEqual;
      }

    m_ = rows.size();
    std::size_t slacks = 0, arts = 0;
    for (const auto& r : rows) {
      if (r.rel != Relation::Equal) ++slacks;
      if (r.rel != Relation::LessEqual) ++arts;
    }
    first_art_ = structural_ + slacks;
    cols_ = first_art_ + arts;

    a_std_ = Matrix(m_, first_art_);
    b_std_.assign(m_, 0.0);
    t_ = Matrix(m_ + 1, cols_ + 1);
    basis_.assign(m_, 0);
    std::size_t s = structural_, art = first_art_;
    for (std::size_t i = 0; i < m_; ++i) {
      const Row& r = rows[i];
      for (std::size_t j = 0; j < structural_; ++j) t_(i, j) = a_std_(i, j) = r.a[j];
      if (r.rel == Relation::LessEqual) {
        t_(i, s) = a_std_(i, s) = 1.0;
        basis_[i] = s++;
      } else if (r.rel == Relation::GreaterEqual) {
        t_(i, s) = a_std_(i, s) = -1.0;
        ++s;
        t_(i, art) = 1.0;
        basis_[i] = art++;
      } else {
        t_(i, art) = 1.0;
        basis_[i] = art++;
      }
      t_(i, cols_) = b_std_[i] = r.rhs;
    }
    rhs_scale_ = std::max(1.0, linalg::norm_inf(b_std_));
  }

  void pivot(std::size_t r, std::size_t c) {
    ++pivots_;
    if (pivots_ > 200000) throw std::runtime_error("simplex: pivot limit exceeded");
    const double p = t_(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) t_(r, j) /= p;
    t_(r, c) = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) t_(i, j) -= f * t_(r, j);
      t_(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  // Minimizes the objective row currently loaded in t_(m_, .) over columns
  // [0, limit). Returns false when unbounded.
  bool iterate(std::size_t limit, double cost_tol) {
    for (;;) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j)
        if (t_(m_, j) < -cost_tol) {
          enter = j;
          break;
        }
      if (enter == limit) return true;
      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = t_(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(0.0, t_(i, cols_)) / a;
        if (leave == m_) {
          best = ratio;
          leave = i;
          continue;
        }
        const double tie = 1e-12 * std::max(1.0, best);
        if (ratio < best - tie || (ratio <= best + tie && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  void load_objective(const Vector& cost) {
    for (std::size_t j = 0; j <= cols_; ++j) t_(m_, j) = j < cost.size() ? cost[j] : 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = basis_[i] < cost.size() ? cost[basis_[i]] : 0.0;
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) t_(m_, j) -= cb * t_(i, j);
    }
  }

  bool phase_one() {
    if (infeasible_bounds_) return false;
    if (first_art_ == cols_) return true;
    Vector cost(cols_, 0.0);
    for (std::size_t j = first_art_; j < cols_; ++j) cost[j] = 1.0;
    load_objective(cost);
    iterate(cols_, 1e-11);
    double infeas = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= first_art_) infeas += std::max(0.0, t_(i, cols_));
    return infeas <= kFeasTol * rhs_scale_;
  }

  void drive_out_artificials() {
    std::vector<std::size_t> redundant;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < first_art_) continue;
      std::size_t best = first_art_;
      double mag = 1e-9;
      for (std::size_t j = 0; j < first_art_; ++j)
        if (std::abs(t_(i, j)) > mag) {
          mag = std::abs(t_(i, j));
          best = j;
        }
      if (best < first_art_)
        pivot(i, best);
      else
        redundant.push_back(i);
    }
    if (redundant.empty()) return;
    // Drop rows that are linear combinations of the others.
    std::vector<bool> drop(m_, false);
    for (auto i : redundant) drop[i] = true;
    Matrix t(m_ - redundant.size() + 1, cols_ + 1);
    Matrix a(m_ - redundant.size(), first_art_);
    Vector b;
    std::vector<std::size_t> basis;
    std::size_t k = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (drop[i]) continue;
      for (std::size_t j = 0; j <= cols_; ++j) t(k, j) = t_(i, j);
      for (std::size_t j = 0; j < first_art_; ++j) a(k, j) = a_std_(i, j);
      b.push_back(b_std_[i]);
      basis.push_back(basis_[i]);
      ++k;
    }
    for (std::size_t j = 0; j <= cols_; ++j) t(k, j) = t_(m_, j);
    t_ = std::move(t);
    a_std_ = std::move(a);
    b_std_ = std::move(b);
    basis_ = std::move(basis);
    m_ = k;
  }

  bool phase_two() {
    Vector cost(cols_, 0.0);
    const double dir = lp_.sense == Sense::Maximize ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n_; ++j) {
      const double c = dir * lp_.objective[j];
      const VarMap& m = maps_[j];
      cost[m.col] += c * m.sign;
      if (m.kind == VarMap::Kind::Free) cost[m.col + 1] -= c;
    }
    load_objective(cost);
    const double tol = 1e-10 * std::max(1.0, linalg::norm_inf(lp_.objective));
    return iterate(first_art_, tol);
  }

  Vector recover_point() const {
    Vector y(first_art_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < first_art_) y[basis_[i]] = t_(i, cols_);
    // Refine the basic solution from the untouched standard-form data.
    if (m_ > 0) {
      Matrix bmat(m_, m_);
      bool ok = true;
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] >= first_art_) {
          ok = false;
          break;
        }
        for (std::size_t r = 0; r < m_; ++r) bmat(r, i) = a_std_(r, basis_[i]);
      }
      if (ok) {
        if (auto yb = linalg::lu_factor_solve(bmat, b_std_, 1e-13)) {
          for (std::size_t i = 0; i < m_; ++i) y[basis_[i]] = (*yb)[i];
        }
      }
    }
    Vector x(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      const VarMap& m = maps_[j];
      double yj = m.kind == VarMap::Kind::Free ? y[m.col] - y[m.col + 1] : y[m.col];
      if (m.kind != VarMap::Kind::Free) yj = std::max(0.0, yj);
      if (m.kind == VarMap::Kind::Boxed) yj = std::min(yj, m.width);
      x[j] = m.offset + m.sign * yj;
    }
    return x;
  }

  static constexpr double kPivotTol = 1e-9;

  const LinearProgram& lp_;
  std::size_t n_;
  std::vector<VarMap> maps_;
  std::size_t structural_ = 0, first_art_ = 0, cols_ = 0, m_ = 0;
  Matrix a_std_;
  Vector b_std_;
  Matrix t_;
  std::vector<std::size_t> basis_;
  double rhs_scale_ = 1.0;
  std::size_t pivots_ = 0;
  mutable bool infeasible_bounds_ = false;
};

}  // namespace detail

/// Solves a linear program. Deterministic: Bland's rule with lowest-index
/// tie breaking.
inline LpOutcome solve(const LinearProgram& lp) {
  return detail::Simplex(lp).run();
}

/// Feasibility of a program's constraints and bounds; objective ignored.
inline std::optional<Vector> feasible(const LinearProgram& lp) {
  LinearProgram p = lp;
  std::fill(p.objective.begin(), p.objective.end(), 0.0);
  LpOutcome out = solve(p);
  if (out.status != Status::Optimal) return std::nullopt;
  return out.point;
}

/// Feasibility of a system of free-variable constraints.
inline std::optional<Vector> feasible(const std::vector<LinearConstraint>& constraints) {
  const std::size_t n = constraints.empty() ? 0 : constraints.front().coefficients.size();
  LinearProgram lp(n);
  lp.constraints = constraints;
  return feasible(lp);
}

}  // namespace ave::lp
