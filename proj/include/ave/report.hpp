#pragma once

// Everything the classifier knows about a matrix, in one report.

#include <cstddef>
#include <string>

#include "ave/classify.hpp"
#include "ave/reform.hpp"

namespace ave {

struct ClassifyLimits {
  std::size_t enum_limit = kDefaultEnumLimit;
  /// Also bounds the auxiliary LP condition, which costs the same 4^n order of LPs.
  std::size_t convexity_limit = kDefaultConvexityLimit;
};

/// Keys of grouped reports are prefixed with the group name and a dot.
inline ClassificationReport full_classification(const Matrix& a, const ClassifyLimits& limits = {}) {
  const std::size_t n = a.rows();
  const Matrix id = Matrix::identity(n);
  ClassificationReport r;
  auto merge = [&](const std::string& group, const ClassificationReport& sub) {
    for (const auto& [k, v] : sub) r[group + "." + k] = v;
  };
  r["unique_solvability"] = unique_solvability_oracle(a, limits.enum_limit);
  merge("regularity_sufficient", regularity_sufficient(a));
  r["nonneg_unique_solvability"] = nonneg_unique_solvability(a);
  r["orthant_solvability_search"] = orthant_solvability_search(a, limits.enum_limit);
  r["rho_sign_condition"] = rho_sign_condition(a);
  r["inverse_nonneg_interval"] = inverse_nonneg_interval(IntervalMatrix(a - id, a + id));
  r["finiteness_all_b"] = finiteness_all_b(a, limits.enum_limit);
  merge("finiteness_sufficient", finiteness_sufficient(a));
  r["boundedness_all_b"] = boundedness_all_b(a, limits.enum_limit);
  r["convexity_all_b"] = convexity_all_b(a, limits.convexity_limit);
  r["aux_lp_condition"] = aux_lp_condition_check(a, limits.convexity_limit);
  merge("aux_lp_condition_sufficient", aux_lp_condition_sufficient(a, limits.enum_limit));
  r["kkt_gap_feasible"] = kkt_gap_feasible(a, limits.enum_limit);
  r["feasible_for_all_b"] = feasible_for_all_b(a);
  if (linalg::is_z_matrix(a)) merge("m_matrix_equivalence", m_matrix_equivalence(a));
  return r;
}

}  // namespace ave
