#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace ave;

namespace {

Matrix evt(const std::vector<double>& v) {
  Matrix a(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) a(i, j) = v[j];
  return a;
}

IntervalMatrix unit_interval(const Matrix& a) {
  return IntervalMatrix::around(a, Matrix::identity(a.rows()));
}

// Certificate re-check for the oracle: the sign change or singular member.
void recheck_unique_solvability(const Matrix& a, const Verdict& v) {
  if (v.is_true()) return;
  if (const auto* s = v.certificate.sign("singular")) {
    EXPECT_FALSE(oracle::gauss_jordan_inverse(shifted(a, *s)));
    return;
  }
  const auto* s1 = v.certificate.sign("first");
  const auto* s2 = v.certificate.sign("second");
  ASSERT_TRUE(s1 && s2);
  EXPECT_LT(linalg::det(shifted(a, *s1)) * linalg::det(shifted(a, *s2)), 0);
}

}  // namespace

TEST(Truth, Margins) {
  EXPECT_EQ(less_than(0.5, 1), Truth::True);
  EXPECT_EQ(less_than(1.5, 1), Truth::False);
  EXPECT_EQ(less_than(1 - 1e-8, 1), Truth::Unknown);
  EXPECT_EQ(greater_than(1 + 1e-7, 1), Truth::Unknown);
  EXPECT_EQ(greater_than(3, 1), Truth::True);
}

TEST(IntervalMatrix, Validation) {
  EXPECT_THROW(IntervalMatrix(Matrix::identity(2), Matrix(2, 2)), std::invalid_argument);
  EXPECT_THROW(IntervalMatrix(Matrix::identity(2), Matrix::identity(3)), linalg::DimensionError);
  const auto m = unit_interval(Matrix{{3, -1}, {-1, 3}});
  EXPECT_EQ(m.midpoint(), (Matrix{{3, -1}, {-1, 3}}));
  EXPECT_EQ(m.radius(), Matrix::identity(2));
  EXPECT_TRUE(m.contains(Matrix{{2.5, -1}, {-1, 3.9}}));
}

TEST(UniqueSolvability, Examples) {
  const auto a = unique_solvability_oracle(Matrix::identity(2) * 3.0);
  EXPECT_TRUE(a.is_true());
  const Matrix b{{1, 2}, {2, 1}};
  const auto vb = unique_solvability_oracle(b);
  EXPECT_TRUE(vb.is_false());
  recheck_unique_solvability(b, vb);
  const auto vz = unique_solvability_oracle(Matrix(2, 2));
  EXPECT_TRUE(vz.is_false());
  recheck_unique_solvability(Matrix(2, 2), vz);
}

TEST(UniqueSolvability, OverLimitIsUnknown) {
  const auto v = unique_solvability_oracle(Matrix::identity(5) * 3.0, 3);
  EXPECT_TRUE(v.is_unknown());
  EXPECT_FALSE(v.note.empty());
}

TEST(RegularitySufficient, Examples) {
  const auto r = regularity_sufficient(Matrix::identity(2) * 3.0);
  EXPECT_TRUE(r.at("rho_abs_inverse").is_true());
  EXPECT_TRUE(r.at("sigma_min").is_true());
  EXPECT_TRUE(r.at("symmetric_signature").is_true());
  EXPECT_TRUE(regularity_sufficient(Matrix{{1, 2}, {2, 1}}).at("symmetric_signature").is_false());
  const auto h = regularity_sufficient(Matrix::identity(2) * 0.5);
  EXPECT_TRUE(h.at("sigma_min").is_false());
  EXPECT_TRUE(h.at("rho_abs_inverse").is_false());
}

TEST(NonnegUniqueSolvability, Examples) {
  const auto v = nonneg_unique_solvability(Matrix{{0, -0.5}, {-0.5, 0}});
  ASSERT_TRUE(v.is_true());
  const Matrix* inv = v.certificate.matrix("inverse");
  ASSERT_TRUE(inv);
  const Matrix want = Matrix{{1, 0.5}, {0.5, 1}} * (4.0 / 3);
  EXPECT_LE(linalg::norm_inf(*inv - want), 1e-12);
  EXPECT_TRUE(nonneg_unique_solvability(Matrix::identity(2) * -2.0).is_false());
  EXPECT_TRUE(nonneg_unique_solvability(Matrix(2, 2)).is_true());
}

TEST(OrthantSolvabilitySearch, Examples) {
  for (double c : {-0.5, 0.5}) {
    const auto v = orthant_solvability_search(Matrix::identity(2) * c);
    ASSERT_TRUE(v.is_true());
    EXPECT_EQ(v.certificate.sign("s")->str(), "++");
  }
  EXPECT_TRUE(orthant_solvability_search(Matrix{{0, -2}, {-2, 0}}).is_false());
}

TEST(OrthantSolvabilitySearch, CertificateChecks) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Matrix a = oracle::random_instance(3, seed).A;
    const auto v = orthant_solvability_search(a);
    if (!v.is_true()) continue;
    const SignVector s = *v.certificate.sign("s");
    auto inv = oracle::gauss_jordan_inverse(a * s.diag() + Matrix::identity(3));
    ASSERT_TRUE(inv);
    EXPECT_TRUE(linalg::nonnegative(*inv, 1e-10));
  }
}

TEST(OrthantSolvabilitySearch, RankOneAgreesWithSearch) {
  Rng rng(8);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 3);
    const Vector u = rng.vector(n, -2, 2), w = rng.vector(n, -2, 2);
    const Matrix a = Matrix::outer(u, w);
    const auto fast = orthant_solvability_search(a);
    // Brute force over every s with the private elimination.
    bool any = false;
    for (std::uint64_t k = 0; k < orthant_count(n) && !any; ++k) {
      const auto s = SignVector::from_index(n, k);
      auto inv = oracle::gauss_jordan_inverse(a * s.diag() + Matrix::identity(n));
      any = inv && linalg::nonnegative(*inv, 1e-10);
    }
    if (!fast.is_unknown()) { EXPECT_EQ(fast.is_true(), any) << t; }
  }
}

TEST(RhoSignCondition, Examples) {
  const auto a = rho_sign_condition(Matrix::identity(2) * -0.5);
  ASSERT_TRUE(a.is_true());
  EXPECT_EQ(a.certificate.sign("s")->str(), "++");
  const auto b = rho_sign_condition(Matrix{{0.3, 0}, {0, -0.3}});
  ASSERT_TRUE(b.is_true());
  EXPECT_EQ(b.certificate.sign("s")->str(), "-+");
  EXPECT_NEAR(*b.certificate.scalar("rho"), 0.3, 1e-9);
  EXPECT_TRUE(rho_sign_condition(Matrix{{1, 0}, {-1, 0.1}}).is_false());
}

TEST(InverseNonnegInterval, Examples) {
  EXPECT_TRUE(inverse_nonneg_interval(unit_interval(Matrix{{3, -1}, {-1, 3}})).is_true());
  EXPECT_TRUE(inverse_nonneg_interval(unit_interval(Matrix(2, 2))).is_false());
  EXPECT_TRUE(inverse_nonneg_interval(IntervalMatrix(Matrix::identity(2), Matrix::identity(2))).is_true());
}

TEST(IntervalMMatrix, Examples) {
  const Matrix m{{1, -0.5}, {-0.5, 1}};
  EXPECT_TRUE(interval_m_matrix(IntervalMatrix(m, m)).is_true());
  const Matrix a = Matrix::identity(2) * 10.0 - Matrix::ones(2, 2) * 3.0;
  const Matrix radius = Matrix::ones(2, 2) * 2.0 - Matrix::identity(2);
  const auto im = IntervalMatrix::around(a, radius);
  EXPECT_EQ(im.lo, (Matrix{{6, -5}, {-5, 6}}));
  EXPECT_TRUE(interval_m_matrix(im).is_true());
  const Matrix p{{1, 0.5}, {0.5, 1}};
  EXPECT_TRUE(interval_m_matrix(IntervalMatrix(p, p)).is_false());
}

TEST(IntervalPdRankOne, Examples) {
  EXPECT_TRUE(interval_pd_rank1(Matrix::identity(2) * 4.0).is_true());
  EXPECT_TRUE(interval_pd_rank1(Matrix::identity(2) * 1.5).is_false());
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto v = interval_pd_rank1(Matrix::identity(n) * static_cast<double>(n + 1));
    EXPECT_TRUE(v.is_true()) << n;
  }
  EXPECT_THROW(interval_pd_rank1(Matrix{{1, 2}, {0, 1}}), std::invalid_argument);
}

// Sampling validation of the vertex reduction: when the verdict is true, random
// symmetric members of [A - ee^T, A + ee^T] are positive definite.
TEST(IntervalPdRankOne, SampledMembersArePd) {
  Rng rng(31);
  int hits = 0;
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 3);
    Matrix b = rng.matrix(n, n, -1, 1);
    Matrix a = b + b.transpose() + Matrix::identity(n) * rng.uniform(1, 2 * static_cast<double>(n) + 2);
    const auto v = interval_pd_rank1(a);
    if (v.is_unknown()) continue;
    int failures = 0;
    for (int k = 0; k < 100; ++k) {
      Matrix m = a;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
          const double d = rng.uniform(-1, 1);
          m(i, j) += d;
          if (i != j) m(j, i) += d;
        }
      if (linalg::lambda_min(m) <= 0) ++failures;
    }
    if (v.is_true()) {
      EXPECT_EQ(failures, 0) << t;
      ++hits;
    }
  }
  EXPECT_GT(hits, 5);
}

TEST(Finiteness, Examples) {
  const auto f = finiteness_all_b(evt({2, 3, 4}));
  ASSERT_TRUE(f.is_false());
  ASSERT_TRUE(f.certificate.sign("singular"));
  EXPECT_EQ(f.certificate.sign("singular")->str(), "--+");
  EXPECT_TRUE(finiteness_all_b(evt({2, 4, 6})).is_true());
  EXPECT_TRUE(finiteness_all_b(Matrix(2, 2)).is_true());
}

TEST(FinitenessSufficient, Examples) {
  const auto a = finiteness_sufficient(Matrix::identity(3) * 0.4);
  for (const char* k : {"rho_sym_abs", "spectral_norm", "rho_abs", "rho_preconditioned"})
    EXPECT_TRUE(a.at(k).is_true()) << k;
  const auto b = finiteness_sufficient(Matrix{{0, -0.3}, {0.3, 0}});
  EXPECT_TRUE(b.at("rho_abs").is_true());
  EXPECT_TRUE(b.at("spectral_norm").is_true());
  const auto c = finiteness_sufficient(Matrix::ones(2, 2));
  for (const auto& [k, v] : c) EXPECT_TRUE(v.is_false()) << k;
}

TEST(Boundedness, Examples) {
  EXPECT_TRUE(boundedness_all_b(Matrix(2, 2)).is_true());
  const Matrix a{{-1, 2}, {0, 1}};
  const auto v = boundedness_all_b(a);
  ASSERT_TRUE(v.is_false());
  const Vector x = *v.certificate.vector("x");
  EXPECT_GT(linalg::norm_inf(x), 0);
  EXPECT_LE(linalg::norm_inf(linalg::add(a * x, linalg::abs(x))), 1e-9);
  EXPECT_TRUE(boundedness_all_b(Matrix{{1, 2}, {2, 1}}).is_true());
}

TEST(Convexity, Examples) {
  EXPECT_TRUE(convexity_all_b(Matrix{{1, 2}, {2, 1}}).is_true());
  EXPECT_TRUE(convexity_all_b(Matrix::identity(2) * 3.0).is_true());
  const Matrix a{{1, -2}, {2, -3}};
  const auto v = convexity_all_b(a);
  ASSERT_TRUE(v.is_false());
  const Vector x1 = *v.certificate.vector("x1"), x2 = *v.certificate.vector("x2");
  const Vector b = *v.certificate.vector("b");
  const AveInstance inst(a, b);
  EXPECT_TRUE(is_solution(inst, x1));
  EXPECT_TRUE(is_solution(inst, x2));
  Vector mid(2);
  for (std::size_t i = 0; i < 2; ++i) mid[i] = 0.5 * (x1[i] + x2[i]);
  EXPECT_FALSE(is_solution(inst, mid));
}

// Exactness chain and oracle agreement on random corpora.
TEST(ClassifyProperty, FinitenessMatchesPdReformulation) {
  int compared = 0;
  for (std::size_t n : {3u, 4u}) {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      const Matrix a = oracle::random_instance(n, seed * 7 + n).A;
      const auto pd = test::pd_finiteness(a);
      const auto f = finiteness_all_b(a);
      if (!pd || f.is_unknown()) continue;
      ++compared;
      EXPECT_EQ(f.is_true(), *pd) << seed;
    }
  }
  EXPECT_GE(compared, 110);
}

TEST(ClassifyProperty, ImplicationChain) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const std::size_t n = 2 + seed % 3;
    const Matrix a = oracle::random_instance(n, seed).A;
    const auto u = unique_solvability_oracle(a);
    const auto f = finiteness_all_b(a);
    const auto b = boundedness_all_b(a);
    if (u.is_true()) { EXPECT_TRUE(f.is_true()) << seed; }
    if (f.is_true()) { EXPECT_TRUE(b.is_true()) << seed; }
    for (const auto& [k, v] : regularity_sufficient(a))
      if (v.is_true()) { EXPECT_TRUE(u.is_true()) << k << " " << seed; }
    for (const auto& [k, v] : finiteness_sufficient(a))
      if (v.is_true()) { EXPECT_TRUE(f.is_true()) << k << " " << seed; }
  }
}

TEST(ClassifyProperty, UniqueSolvabilityGivesOnePoint) {
  Rng rng(4);
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    Matrix a = oracle::random_instance(3, seed).A;
    a = a + Matrix::identity(3) * 2.5;  // push toward regularity
    if (!unique_solvability_oracle(a).is_true()) continue;
    ++checked;
    for (int k = 0; k < 20; ++k) {
      const auto d = enumerate_solution_set(AveInstance(a, rng.vector(3, -3, 3)));
      EXPECT_TRUE(d.is_finite);
      EXPECT_EQ(d.points.size(), 1u) << seed;
    }
  }
  EXPECT_GT(checked, 10);
}

// Unique nonnegative solution for every b >= 0: the nonnegative-orthant
// piece is a single point. Other orthants may hold further solutions.
TEST(ClassifyProperty, NonnegUniqueSolvabilityMatchesEnumeration) {
  Rng rng(12);
  auto unique_nonneg = [](const Matrix& a, const Vector& b) {
    const auto p = orthant_piece(AveInstance(a, b), SignVector::all_plus(a.rows()));
    return p.status == PieceStatus::Point;
  };
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Matrix a = oracle::random_instance(2 + seed % 2, seed + 300).A;
    const std::size_t n = a.rows();
    const auto v = nonneg_unique_solvability(a);
    if (v.is_unknown()) continue;
    if (v.is_true()) {
      for (int k = 0; k < 20; ++k) EXPECT_TRUE(unique_nonneg(a, rng.vector(n, 0, 3))) << seed;
    } else {
      // A unit right-hand side refutes it.
      bool refuted = false;
      for (std::size_t j = 0; j < n; ++j) {
        Vector e(n, 0.0);
        e[j] = 1;
        refuted = refuted || !unique_nonneg(a, e);
      }
      EXPECT_TRUE(refuted) << seed;
    }
  }
}

TEST(ClassifyProperty, InverseNonnegIntervalSignOfSolutions) {
  Rng rng(14);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto g = oracle::inverse_nonneg_generator(2 + seed % 4, seed);
    const Matrix& a = g.inst.A;
    const std::size_t n = a.rows();
    ASSERT_TRUE(inverse_nonneg_interval(unit_interval(a)).is_true());
    EXPECT_TRUE(unique_solvability_oracle(a).is_true());
    const auto pos = enumerate_solution_set(AveInstance(a, rng.vector(n, 0, 3)));
    ASSERT_EQ(pos.points.size(), 1u);
    EXPECT_TRUE(linalg::nonnegative(pos.points[0], 1e-8));
    const auto neg = enumerate_solution_set(AveInstance(a, rng.vector(n, -3, 0)));
    ASSERT_EQ(neg.points.size(), 1u);
    EXPECT_TRUE(linalg::nonnegative(linalg::scale(neg.points[0], -1), 1e-8));
  }
}

TEST(ClassifyProperty, PreconditionedRadiusDominates) {
  Rng rng(21);
  int checked = 0;
  for (int t = 0; t < 400 && checked < 100; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 3);
    const Matrix a = rng.matrix(n, n, -0.4, 0.4);
    const Matrix c = Matrix::identity(n) + rng.matrix(n, n, -0.1, 0.1);
    const double pre = linalg::spectral_radius_nonneg(linalg::abs(c * a) + linalg::abs(Matrix::identity(n) - c));
    if (!(pre < 1)) continue;
    ++checked;
    EXPECT_LE(linalg::spectral_radius_nonneg(linalg::abs(a)), pre + 1e-6);
  }
  EXPECT_EQ(checked, 100);
}

TEST(ClassifyProperty, SubsetSumAgreement) {
  Rng rng(2);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 6);
    std::vector<std::uint64_t> v(n);
    for (auto& x : v) x = static_cast<std::uint64_t>(rng.integer(1, 9));
    const auto s = oracle::subset_sum_instance(v);
    const auto f = finiteness_all_b(s.A);
    const auto b = boundedness_all_b(s.A);
    ASSERT_FALSE(f.is_unknown());
    EXPECT_EQ(f.is_true(), s.expected_finiteness) << t;
    EXPECT_EQ(b.is_true(), s.expected_boundedness) << t;
  }
}

TEST(FullClassification, KeysAndZMatrixGroup) {
  const auto r = full_classification(Matrix{{1, 2}, {2, 1}});
  EXPECT_TRUE(r.at("unique_solvability").is_false());
  EXPECT_TRUE(r.at("convexity_all_b").is_true());
  EXPECT_TRUE(r.at("boundedness_all_b").is_true());
  EXPECT_EQ(r.count("m_matrix_equivalence.agree"), 0u);
  const auto z = full_classification(Matrix{{0, -0.5}, {-0.5, 0}});
  EXPECT_TRUE(z.at("m_matrix_equivalence.agree").is_true());
  for (const auto& [k, v] : z) EXPECT_FALSE(v.method.empty()) << k;
}
