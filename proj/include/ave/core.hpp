#pragma once

// Absolute value equations Ax + |x| = b: instances, orthant decomposition
// and exact enumeration of the solution set at desk scale.
//
// Inside the closed orthant D_s x >= 0 we have |x| = D_s x, so the part of
// the solution set living there is the polyhedron
//
//     P_s = { x : (A + D_s) x = b, D_s x >= 0 }.
//
// With y = D_s x this is the standard-form polyhedron
// { y >= 0 : (A D_s + I) y = b }, which is pointed; its vertices are basic
// feasible solutions and its recession cone is generated by basic
// directions. Both are enumerated exhaustively.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ave/linalg.hpp"
#include "ave/lp.hpp"

namespace ave {

using linalg::Matrix;
using linalg::Vector;

/// Sign tolerance for orthant membership (D_s x >= -kOrthantTol).
inline constexpr double kOrthantTol = 1e-9;
/// Infinity-norm distance under which two points are the same point.
inline constexpr double kDedupTol = 1e-8;
inline constexpr std::size_t kDefaultEnumLimit = 12;

struct AveInstance {
  Matrix A;
  Vector b;

  AveInstance() = default;
  AveInstance(Matrix a, Vector rhs) : A(std::move(a)), b(std::move(rhs)) { validate(); }

  std::size_t n() const noexcept { return A.rows(); }

  void validate() const {
    if (!A.square()) throw linalg::DimensionError("AveInstance: A must be square");
    if (b.size() != A.rows()) throw linalg::DimensionError("AveInstance: b length differs from n");
    if (!linalg::all_finite(A) || !linalg::all_finite(b))
      throw std::invalid_argument("AveInstance: entries must be finite");
  }
};

/// Orthant label s in {-1, +1}^n. Orthants are ordered lexicographically
/// with +1 before -1, so index 0 is the nonnegative orthant.
class SignVector {
 public:
  SignVector() = default;
  explicit SignVector(std::vector<int> s) : s_(std::move(s)) {
    for (int v : s_)
      if (v != 1 && v != -1) throw std::invalid_argument("SignVector: entries must be +1 or -1");
  }
  static SignVector all_plus(std::size_t n) { return SignVector(std::vector<int>(n, 1)); }

  static SignVector from_index(std::size_t n, std::uint64_t k) {
    std::vector<int> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = ((k >> (n - 1 - i)) & 1u) ? -1 : 1;
    return SignVector(std::move(s));
  }
  std::uint64_t index() const {
    std::uint64_t k = 0;
    for (int v : s_) k = (k << 1) | (v < 0 ? 1u : 0u);
    return k;
  }

  std::size_t size() const noexcept { return s_.size(); }
  int operator[](std::size_t i) const { return s_[i]; }
  const std::vector<int>& values() const noexcept { return s_; }

  Vector as_vector() const { return Vector(s_.begin(), s_.end()); }
  Matrix diag() const {
    Vector v = as_vector();
    return Matrix::diagonal(v);
  }
  /// "+-+" style label.
  std::string str() const {
    std::string out;
    for (int v : s_) out += v > 0 ? '+' : '-';
    return out;
  }
  /// True when D_s x >= -tol.
  bool contains(std::span<const double> x, double tol = kOrthantTol) const {
    for (std::size_t i = 0; i < s_.size(); ++i)
      if (s_[i] * x[i] < -tol) return false;
    return true;
  }

  friend bool operator==(const SignVector&, const SignVector&) = default;

 private:
  std::vector<int> s_;
};

inline std::uint64_t orthant_count(std::size_t n) { return std::uint64_t{1} << n; }

/// A + D_s.
inline Matrix shifted(const Matrix& a, std::span<const double> d) {
  Matrix m = a;
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) += d[i];
  return m;
}
inline Matrix shifted(const Matrix& a, const SignVector& s) {
  Vector d = s.as_vector();
  return shifted(a, std::span<const double>(d));
}

enum class PieceStatus { Empty, Point, Polytope, Unbounded };

inline const char* to_string(PieceStatus s) {
  switch (s) {
    case PieceStatus::Empty: return "empty";
    case PieceStatus::Point: return "point";
    case PieceStatus::Polytope: return "polytope";
    case PieceStatus::Unbounded: return "unbounded";
  }
  return "?";
}

/// The part of the solution set inside one closed orthant.
struct OrthantPiece {
  SignVector s;
  PieceStatus status = PieceStatus::Empty;
  std::size_t dim = 0;
  std::vector<Vector> vertices;
  std::vector<Vector> rays;  // extreme rays, ||r||_inf = 1
  bool matrix_singular = false;
  /// Other orthants whose closure contains the whole piece.
  std::vector<SignVector> also_in;

  bool empty() const noexcept { return status == PieceStatus::Empty; }
};

struct SolutionSetDescription {
  std::size_t n = 0;
  std::vector<OrthantPiece> pieces;  // maximal nonempty pieces, lexicographic s order
  bool is_empty = true;
  bool is_finite = true;
  bool is_bounded = true;
  bool sign_consistent = true;
  bool is_connected = true;
  std::optional<SignVector> common_orthant;  // set when sign_consistent and nonempty
  std::size_t components = 0;
  std::vector<Vector> points;  // deduplicated, only when finite
  std::size_t infinite_orthant_count = 0;
};

// ---------------------------------------------------------------------------

/// Ax + |x| - b.
inline Vector residual(const AveInstance& inst, std::span<const double> x) {
  if (x.size() != inst.n()) throw linalg::DimensionError("residual: x length differs from n");
  Vector r = inst.A * x;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += std::abs(x[i]) - inst.b[i];
  return r;
}

inline bool is_solution(const AveInstance& inst, std::span<const double> x, double tol = 1e-8) {
  if (x.size() != inst.n()) return false;
  return linalg::norm_inf(residual(inst, x)) <= tol;
}

namespace detail {

inline void push_unique(std::vector<Vector>& pts, Vector p, double tol = kDedupTol) {
  for (const auto& q : pts)
    if (linalg::norm_inf(linalg::sub(p, q)) <= tol) return;
  pts.push_back(std::move(p));
}

/// Flushes entries within tol of zero (including -0) to +0.
inline void clean_zeros(Vector& v, double tol) {
  for (double& x : v)
    if (std::abs(x) <= tol) x = 0.0;
}

/// Calls f(indices) for every k-subset of {0..n-1} in lexicographic order.
template <typename F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (k > n) return;
  for (;;) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Greedily selects a maximal set of linearly independent rows.
inline std::vector<std::size_t> independent_rows(const Matrix& m) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Matrix sub(rows.size() + 1, m.cols());
    for (std::size_t k = 0; k < rows.size(); ++k)
      for (std::size_t j = 0; j < m.cols(); ++j) sub(k, j) = m(rows[k], j);
    for (std::size_t j = 0; j < m.cols(); ++j) sub(rows.size(), j) = m(i, j);
    if (linalg::rank(sub) == rows.size() + 1) rows.push_back(i);
  }
  return rows;
}

inline std::size_t affine_dimension(const std::vector<Vector>& vertices,
                                    const std::vector<Vector>& rays, std::size_t n) {
  if (vertices.empty()) return 0;
  const std::size_t count = vertices.size() - 1 + rays.size();
  if (count == 0) return 0;
  Matrix m(count, n);
  std::size_t k = 0;
  for (std::size_t v = 1; v < vertices.size(); ++v, ++k)
    for (std::size_t j = 0; j < n; ++j) m(k, j) = vertices[v][j] - vertices[0][j];
  for (const auto& r : rays) {
    for (std::size_t j = 0; j < n; ++j) m(k, j) = r[j];
    ++k;
  }
  return linalg::rank(m, 1e-8);
}

/// LP with (A + D_s) x = b and D_s x >= 0, D_t x >= 0 for each extra t.
inline lp::LinearProgram orthant_program(const AveInstance& inst, const SignVector& s,
                                         const std::vector<const SignVector*>& extra = {}) {
  const std::size_t n = inst.n();
  const Matrix m = shifted(inst.A, s);
  lp::LinearProgram prog(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vector row(m.row(i).begin(), m.row(i).end());
    prog.add(std::move(row), lp::Relation::Equal, inst.b[i]);
  }
  auto restrict = [&](const SignVector& t) {
    for (std::size_t i = 0; i < n; ++i) {
      if (t[i] > 0)
        prog.set_lower(i, 0.0);
      else
        prog.set_upper(i, 0.0);
    }
  };
  restrict(s);
  for (const SignVector* t : extra) restrict(*t);
  return prog;
}

}  // namespace detail

/// Solution set inside the closed orthant D_s x >= 0.
inline OrthantPiece orthant_piece(const AveInstance& inst, const SignVector& s) {
  const std::size_t n = inst.n();
  if (s.size() != n) throw linalg::DimensionError("orthant_piece: sign vector length differs from n");
  OrthantPiece piece;
  piece.s = s;
  const Matrix mx = shifted(inst.A, s);
  const double scale = 1.0 + linalg::norm_inf(inst.b);

  linalg::LuDecomposition lu(mx);
  if (!lu.singular()) {
    Vector x = *linalg::lu_factor_solve(mx, inst.b);
    if (!s.contains(x)) return piece;
    detail::clean_zeros(x, 1e-13 * scale);
    piece.status = PieceStatus::Point;
    piece.vertices.push_back(std::move(x));
    return piece;
  }
  piece.matrix_singular = true;

  const lp::LinearProgram prog = detail::orthant_program(inst, s);
  const auto witness = lp::feasible(prog);
  if (!witness) return piece;

  // y-coordinates: M y = b, y >= 0 with M = (A + D_s) D_s.
  Matrix my = mx;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) my(i, j) *= s[j];
  const auto rows = detail::independent_rows(my);
  const std::size_t r = rows.size();

  auto to_x = [&](Vector y) {
    for (std::size_t j = 0; j < n; ++j) y[j] *= s[j];
    detail::clean_zeros(y, 0.0);
    return y;
  };

  if (r == 0) {
    piece.vertices.push_back(Vector(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
      Vector d(n, 0.0);
      d[j] = 1.0;
      piece.rays.push_back(to_x(std::move(d)));
    }
  } else {
    Vector b_r(r);
    for (std::size_t k = 0; k < r; ++k) b_r[k] = inst.b[rows[k]];
    detail::for_each_subset(n, r, [&](const std::vector<std::size_t>& basis) {
      Matrix sub(r, r);
      for (std::size_t k = 0; k < r; ++k)
        for (std::size_t c = 0; c < r; ++c) sub(k, c) = my(rows[k], basis[c]);
      linalg::LuDecomposition slu(sub, 1e-9);
      if (slu.singular()) return;

      Vector yb = slu.solve(b_r);
      Vector y(n, 0.0);
      for (std::size_t c = 0; c < r; ++c) y[basis[c]] = yb[c];
      if (linalg::nonnegative(y, kOrthantTol) &&
          linalg::norm_inf(linalg::sub(my * y, inst.b)) <= 1e-9 * scale) {
        detail::clean_zeros(y, 1e-13 * scale);
        for (double& v : y) v = std::max(v, 0.0);
        detail::push_unique(piece.vertices, to_x(std::move(y)));
      }

      std::vector<bool> in_basis(n, false);
      for (auto c : basis) in_basis[c] = true;
      for (std::size_t j = 0; j < n; ++j) {
        if (in_basis[j]) continue;
        Vector col(r);
        for (std::size_t k = 0; k < r; ++k) col[k] = my(rows[k], j);
        Vector db = slu.solve(col);
        Vector d(n, 0.0);
        d[j] = 1.0;
        for (std::size_t c = 0; c < r; ++c) d[basis[c]] = -db[c];
        if (!linalg::nonnegative(d, 1e-9)) continue;
        for (double& v : d) v = std::max(v, 0.0);
        const double nrm = linalg::norm_inf(d);
        for (double& v : d) v /= nrm;
        detail::clean_zeros(d, 1e-13);
        detail::push_unique(piece.rays, to_x(std::move(d)), 1e-9);
      }
    });
  }

  if (piece.vertices.empty()) piece.vertices.push_back(*witness);
  piece.dim = detail::affine_dimension(piece.vertices, piece.rays, n);
  if (!piece.rays.empty())
    piece.status = PieceStatus::Unbounded;
  else if (piece.vertices.size() == 1)
    piece.status = PieceStatus::Point;
  else
    piece.status = PieceStatus::Polytope;
  return piece;
}

/// Census of orthants that hold infinitely many solutions.
struct OrthantCensus {
  std::size_t count = 0;           // nonempty pieces that are not a single point
  std::uint64_t orthants = 0;      // 2^n
  std::vector<SignVector> infinite;
  bool all_orthants = false;       // count == 2^n; never possible
  bool at_maximum = false;         // count == 2^n - 1
  bool b_zero = false;
  bool det_is_diagonal_product = false;
  bool unit_diagonal = false;
  /// False when the census contradicts the known structure results.
  bool consistent = true;
};

namespace detail {

inline OrthantCensus census_from(const AveInstance& inst, const std::vector<OrthantPiece>& raw) {
  OrthantCensus c;
  c.orthants = orthant_count(inst.n());
  for (const auto& p : raw)
    if (!p.empty() && p.status != PieceStatus::Point) {
      ++c.count;
      c.infinite.push_back(p.s);
    }
  c.all_orthants = c.count == c.orthants;
  c.at_maximum = c.count + 1 == c.orthants;
  c.b_zero = linalg::norm_inf(inst.b) <= 1e-12;
  double prod = 1.0;
  c.unit_diagonal = true;
  for (std::size_t i = 0; i < inst.n(); ++i) {
    prod *= inst.A(i, i);
    if (std::abs(std::abs(inst.A(i, i)) - 1.0) > 1e-9) c.unit_diagonal = false;
  }
  c.det_is_diagonal_product =
      std::abs(linalg::det(inst.A) - prod) <= 1e-9 * std::max(1.0, std::abs(prod));
  c.consistent = !c.all_orthants &&
                 (!c.at_maximum || (c.b_zero && c.det_is_diagonal_product && c.unit_diagonal));
  return c;
}

inline void check_limit(const AveInstance& inst, std::size_t enum_limit) {
  inst.validate();
  if (inst.n() > enum_limit || inst.n() > 30)
    throw std::invalid_argument("dimension " + std::to_string(inst.n()) +
                                " exceeds the enumeration limit " + std::to_string(enum_limit));
}

inline std::vector<OrthantPiece> all_pieces(const AveInstance& inst) {
  std::vector<OrthantPiece> raw;
  const auto total = orthant_count(inst.n());
  raw.reserve(total);
  for (std::uint64_t k = 0; k < total; ++k)
    raw.push_back(orthant_piece(inst, SignVector::from_index(inst.n(), k)));
  return raw;
}

inline bool piece_in_orthant(const OrthantPiece& p, const SignVector& t) {
  for (const auto& v : p.vertices)
    if (!t.contains(v)) return false;
  for (const auto& r : p.rays)
    if (!t.contains(r)) return false;
  return true;
}

}  // namespace detail

inline OrthantCensus infinite_orthant_census(const AveInstance& inst,
                                             std::size_t enum_limit = kDefaultEnumLimit) {
  detail::check_limit(inst, enum_limit);
  return detail::census_from(inst, detail::all_pieces(inst));
}

/// Whole solution set: visits every orthant, keeps the maximal pieces, and
/// derives the finiteness, boundedness, sign-consistency (convexity) and
/// connectedness flags.
inline SolutionSetDescription enumerate_solution_set(const AveInstance& inst,
                                                     std::size_t enum_limit = kDefaultEnumLimit) {
  detail::check_limit(inst, enum_limit);
  const std::size_t n = inst.n();
  std::vector<OrthantPiece> raw = detail::all_pieces(inst);

  SolutionSetDescription out;
  out.n = n;
  out.infinite_orthant_count = detail::census_from(inst, raw).count;

  std::vector<std::size_t> nonempty;
  for (std::size_t k = 0; k < raw.size(); ++k)
    if (!raw[k].empty()) nonempty.push_back(k);

  // P_s is a subset of P_t exactly when P_s lies in the closed orthant t.
  const std::size_t m = nonempty.size();
  std::vector<std::vector<bool>> inside(m, std::vector<bool>(m, false));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t c = 0; c < m; ++c)
      if (a != c) inside[a][c] = detail::piece_in_orthant(raw[nonempty[a]], raw[nonempty[c]].s);

  for (std::size_t a = 0; a < m; ++a) {
    bool keep = true;
    for (std::size_t c = 0; c < m && keep; ++c) {
      if (a == c || !inside[a][c]) continue;
      if (!inside[c][a] || c < a) keep = false;
    }
    if (!keep) continue;
    OrthantPiece p = raw[nonempty[a]];
    for (std::size_t c = 0; c < m; ++c)
      if (c != a && inside[a][c]) p.also_in.push_back(raw[nonempty[c]].s);
    out.pieces.push_back(std::move(p));
  }

  out.is_empty = out.pieces.empty();
  out.is_finite = std::all_of(out.pieces.begin(), out.pieces.end(),
                              [](const OrthantPiece& p) { return p.status == PieceStatus::Point; });
  out.is_bounded = std::all_of(out.pieces.begin(), out.pieces.end(),
                               [](const OrthantPiece& p) { return p.rays.empty(); });

  // Sign consistency: every coordinate keeps one sign over all vertices and rays.
  std::vector<int> common(n, 1);
  for (std::size_t i = 0; i < n && out.sign_consistent; ++i) {
    bool has_pos = false, has_neg = false;
    for (const auto& p : out.pieces) {
      for (const auto& v : p.vertices) {
        has_pos |= v[i] > kOrthantTol;
        has_neg |= v[i] < -kOrthantTol;
      }
      for (const auto& r : p.rays) {
        has_pos |= r[i] > kOrthantTol;
        has_neg |= r[i] < -kOrthantTol;
      }
    }
    if (has_pos && has_neg) out.sign_consistent = false;
    common[i] = has_neg ? -1 : 1;
  }
  if (out.sign_consistent && !out.is_empty) out.common_orthant = SignVector(common);

  // Connectedness through pairwise intersections of pieces.
  const std::size_t k = out.pieces.size();
  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t c = a + 1; c < k; ++c) {
      if (find(a) == find(c)) continue;
      const auto& pa = out.pieces[a];
      const auto& pc = out.pieces[c];
      bool touch = std::any_of(pa.vertices.begin(), pa.vertices.end(),
                               [&](const Vector& v) { return pc.s.contains(v); }) ||
                   std::any_of(pc.vertices.begin(), pc.vertices.end(),
                               [&](const Vector& v) { return pa.s.contains(v); });
      if (!touch) touch = lp::feasible(detail::orthant_program(inst, pa.s, {&pc.s})).has_value();
      if (touch) parent[find(a)] = find(c);
    }
  for (std::size_t a = 0; a < k; ++a)
    if (find(a) == a) ++out.components;
  out.is_connected = out.components <= 1;

  if (out.is_finite)
    for (const auto& p : out.pieces) detail::push_unique(out.points, p.vertices.front());
  return out;
}

/// sgn with a zero band: |x| <= tol maps to 0.
inline std::vector<int> sign_pattern(std::span<const double> x, double tol = 0.0) {
  std::vector<int> s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] > tol ? 1 : (x[i] < -tol ? -1 : 0);
  return s;
}

/// A solution x* is isolated iff A + D_s is nonsingular for every orthant s
/// whose closure contains x*.
inline bool is_isolated(const AveInstance& inst, std::span<const double> x_star,
                        double tol = 1e-8) {
  if (!is_solution(inst, x_star, tol))
    throw std::invalid_argument("is_isolated: point is not a solution");
  const std::size_t n = inst.n();
  const std::vector<int> sstar = sign_pattern(x_star, tol);
  std::vector<std::size_t> zeros;
  for (std::size_t i = 0; i < n; ++i)
    if (sstar[i] == 0) zeros.push_back(i);
  if (zeros.size() > 30) throw std::invalid_argument("is_isolated: too many zero coordinates");
  Vector d(n);
  for (std::uint64_t k = 0; k < orthant_count(zeros.size()); ++k) {
    for (std::size_t i = 0; i < n; ++i) d[i] = sstar[i];
    for (std::size_t z = 0; z < zeros.size(); ++z)
      d[zeros[z]] = ((k >> (zeros.size() - 1 - z)) & 1u) ? -1.0 : 1.0;
    if (linalg::is_singular(shifted(inst.A, std::span<const double>(d)))) return false;
  }
  return true;
}

}  // namespace ave
