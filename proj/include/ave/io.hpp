#pragma once

// Instance files, JSON reports and the pieces CSV.
//
// Instance files are JSON objects with keys n, A (nested rows or a flat
// row-major list), b, and optional name, seed, expected. Numbers are written
// with 17 significant digits so that parse(emit(x)) reproduces every double.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ave/classify.hpp"
#include "ave/core.hpp"
#include "ave/solvers.hpp"

namespace ave::io {

using json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column),
        message_(what) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_, column_;
  std::string message_;
};

struct InstanceFile {
  AveInstance inst;
  std::string name;
  std::optional<std::uint64_t> seed;
  json expected = json::object();
  /// False when the file had no b (zeros were filled in).
  bool has_b = true;
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

/// Position of a top-level key, for diagnostics on well-formed JSON.
inline std::pair<std::size_t, std::size_t> key_position(const std::string& text, const std::string& key) {
  const auto at = text.find("\"" + key + "\"");
  return line_col(text, at == std::string::npos ? 0 : at);
}

inline double number(const json& j, const std::string& text, const std::string& key) {
  if (!j.is_number()) {
    auto [l, c] = key_position(text, key);
    throw ParseError(l, c, "'" + key + "' must contain numbers");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    auto [l, c] = key_position(text, key);
    throw ParseError(l, c, "'" + key + "' contains a non-finite number");
  }
  return v;
}

inline std::string fmt(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Parses an instance file. Throws ParseError with a 1-based line/column.
inline InstanceFile parse_instance(const std::string& text, bool require_b = true) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t off = e.byte > 0 ? e.byte - 1 : 0;
    auto [l, c] = detail::line_col(text, off);
    std::string msg = e.what();
    if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ParseError(l, c, msg);
  }
  if (!j.is_object()) throw ParseError(1, 1, "instance must be a JSON object");
  auto fail = [&](const std::string& key, const std::string& what) {
    auto [l, c] = detail::key_position(text, key);
    throw ParseError(l, c, what);
  };

  if (!j.contains("A")) fail("A", "missing key 'A'");
  const json& ja = j["A"];
  if (!ja.is_array()) fail("A", "'A' must be an array");

  std::optional<std::size_t> n;
  if (j.contains("n")) {
    if (!j["n"].is_number_unsigned()) fail("n", "'n' must be a nonnegative integer");
    n = j["n"].get<std::size_t>();
  }
  std::vector<double> flat;
  std::size_t rows = 0;
  const bool nested = !ja.empty() && ja.front().is_array();
  if (nested) {
    rows = ja.size();
    for (const auto& row : ja) {
      if (!row.is_array() || row.size() != rows) fail("A", "'A' must be a square array of rows");
      for (const auto& v : row) flat.push_back(detail::number(v, text, "A"));
    }
  } else {
    for (const auto& v : ja) flat.push_back(detail::number(v, text, "A"));
    if (n) {
      rows = *n;
    } else {
      rows = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(flat.size()))));
    }
    if (rows * rows != flat.size()) fail("A", "flat 'A' must hold n*n entries");
  }
  if (n && *n != rows) fail("n", "'n' disagrees with the size of 'A'");

  InstanceFile f;
  Vector b(rows, 0.0);
  if (j.contains("b")) {
    const json& jb = j["b"];
    if (!jb.is_array() || jb.size() != rows) fail("b", "'b' must be an array of length n");
    for (std::size_t i = 0; i < rows; ++i) b[i] = detail::number(jb[i], text, "b");
  } else if (require_b) {
    fail("b", "missing key 'b'");
  } else {
    f.has_b = false;
  }
  f.inst = AveInstance(Matrix(rows, rows, std::move(flat)), std::move(b));
  if (j.contains("name")) {
    if (!j["name"].is_string()) fail("name", "'name' must be a string");
    f.name = j["name"].get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("seed", "'seed' must be a nonnegative integer");
    f.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("expected")) {
    if (!j["expected"].is_object()) fail("expected", "'expected' must be an object");
    f.expected = j["expected"];
  }
  return f;
}

/// Writes an instance file; numbers use 17 significant digits.
inline std::string emit_instance(const InstanceFile& f) {
  const auto& inst = f.inst;
  const std::size_t n = inst.n();
  std::ostringstream out;
  out << "{\n";
  if (!f.name.empty()) out << "  \"name\": " << json(f.name).dump() << ",\n";
  out << "  \"n\": " << n << ",\n  \"A\": [";
  for (std::size_t i = 0; i < n; ++i) {
    out << (i ? ",\n        [" : "[");
    for (std::size_t k = 0; k < n; ++k) out << (k ? ", " : "") << detail::fmt(inst.A(i, k));
    out << "]";
  }
  out << "],\n  \"b\": [";
  for (std::size_t i = 0; i < n; ++i) out << (i ? ", " : "") << detail::fmt(inst.b[i]);
  out << "]";
  if (f.seed) out << ",\n  \"seed\": " << *f.seed;
  if (!f.expected.empty()) out << ",\n  \"expected\": " << f.expected.dump();
  out << "\n}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Reports

inline json to_json(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(x == 0.0 ? 0.0 : x);
  return a;
}
inline json to_json(const Matrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}
inline json to_json(const std::vector<Vector>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

inline json to_json(const Verdict& v) {
  json j;
  j["value"] = to_string(v.value);
  j["method"] = v.method;
  if (!v.note.empty()) j["note"] = v.note;
  const auto& c = v.certificate;
  if (!c.empty()) {
    json cj = json::object();
    for (const auto& [k, s] : c.signs) cj[k] = s.str();
    for (const auto& [k, x] : c.vectors) cj[k] = to_json(x);
    for (const auto& [k, m] : c.matrices) cj[k] = to_json(m);
    for (const auto& [k, x] : c.scalars) cj[k] = x;
    j["certificate"] = cj;
  }
  return j;
}

inline json to_json(const ClassificationReport& r) {
  json j = json::object();
  for (const auto& [k, v] : r) j[k] = to_json(v);
  return j;
}

inline json to_json(const OrthantPiece& p) {
  json j;
  j["s"] = p.s.str();
  j["status"] = to_string(p.status);
  j["dim"] = p.dim;
  j["vertices"] = to_json(p.vertices);
  j["rays"] = to_json(p.rays);
  j["matrix_singular"] = p.matrix_singular;
  if (!p.also_in.empty()) {
    json a = json::array();
    for (const auto& s : p.also_in) a.push_back(s.str());
    j["also_in"] = a;
  }
  return j;
}

inline json to_json(const SolutionSetDescription& d) {
  json j;
  j["is_empty"] = d.is_empty;
  j["is_finite"] = d.is_finite;
  j["is_bounded"] = d.is_bounded;
  j["sign_consistent"] = d.sign_consistent;
  j["is_connected"] = d.is_connected;
  j["components"] = d.components;
  if (d.common_orthant) j["common_orthant"] = d.common_orthant->str();
  j["infinite_orthant_count"] = d.infinite_orthant_count;
  if (d.is_finite) j["points"] = to_json(d.points);
  json pieces = json::array();
  for (const auto& p : d.pieces) pieces.push_back(to_json(p));
  j["pieces"] = pieces;
  return j;
}

inline json to_json(const SolveOutcome& o) {
  json j;
  j["status"] = to_string(o.status);
  j["method"] = o.method;
  if (o.solution) j["solution"] = to_json(*o.solution);
  j["unique"] = o.unique;
  if (o.orthant) j["orthant"] = o.orthant->str();
  if (o.iterations) {
    j["iterations"] = o.iterations;
    j["converged"] = o.converged;
  }
  for (const auto& [k, v] : o.diagnostics) j["diagnostics"][k] = v;
  if (o.set) j["solution_set"] = to_json(*o.set);
  json certs = json::array();
  for (const auto& [k, v] : o.certificates) {
    json c = to_json(v);
    c["name"] = k;
    certs.push_back(c);
  }
  j["certificates"] = certs;
  return j;
}

inline json instance_echo(const InstanceFile& f) {
  json j;
  if (!f.name.empty()) j["name"] = f.name;
  j["n"] = f.inst.n();
  j["A"] = to_json(f.inst.A);
  if (f.has_b) j["b"] = to_json(f.inst.b);
  return j;
}

// ---------------------------------------------------------------------------
// CSV

namespace detail {

inline std::string point_list(const std::vector<Vector>& pts) {
  std::string out;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k) out += ';';
    for (std::size_t i = 0; i < pts[k].size(); ++i) {
      if (i) out += ' ';
      out += fmt(pts[k][i]);
    }
  }
  return out;
}

}  // namespace detail

/// One row per maximal piece, lexicographic s order. Vertices and rays are
/// ';'-separated points with space-separated coordinates.
inline std::string pieces_csv(const SolutionSetDescription& d) {
  std::string out = "s,status,dim,vertices,rays\n";
  for (const auto& p : d.pieces) {
    out += p.s.str() + ',' + to_string(p.status) + ',' + std::to_string(p.dim) + ',' +
           detail::point_list(p.vertices) + ',' + detail::point_list(p.rays) + '\n';
  }
  return out;
}

}  // namespace ave::io
