// Command-line front end: solve, classify, export-pieces, gen, scan.
//
// Exit codes: 0 ok, 1 usage or parse error, 2 undecided, 3 solution set
// proven empty.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ave/ave.hpp"

namespace {

using ave::io::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUndecided = 2;
constexpr int kExitEmpty = 3;

struct Options {
  double tol = 1e-8;
  std::size_t enum_limit = ave::kDefaultEnumLimit;
  std::size_t convexity_limit = ave::kDefaultConvexityLimit;
  bool json_out = false;
  bool csv_out = false;
  std::uint64_t seed = 1;
  bool timing = false;
  std::string output;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + '"';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const Options& o, const std::string& text) {
  if (o.output.empty() || o.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw UsageError("cannot write " + o.output);
  out << text;
}

ave::io::InstanceFile load(const std::string& path, bool require_b) {
  const std::string text = read_file(path);
  try {
    return ave::io::parse_instance(text, require_b);
  } catch (const ave::io::ParseError& e) {
    throw ave::io::ParseError(e.line(), e.column(), e.message() + " (in " + path + ")");
  }
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int cmd_solve(const Options& o, const std::string& path) {
  const auto f = load(path, true);
  Stopwatch clock;
  ave::SolveLimits limits;
  limits.enum_limit = o.enum_limit;
  const auto out = ave::solve_auto(f.inst, limits);

  if (o.csv_out) {
    ave::SolutionSetDescription d;
    if (out.set) {
      d = *out.set;
    } else if (out.solution) {
      ave::OrthantPiece p;
      std::vector<int> s;
      for (double x : *out.solution) s.push_back(x < 0 ? -1 : 1);
      p.s = out.orthant.value_or(ave::SignVector(s));
      p.status = ave::PieceStatus::Point;
      p.vertices.push_back(*out.solution);
      d.pieces.push_back(p);
    }
    write_output(o, ave::io::pieces_csv(d));
  } else {
    json j;
    j["instance"] = ave::io::instance_echo(f);
    j["outcome"] = ave::io::to_json(out);
    if (out.solution)
      j["verified"] = ave::is_solution(f.inst, *out.solution, o.tol);
    if (o.timing) j["timing_ms"] = clock.ms();
    write_output(o, j.dump(2) + "\n");
  }
  switch (out.status) {
    case ave::SolveStatus::Undecided: return kExitUndecided;
    case ave::SolveStatus::Unsolvable: return kExitEmpty;
    default: return kExitOk;
  }
}

int cmd_classify(const Options& o, const std::string& path) {
  const auto f = load(path, false);
  Stopwatch clock;
  const auto report = ave::full_classification(f.inst.A, {o.enum_limit, o.convexity_limit});
  if (o.csv_out) {
    std::string text = "predicate,value,method\n";
    for (const auto& [k, v] : report) text += csv_field(k) + ',' + ave::to_string(v.value) + ',' + csv_field(v.method) + '\n';
    write_output(o, text);
  } else {
    json j;
    j["instance"] = ave::io::instance_echo(f);
    j["classification"] = ave::io::to_json(report);
    if (o.timing) j["timing_ms"] = clock.ms();
    write_output(o, j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_export(const Options& o, const std::string& path) {
  const auto f = load(path, true);
  if (f.inst.n() != 2) throw UsageError("export-pieces needs n = 2, got n = " + std::to_string(f.inst.n()));
  write_output(o, ave::io::pieces_csv(ave::enumerate_solution_set(f.inst, o.enum_limit)));
  return kExitOk;
}

std::vector<std::uint64_t> parse_naturals(const std::string& text) {
  std::vector<std::uint64_t> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw UsageError("--v expects comma-separated natural numbers");
    v.push_back(std::stoull(item));
  }
  if (v.empty()) throw UsageError("--v is empty");
  return v;
}

int cmd_gen(const Options& o, const std::string& kind, const std::string& v_text, std::size_t n) {
  ave::io::InstanceFile f;
  f.seed = o.seed;
  if (kind == "subset-sum") {
    const auto v = parse_naturals(v_text);
    if (v.size() > 20) throw UsageError("--v holds at most 20 numbers");
    const auto s = ave::oracle::subset_sum_instance(v);
    f.inst = ave::AveInstance(s.A, ave::Vector(v.size(), 0.0));
    f.name = "subset-sum " + v_text;
    f.expected["finiteness_all_b"] = s.expected_finiteness;
    f.expected["boundedness_all_b"] = s.expected_boundedness;
    if (s.witness) f.expected["witness"] = *s.witness;
    f.seed.reset();
  } else if (kind == "convexity-gadget") {
    const auto v = parse_naturals(v_text);
    if (v.size() > 20) throw UsageError("--v holds at most 20 numbers");
    const auto g = ave::oracle::convexity_gadget(v);
    f.inst = g.inst;
    f.name = "convexity gadget " + v_text;
    f.expected["convex"] = g.expected_convex;
    if (g.point_plus) {
      f.expected["point_plus"] = *g.point_plus;
      f.expected["point_minus"] = *g.point_minus;
    }
    f.seed.reset();
  } else if (kind == "inverse-nonneg") {
    if (n == 0) throw UsageError("--n must be positive");
    const auto g = ave::oracle::inverse_nonneg_generator(n, o.seed);
    f.inst = g.inst;
    f.name = "inverse-nonneg n=" + std::to_string(n);
    f.expected["inverse_nonneg_interval"] = true;
  } else if (kind == "random") {
    if (n == 0) throw UsageError("--n must be positive");
    f.inst = ave::oracle::random_instance(n, o.seed);
    f.name = "random n=" + std::to_string(n);
  } else {
    throw UsageError("unknown generator kind '" + kind + "'");
  }
  write_output(o, ave::io::emit_instance(f));
  return kExitOk;
}

int cmd_scan(const Options& o, const std::string& path, const std::vector<double>& box, double step,
             double threshold) {
  const auto f = load(path, true);
  if (f.inst.n() != 2) throw UsageError("scan needs n = 2");
  if (box.size() != 4) throw UsageError("--box expects x_lo,x_hi,y_lo,y_hi");
  const auto g = ave::oracle::residual_grid_scan(f.inst, {{box[0], box[1]}, {box[2], box[3]}}, step,
                                                 threshold);
  std::string text = "x,y,residual\n";
  char buf[128];
  for (const auto& [x, r] : g.hits) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.3g\n", x[0], x[1], r);
    text += buf;
  }
  write_output(o, text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Absolute value equations Ax + |x| = b: solve, classify, export, generate"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--tol", o.tol, "Residual tolerance for verifying solutions")->capture_default_str();
  app.add_option("--enum-limit", o.enum_limit, "Largest n for orthant enumeration")->capture_default_str();
  app.add_option("--convexity-limit", o.convexity_limit,
                 "Largest n for the convexity and auxiliary-LP condition searches")
      ->capture_default_str();
  auto* json_flag = app.add_flag("--json", o.json_out, "JSON output (default)");
  app.add_flag("--csv", o.csv_out, "CSV output")->excludes(json_flag);
  app.add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  app.add_flag("--timing", o.timing, "Add wall-clock timing to reports");
  app.add_option("-o,--output", o.output, "Output file (default stdout)");

  std::string path;
  auto* solve = app.add_subcommand("solve", "Solve an instance");
  solve->add_option("instance", path, "Instance file")->required();
  auto* classify = app.add_subcommand("classify", "Classify the matrix of an instance");
  classify->add_option("instance", path, "Instance file")->required();
  auto* exporter = app.add_subcommand("export-pieces", "Write the solution-set pieces as CSV (n = 2)");
  exporter->add_option("instance", path, "Instance file")->required();

  std::string kind, v_text;
  std::size_t n = 0;
  auto* gen = app.add_subcommand("gen", "Generate an instance with expected properties");
  gen->add_option("kind", kind, "subset-sum | convexity-gadget | inverse-nonneg | random")->required();
  gen->add_option("--v", v_text, "Natural numbers for subset-sum and convexity-gadget, e.g. 2,3,4");
  gen->add_option("--n", n, "Dimension for inverse-nonneg and random");

  std::vector<double> box{-3, 3, -3, 3};
  double step = 0.01, threshold = 0.02;
  auto* scan = app.add_subcommand("scan", "Residual grid scan of a 2-D instance (CSV)");
  scan->add_option("instance", path, "Instance file")->required();
  scan->add_option("--box", box, "x_lo,x_hi,y_lo,y_hi")->delimiter(',')->capture_default_str();
  scan->add_option("--step", step, "Grid step")->capture_default_str();
  scan->add_option("--threshold", threshold, "Residual threshold")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*solve) return cmd_solve(o, path);
    if (*classify) return cmd_classify(o, path);
    if (*exporter) return cmd_export(o, path);
    if (*gen) return cmd_gen(o, kind, v_text, n);
    if (*scan) return cmd_scan(o, path, box, step, threshold);
  } catch (const ave::io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitError;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
