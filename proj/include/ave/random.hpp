#pragma once

// Reproducible random numbers for generators and probes.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are not (their algorithms are
// implementation-defined), so the conversions to doubles and integers are
// done here: a double in [0, 1) takes the top 53 bits of one engine draw.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "ave/linalg.hpp"

namespace ave {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  /// Uniform integer in [lo, hi] (hi - lo small compared to 2^64).
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  linalg::Vector vector(std::size_t n, double lo, double hi) {
    linalg::Vector v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }
  linalg::Matrix matrix(std::size_t rows, std::size_t cols, double lo, double hi) {
    linalg::Matrix m(rows, cols);
    for (double& x : m.data()) x = uniform(lo, hi);
    return m;
  }
  linalg::Matrix integer_matrix(std::size_t rows, std::size_t cols, int lo, int hi) {
    linalg::Matrix m(rows, cols);
    for (double& x : m.data()) x = static_cast<double>(integer(lo, hi));
    return m;
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ave
