#pragma once

#include <cstdint>
#include <random>

#include "sspvip/linalg.hpp"

// Seeded randomness for the generator and the sampling audits. The engine is
// std::mt19937_64 (bit stream pinned by the standard); the mappings to
// doubles are written out here instead of using std::*_distribution so the
// produced streams are identical across standard library implementations.

namespace sspvip {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    // 53 random bits into [0,1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller; one value per call, the pair's twin is discarded to keep the
  // stream position independent of call parity.
  double normal() {
    double u1 = uniform01(), u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  std::uint64_t integer() { return engine_(); }

  Vec uniform_vec(std::size_t n, double lo, double hi) {
    Vec v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

  Vec normal_vec(std::size_t n) {
    Vec v(n);
    for (auto& x : v) x = normal();
    return v;
  }

  Matrix normal_matrix(std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (auto& x : m.data) x = normal();
    return m;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sspvip
