#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lrpgd/types.hpp"

namespace lrpgd {

// Reproducible random stream.
//
// Bits come from std::mt19937_64, whose output sequence is fixed by the C++
// standard. Conversions are done here rather than through <random>
// distributions, which are implementation defined:
//
//   uniform()  = ((x >> 11) + 0.5) * 2^-53,   strictly inside (0, 1)
//   normal()   = Box-Muller on two consecutive uniforms u1, u2:
//                sqrt(-2 ln u1) cos(2 pi u2), then sqrt(-2 ln u1) sin(2 pi u2)
//   below(n)   = floor(uniform() * n)
//
// Matrices are filled in row-major order (row 0 left to right, then row 1...).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double normal();
  std::uint64_t below(std::uint64_t n);

  MatrixXd gaussian(Index rows, Index cols);
  /// Real and imaginary parts independent standard normals (real part drawn first).
  MatrixXcd complex_gaussian(Index rows, Index cols);

  /// k distinct indices from [0, n), in draw order (partial Fisher-Yates).
  std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n, std::uint64_t k);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool hasSpare_ = false;
};

/// SplitMix64 mix of (seed, stream) used to derive independent sub-seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace lrpgd
