#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace evolint {

/// SplitMix64 generator.
///
/// State transition: `state += 0x9E3779B97F4A7C15`, then the output is the
/// state passed through the finalizer
///
///     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///     z =  z ^ (z >> 31)
///
/// Uniform doubles take the top 53 bits: `(next() >> 11) * 2^-53`, which
/// lies in [0, 1). Gaussian samples use the basic Box-Muller transform on
/// two consecutive uniforms (u1 mapped to (0, 1] as `1 - u1`), returning the
/// cosine branch only, so every normal() consumes exactly two outputs.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  double uniform();
  double normal();
  /// Real and imaginary parts independent N(0, 1/2), so E|z|^2 = 1.
  std::complex<double> complex_normal();
  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

/// Haar-distributed n x n unitary: QR of a complex Gaussian matrix with the
/// phases of R's diagonal moved into Q. Entries are drawn row-major.
Eigen::MatrixXcd haar_unitary(Eigen::Index n, SplitMix64& rng);
Eigen::MatrixXcd haar_unitary(Eigen::Index n, std::uint64_t seed);

/// Derives an independent stream seed from a base seed and a salt.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt);

}  // namespace evolint
