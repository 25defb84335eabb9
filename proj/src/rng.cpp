#include "evolint/rng.hpp"

#include <cmath>
#include <numbers>

namespace evolint {

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> SplitMix64::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  // Rejection keeps the distribution exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t v = next();
  while (v >= limit) v = next();
  return v % bound;
}

Eigen::MatrixXcd haar_unitary(Eigen::Index n, SplitMix64& rng) {
  Eigen::MatrixXcd z(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) z(r, c) = rng.complex_normal();

  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (Eigen::Index c = 0; c < n; ++c) {
    const std::complex<double> d = r(c, c);
    const double mag = std::abs(d);
    const std::complex<double> phase = mag > 0.0 ? d / mag : 1.0;
    q.col(c) *= phase;
  }
  return q;
}

Eigen::MatrixXcd haar_unitary(Eigen::Index n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return haar_unitary(n, rng);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  SplitMix64 mix(base ^ (salt * 0xD1B54A32D192ED03ULL));
  return mix.next();
}

}  // namespace evolint
