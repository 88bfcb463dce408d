#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace witnesskit {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/// Seeded generator. Child streams are derived from the parent seed and a
/// fixed label, so adding draws in one subsystem leaves the others untouched.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(detail::splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  Rng split(std::string_view label) const {
    return Rng(detail::splitmix64(seed_ ^ detail::fnv1a(label)));
  }
  Rng split(std::string_view label, std::uint64_t index) const {
    return Rng(detail::splitmix64(detail::splitmix64(seed_ ^ detail::fnv1a(label)) + index));
  }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return normal_(engine_); }

  /// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
  Complex complex_normal() {
    const double s = std::numbers::sqrt2 / 2.0;
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

  /// Random point of the unit circle away from the real axis.
  Complex unit_gamma() {
    for (;;) {
      const double theta = 2.0 * std::numbers::pi * uniform();
      if (std::abs(std::sin(theta)) > 0.1) return std::polar(1.0, theta);
    }
  }

  CMatrix complex_matrix(Eigen::Index rows, Eigen::Index cols) {
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
    return m;
  }

  CVector complex_vector(Eigen::Index n) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
  }

  /// Haar-like unitary from the QR factorization of a Gaussian matrix.
  CMatrix unitary(Eigen::Index n) {
    Eigen::HouseholderQR<CMatrix> qr(complex_matrix(n, n));
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    return q;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace witnesskit
