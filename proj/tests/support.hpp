#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "rpca/matrix.hpp"
#include "rpca/random.hpp"

namespace rpca::test {

inline Matrix gaussian_matrix(std::size_t rows, std::size_t cols, NormalStream& rng) {
  Matrix m(rows, cols);
  for (double& v : m.values()) v = rng.next();
  return m;
}

inline Matrix random_symmetric(std::size_t p, NormalStream& rng) {
  Matrix g = gaussian_matrix(p, p, rng);
  return 0.5 * (g + g.transpose());
}

/// Random orthogonal matrix from Gram–Schmidt on a Gaussian matrix.
inline Matrix random_orthogonal(std::size_t p, NormalStream& rng) {
  Matrix q = gaussian_matrix(p, p, rng);
  for (std::size_t c = 0; c < p; ++c) {
    for (std::size_t prev = 0; prev < c; ++prev) {
      double d = 0.0;
      for (std::size_t r = 0; r < p; ++r) d += q(r, c) * q(r, prev);
      for (std::size_t r = 0; r < p; ++r) q(r, c) -= d * q(r, prev);
    }
    double n = 0.0;
    for (std::size_t r = 0; r < p; ++r) n += q(r, c) * q(r, c);
    n = std::sqrt(n);
    for (std::size_t r = 0; r < p; ++r) q(r, c) /= n;
  }
  return q;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool same_bits(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    if (std::bit_cast<std::uint64_t>(a.values()[i]) != std::bit_cast<std::uint64_t>(b.values()[i])) return false;
  return true;
}

inline bool same_bits(const Vector& a, const Vector& b) {
  return same_bits(Matrix(1, a.size(), a), Matrix(1, b.size(), b));
}

}  // namespace rpca::test
