#pragma once

#include <span>

#include "rpca/matrix.hpp"

namespace rpca {

struct SpectralDecomposition {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // column k pairs with eigenvalues[k]
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations (at most 100 sweeps).
///
/// Eigenvalues are sorted descending. Each eigenvector is oriented so that its
/// largest-magnitude component is positive (first such component on ties).
/// Throws InvalidInput on non-finite entries, NoConvergence past the sweep cap.
SpectralDecomposition eig_symmetric(const ScatterMatrix& a);
SpectralDecomposition eig_symmetric(const Matrix& a);

/// Orthonormal basis for the column span of `u` (d×m, m ≤ d): the left singular
/// vectors, computed by one-sided Jacobi. Column order follows the rotations, so an
/// already-orthonormal input comes back unchanged up to rounding.
/// Throws RankDeficient when a singular value falls below 1e-12 of the largest.
Matrix svd_orthonormalize(const Matrix& u);

/// Singular values of `a`, descending.
Vector singular_values(const Matrix& a);

/// Flips each column so that its largest-magnitude entry is positive.
void canonicalize_signs(Matrix& columns);

/// Cholesky factorization of a symmetric positive definite matrix.
class Cholesky {
 public:
  /// Throws SingularScatter if `a` is not numerically positive definite.
  explicit Cholesky(const Matrix& a);

  Vector solve(std::span<const double> b) const;
  /// bᵀ A⁻¹ b without forming A⁻¹.
  double inverse_quadratic(std::span<const double> b) const;

 private:
  Matrix lower_;
};

}  // namespace rpca
