#pragma once

#include <cstdint>
#include <span>

#include "rpca/matrix.hpp"
#include "rpca/parallel.hpp"
#include "rpca/pca.hpp"

namespace rpca {

// Maximum-entropy PCA: find an orthonormal U (p×m) maximizing the kernel estimate
// of the Rényi quadratic entropy of the projected sample,
//
//   H(U) = −log( (1/n²) Σ_i Σ_j G(Uᵀx_j − Uᵀx_i, σ²) ),
//
// by the fixed-point update U ← orth((I + β X L(U) Xᵀ) U), where L = D − W is the
// Laplacian of the normalized kernel affinities. The bandwidth σ² is the mean
// squared pairwise projected distance divided by a scale factor s, recomputed
// from every candidate U.

struct MaxEntConfig {
  std::size_t components = 1;
  double scale_factor = 2.0;
  double beta0 = 0.1;
  double tol = 1e-6;
  int max_iter = 300;
  /// Start from a seeded random orthonormal basis instead of classical PCA.
  bool random_init = false;
  std::uint64_t seed = 0;
  Parallelism parallel;
};

struct MaxEntState {
  Matrix u;  // p×m, orthonormal columns
  double sigma_sq = 1.0;
  double objective = 0.0;
  double beta = 0.1;
  Vector trace;  // objective after each accepted step, initial value first
  bool stalled = false;
  bool degenerate_bandwidth = false;
  int accepted = 0;
};

/// (2π)^(−m/2) · exp(−‖z‖²/(2σ²)), m = z.size(). The normalizer carries no σ^m
/// factor, which shifts H by a constant only.
double gaussian_kernel(std::span<const double> z, double sigma_sq);

/// Rows of (X − 1·centerᵀ)·U.
Matrix project(const DataMatrix& x, const Matrix& u, std::span<const double> center = {});

/// H(U) with σ² held fixed; the double sum includes the i = j terms.
double entropy_objective(const DataMatrix& x, const Matrix& u, double sigma_sq, Parallelism par = {});

struct Bandwidth {
  double sigma_sq = 0.0;
  bool degenerate = false;  // raw value fell below 1e-12 and was clamped
};

/// σ² = (1/(s n²)) Σ_i Σ_j ‖Uᵀx_i − Uᵀx_j‖², clamped below at 1e-12.
Bandwidth bandwidth(const DataMatrix& x, const Matrix& u, double scale_factor);

struct GraphMatrices {
  Matrix w;  // W_ij = G_ij / (σ² Σ_ab G_ab)
  Matrix l;  // D − W, D_ii = Σ_j W_ij
};

GraphMatrices graph_matrices(const DataMatrix& x, const Matrix& u, double sigma_sq, Parallelism par = {});

/// X_c L(U) X_cᵀ U with X_c the column-centered data (p×n). At fixed σ² the
/// Euclidean gradient of H is twice this.
Matrix entropy_ascent_direction(const DataMatrix& x, const Matrix& u, double sigma_sq,
                                Parallelism par = {});

/// State at U: bandwidth and objective evaluated there, β = beta0.
MaxEntState initial_state(const DataMatrix& x, Matrix u, const MaxEntConfig& cfg);

/// One accepted step (or a stall). The candidate is orth((I + βX_cLX_cᵀ)U) with σ²
/// recomputed at the candidate; it is accepted iff its objective is ≥ the current
/// one, after which β grows by 1.5 (capped at 10·beta0). On rejection β halves,
/// up to 30 times, after which the returned state is marked stalled.
MaxEntState fixed_point_step(const DataMatrix& x, const MaxEntState& state, const MaxEntConfig& cfg);

/// Centers by column means, starts from classical PCA (or random) loadings and
/// iterates until the relative objective change is ≤ tol, a stall, or max_iter.
/// Eigenvalues are the variances of the projected coordinates.
PcaModel fit_maxent(const DataMatrix& x, const MaxEntConfig& cfg);

/// Random p×m orthonormal basis from the seeded normal stream.
Matrix random_orthonormal(std::size_t p, std::size_t m, std::uint64_t seed);

}  // namespace rpca
