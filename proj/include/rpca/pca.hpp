#pragma once

#include <optional>
#include <string_view>

#include "rpca/association.hpp"
#include "rpca/matrix.hpp"
#include "rpca/parallel.hpp"

namespace rpca {

enum class Method { Classical, MCov, Spearman, Kendall, PpMad, PpQn, MaxEnt };
enum class ScatterSource { Covariance, Correlation, None };

std::string_view to_string(Method m) noexcept;
std::string_view to_string(ScatterSource s) noexcept;
/// Parses the command-line spelling ("classical", "pp-mad", ...).
std::optional<Method> parse_method(std::string_view name) noexcept;

struct FitDiagnostics {
  int iterations = 0;
  bool converged = true;
  /// Projection pursuit stopped early because every trial vector vanished.
  bool truncated = false;
  /// MaxEnt: no step size improved the objective.
  bool stalled = false;
  /// Projection pursuit: λ̂_k in the order the components were found.
  Vector discovered_eigenvalues;
  /// MaxEnt: objective after each accepted step, starting with the initial value.
  Vector objective_trace;
};

struct PcaModel {
  Vector center;
  Matrix loadings;  // p×k, orthonormal columns
  Vector eigenvalues;
  Method method = Method::Classical;
  ScatterSource scatter_source = ScatterSource::Covariance;
  FitDiagnostics diagnostics;

  std::size_t dim() const noexcept { return loadings.rows(); }
  std::size_t components() const noexcept { return loadings.cols(); }
};

/// Top-k eigenpairs of `s`. Negative eigenvalues are clamped to zero.
/// Throws InvalidK unless 1 ≤ k ≤ p.
PcaModel pca_from_scatter(Vector center, const ScatterMatrix& s, std::size_t k,
                          Method method = Method::Classical,
                          ScatterSource source = ScatterSource::Covariance);

/// Sample mean plus sample covariance (or Pearson correlation when requested).
PcaModel fit_classical(const DataMatrix& x, bool use_correlation, std::size_t k);

/// How a rank-correlation matrix becomes the scatter handed to the eigensolver.
enum class RankScatter {
  Correlation,  // eigen-analysis of the rank correlation matrix itself
  MadScaled,    // Σ_ij = MAD_i · MAD_j · R_ij
};

struct RankPcaOptions {
  RankScatter scatter = RankScatter::MadScaled;
  Parallelism parallel;
};

/// Spearman or Kendall PCA, centered at the coordinatewise median.
PcaModel fit_rank(const DataMatrix& x, Method method, std::size_t k, const RankPcaOptions& opts = {});

struct MCovOptions {
  std::optional<WeightFunction> weight;  // default: WeightFunction::campbell(p)
  double tol = 1e-8;
  int max_iter = 200;
};

/// PCA on the reweighted M-estimate of location and scatter.
PcaModel fit_mcov(const DataMatrix& x, std::size_t k, const MCovOptions& opts = {});

/// Row i = loadingsᵀ(x_i − center). Throws DimMismatch.
Matrix scores(const PcaModel& model, const DataMatrix& x);

/// center + loadings · score for every row of `s`.
Matrix reconstruct(const PcaModel& model, const Matrix& s);

/// Permutes components so eigenvalues are descending (stable).
void sort_components(PcaModel& model);

}  // namespace rpca
