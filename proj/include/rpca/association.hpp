#pragma once

#include <cstddef>
#include <span>

#include "rpca/linalg.hpp"
#include "rpca/matrix.hpp"
#include "rpca/parallel.hpp"

namespace rpca {

struct MeanCovariance {
  Vector mean;
  ScatterMatrix covariance;  // divisor n − 1
};

/// Columnwise mean and unbiased covariance. Throws InsufficientData for n < 2.
MeanCovariance sample_mean_cov(const DataMatrix& x);

/// (x − mean)ᵀ V⁻¹ (x − mean). Throws SingularScatter if V is not positive definite.
double mahalanobis_sq(std::span<const double> x, std::span<const double> mean,
                      const ScatterMatrix& v);
double mahalanobis_sq(std::span<const double> x, std::span<const double> mean,
                      const Cholesky& v);

/// Score function ω in w(d) = ω(d)/d.
enum class WeightKind {
  Huber,     // ω(d) = min(d, d₀)
  Campbell,  // ω(d) = d for d ≤ d₀, else d₀·exp(−(d − d₀)²/(2b²))
};

struct WeightFunction {
  WeightKind kind = WeightKind::Huber;
  double cutoff = 1.0;    // d₀, Mahalanobis-distance units
  double redescend = 1.25;  // b, Campbell only

  /// w(d) = ω(d)/d; equals 1 exactly for d ≤ d₀.
  double weight(double d) const;

  /// Huber with d₀ = sqrt of the 0.95 chi-square quantile on p degrees of freedom.
  static WeightFunction huber(std::size_t p, double coverage = 0.95);
  /// Redescending score with d₀ = √p + b₁/√2 (b₁ = 2) and b = 1.25.
  static WeightFunction campbell(std::size_t p, double b1 = 2.0, double b2 = 1.25);
};

/// Inverse standard normal CDF (Acklam's rational approximation, |error| < 1.2e-9).
double normal_quantile(double prob);
/// Wilson–Hilferty approximation to the chi-square quantile.
double chi_square_quantile(double prob, double dof);

struct RobustLocationScatter {
  Vector mean;
  ScatterMatrix covariance;
  Vector weights;  // w_m in [0, 1]
  int iterations = 0;
  bool converged = false;
};

/// Reweighted M-estimate of location and scatter.
///
/// Starts from the sample mean and covariance, then alternates: distances d_m
/// under the current (mean, V); weights w_m = ω(d_m)/d_m; mean as the w-weighted
/// average; V = Σ w_m²(x_m − mean)(x_m − mean)ᵀ / (Σ w_m² − 1), centered at the
/// updated mean. Stops when the largest change in mean (in units of the largest
/// standard deviation) and in V (relative to its largest diagonal) is ≤ tol.
/// Throws SingularScatter if V loses positive definiteness.
RobustLocationScatter m_estimate(const DataMatrix& x, const WeightFunction& w,
                                 double tol = 1e-8, int max_iter = 200);

/// Pearson correlation matrix. Throws DegenerateColumn on a zero-variance column.
ScatterMatrix pearson_corr_matrix(const DataMatrix& x, Parallelism par = {});

/// Average ranks (1-based) of a sample; tied values share the mean of their ranks.
Vector average_ranks(std::span<const double> z);

/// Spearman ρ = (12ΣR(x)R(y) − 3n(n+1)²)/(n³ − n) over average ranks.
double spearman(std::span<const double> x, std::span<const double> y);
ScatterMatrix spearman_corr_matrix(const DataMatrix& x, Parallelism par = {});

/// Kendall τ = 2(C − D)/(n(n−1)); pairs tied in either coordinate count toward neither.
double kendall(std::span<const double> x, std::span<const double> y);
ScatterMatrix kendall_corr_matrix(const DataMatrix& x, Parallelism par = {});

/// Σ_ij = s_i s_j R_ij: puts a correlation matrix back on a covariance scale.
ScatterMatrix rescale_correlation(const ScatterMatrix& r, std::span<const double> scales);

}  // namespace rpca
