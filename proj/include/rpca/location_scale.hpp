#pragma once

#include <cstddef>
#include <span>

#include "rpca/error.hpp"
#include "rpca/matrix.hpp"

namespace rpca {

/// Dispersion measure S used as a projection index.
enum class ScaleKind { Variance, Mad, Qn };

/// Which order statistic of the C(n,2) pairwise distances Qn reports.
enum class QnRank {
  FloorQuarter,  // k = max(1, floor(C(n,2)/4))
  CeilQuarter,   // k = max(1, ceil(C(n,2)/4))
  HalfSample,    // k = C(h,2), h = floor(n/2) + 1
};

struct ScaleOptions {
  double mad_constant = 1.48;
  double qn_constant = 2.22;
  QnRank qn_rank = QnRank::FloorQuarter;
};

/// Midpoint of the two central order statistics for even n. Throws EmptyInput.
double median(std::span<const double> z);

/// mad_constant · med_j |z_j − med_i z_i|. Throws InsufficientData for n < 2.
double mad(std::span<const double> z, double constant = 1.48);

/// One-based rank into the sorted pairwise distances used by qn.
std::size_t qn_order_index(std::size_t n, QnRank rank = QnRank::FloorQuarter);

/// The k-th smallest of {|z_i − z_j| : i < j}, exact, in O(n log n).
double kth_pairwise_distance(std::span<const double> z, std::size_t k);

/// qn_constant · (k-th smallest pairwise distance). Throws InsufficientData for n < 2.
double qn(std::span<const double> z, const ScaleOptions& opts = {});

/// Unbiased sample variance. Throws InsufficientData for n < 2.
double variance_sq(std::span<const double> z);

/// S² for the given kind: variance, or the squared MAD/Qn scale.
double scale_sq(ScaleKind kind, std::span<const double> z, const ScaleOptions& opts = {});

struct L1MedianResult {
  Vector center;
  int iterations = 0;
  bool converged = false;
};

/// Geometric median by Weiszfeld iteration, started at the coordinatewise median.
/// Stops once the step norm is at most 1e-8·(1+‖μ‖); at most 500 iterations.
L1MedianResult l1_median_iterate(const DataMatrix& x, int max_iter = 500);

/// Thrown by l1_median when the iteration cap is hit.
class L1MedianNoConvergence : public Error {
 public:
  explicit L1MedianNoConvergence(Vector last)
      : Error(ErrorCode::NoConvergence, "Weiszfeld iteration hit its cap"),
        last_(std::move(last)) {}
  const Vector& last_iterate() const noexcept { return last_; }

 private:
  Vector last_;
};

Vector l1_median(const DataMatrix& x);

}  // namespace rpca
