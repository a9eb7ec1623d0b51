#include "rpca/association.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rpca/error.hpp"

namespace rpca {

MeanCovariance sample_mean_cov(const DataMatrix& x) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  require(n >= 2, ErrorCode::InsufficientData, "sample covariance needs n >= 2");
  Vector mean(p, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) mean[j] += x(i, j);
  for (double& m : mean) m /= static_cast<double>(n);

  Matrix cov(p, p);
  Vector dev(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) dev[j] = x(i, j) - mean[j];
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a; b < p; ++b) cov(a, b) += dev[a] * dev[b];
  }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a; b < p; ++b) {
      cov(a, b) /= denom;
      cov(b, a) = cov(a, b);
    }
  return {std::move(mean), ScatterMatrix(std::move(cov))};
}

double mahalanobis_sq(std::span<const double> x, std::span<const double> mean,
                      const Cholesky& v) {
  require(x.size() == mean.size(), ErrorCode::DimMismatch, "mahalanobis: length mismatch");
  Vector dev(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) dev[j] = x[j] - mean[j];
  return v.inverse_quadratic(dev);
}

double mahalanobis_sq(std::span<const double> x, std::span<const double> mean,
                      const ScatterMatrix& v) {
  return mahalanobis_sq(x, mean, Cholesky(v.matrix()));
}

double WeightFunction::weight(double d) const {
  if (d <= cutoff) return 1.0;
  switch (kind) {
    case WeightKind::Huber: return cutoff / d;
    case WeightKind::Campbell: {
      const double excess = d - cutoff;
      return cutoff / d * std::exp(-excess * excess / (2.0 * redescend * redescend));
    }
  }
  return 1.0;
}

WeightFunction WeightFunction::huber(std::size_t p, double coverage) {
  return {WeightKind::Huber, std::sqrt(chi_square_quantile(coverage, static_cast<double>(p))), 0.0};
}

WeightFunction WeightFunction::campbell(std::size_t p, double b1, double b2) {
  return {WeightKind::Campbell, std::sqrt(static_cast<double>(p)) + b1 / std::sqrt(2.0), b2};
}

double normal_quantile(double prob) {
  require(prob > 0.0 && prob < 1.0, ErrorCode::InvalidInput, "normal_quantile: prob outside (0,1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double low = 0.02425;
  if (prob < low) {
    const double q = std::sqrt(-2.0 * std::log(prob));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (prob > 1.0 - low) return -normal_quantile(1.0 - prob);
  const double q = prob - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double chi_square_quantile(double prob, double dof) {
  require(dof > 0.0, ErrorCode::InvalidInput, "chi_square_quantile: dof must be positive");
  const double h = 2.0 / (9.0 * dof);
  const double t = 1.0 - h + normal_quantile(prob) * std::sqrt(h);
  return dof * t * t * t;
}

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_diagonal(const Matrix& v) {
  double m = 0.0;
  for (std::size_t i = 0; i < v.rows(); ++i) m = std::max(m, v(i, i));
  return m;
}

}  // namespace

RobustLocationScatter m_estimate(const DataMatrix& x, const WeightFunction& wf, double tol,
                                 int max_iter) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  require(n > p, ErrorCode::InsufficientData, "m_estimate needs more observations than variables");
  require(std::isfinite(wf.cutoff) && wf.cutoff > 0.0, ErrorCode::InvalidInput,
          "weight cutoff must be finite and positive");

  auto start = sample_mean_cov(x);
  RobustLocationScatter out;
  out.mean = std::move(start.mean);
  out.covariance = std::move(start.covariance);
  out.weights.assign(n, 1.0);

  Vector dev(p);
  for (int it = 1; it <= max_iter; ++it) {
    out.iterations = it;
    const Cholesky chol(out.covariance.matrix());
    for (std::size_t m = 0; m < n; ++m) {
      const double d = std::sqrt(mahalanobis_sq(x.row(m), out.mean, chol));
      out.weights[m] = wf.weight(d);
    }

    double wsum = 0.0;
    double w2sum = 0.0;
    Vector mean(p, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
      const double w = out.weights[m];
      wsum += w;
      w2sum += w * w;
      for (std::size_t j = 0; j < p; ++j) mean[j] += w * x(m, j);
    }
    require(wsum > 0.0 && w2sum > 1.0, ErrorCode::SingularScatter,
            "weights collapsed; scatter is undefined");
    for (double& v : mean) v /= wsum;

    Matrix cov(p, p);
    for (std::size_t m = 0; m < n; ++m) {
      const double w2 = out.weights[m] * out.weights[m];
      if (w2 == 0.0) continue;
      for (std::size_t j = 0; j < p; ++j) dev[j] = x(m, j) - mean[j];
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = a; b < p; ++b) cov(a, b) += w2 * dev[a] * dev[b];
    }
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a; b < p; ++b) {
        cov(a, b) /= (w2sum - 1.0);
        cov(b, a) = cov(a, b);
      }

    const double scale = max_diagonal(cov);
    require(scale > 0.0 && cov.all_finite(), ErrorCode::SingularScatter,
            "robust scatter degenerated to zero");
    Vector dmean(p);
    for (std::size_t j = 0; j < p; ++j) dmean[j] = mean[j] - out.mean[j];
    const double change = std::max(max_abs(dmean) / std::sqrt(scale),
                                   max_abs_diff(cov, out.covariance.matrix()) / scale);
    out.mean = std::move(mean);
    out.covariance = ScatterMatrix(std::move(cov));
    if (change <= tol) {
      out.converged = true;
      break;
    }
  }
  // Leave V usable downstream; a singular final scatter is reported here.
  (void)Cholesky(out.covariance.matrix());
  return out;
}

ScatterMatrix pearson_corr_matrix(const DataMatrix& x, Parallelism par) {
  const auto [mean, cov] = sample_mean_cov(x);
  const std::size_t p = x.cols();
  for (std::size_t j = 0; j < p; ++j)
    require(cov(j, j) > 0.0, ErrorCode::DegenerateColumn, "pearson: zero-variance column");
  Matrix r = Matrix::identity(p);
  // Each pair is computed from its own centered sums.
  const std::size_t pairs = p * (p - 1) / 2;
  Vector values(pairs);
  std::vector<std::pair<std::size_t, std::size_t>> index;
  index.reserve(pairs);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a + 1; b < p; ++b) index.emplace_back(a, b);
  parallel_for(pairs, par, [&](std::size_t k) {
    const auto [a, b] = index[k];
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const double da = x(i, a) - mean[a];
      const double db = x(i, b) - mean[b];
      sab += da * db;
      saa += da * da;
      sbb += db * db;
    }
    values[k] = std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
  });
  for (std::size_t k = 0; k < pairs; ++k) {
    r(index[k].first, index[k].second) = values[k];
    r(index[k].second, index[k].first) = values[k];
  }
  return ScatterMatrix(std::move(r));
}

Vector average_ranks(std::span<const double> z) {
  const std::size_t n = z.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });
  Vector ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && z[order[j + 1]] == z[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

namespace {

double spearman_from_ranks(std::span<const double> rx, std::span<const double> ry) {
  // Ranks are multiples of 1/2, so the numerator and denominator are exact and
  // the quotient is correctly rounded.
  const double n = static_cast<double>(rx.size());
  const double s = dot(rx, ry);
  const double rho = (12.0 * s - 3.0 * n * (n + 1.0) * (n + 1.0)) / (n * n * n - n);
  return std::clamp(rho, -1.0, 1.0);
}

template <class PairFn>
ScatterMatrix pairwise_matrix(std::size_t p, Parallelism par, PairFn&& fn) {
  std::vector<std::pair<std::size_t, std::size_t>> index;
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a + 1; b < p; ++b) index.emplace_back(a, b);
  Vector values(index.size());
  parallel_for(index.size(), par, [&](std::size_t k) { values[k] = fn(index[k].first, index[k].second); });
  Matrix r = Matrix::identity(p);
  for (std::size_t k = 0; k < index.size(); ++k) {
    r(index[k].first, index[k].second) = values[k];
    r(index[k].second, index[k].first) = values[k];
  }
  return ScatterMatrix(std::move(r));
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorCode::DimMismatch, "spearman: length mismatch");
  require(x.size() >= 2, ErrorCode::InsufficientData, "spearman needs n >= 2");
  return spearman_from_ranks(average_ranks(x), average_ranks(y));
}

ScatterMatrix spearman_corr_matrix(const DataMatrix& x, Parallelism par) {
  require(x.rows() >= 2, ErrorCode::InsufficientData, "spearman needs n >= 2");
  std::vector<Vector> ranks(x.cols());
  parallel_for(x.cols(), par, [&](std::size_t j) { ranks[j] = average_ranks(x.col(j)); });
  return pairwise_matrix(x.cols(), par, [&](std::size_t a, std::size_t b) {
    return spearman_from_ranks(ranks[a], ranks[b]);
  });
}

double kendall(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorCode::DimMismatch, "kendall: length mismatch");
  const std::size_t n = x.size();
  require(n >= 2, ErrorCode::InsufficientData, "kendall needs n >= 2");
  long long s = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0 || dy == 0.0) continue;
      s += ((dx > 0.0) == (dy > 0.0)) ? 1 : -1;
    }
  }
  const double nn = static_cast<double>(n);
  return 2.0 * static_cast<double>(s) / (nn * (nn - 1.0));
}

ScatterMatrix kendall_corr_matrix(const DataMatrix& x, Parallelism par) {
  require(x.rows() >= 2, ErrorCode::InsufficientData, "kendall needs n >= 2");
  std::vector<Vector> cols(x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) cols[j] = x.col(j);
  return pairwise_matrix(x.cols(), par,
                         [&](std::size_t a, std::size_t b) { return kendall(cols[a], cols[b]); });
}

ScatterMatrix rescale_correlation(const ScatterMatrix& r, std::span<const double> scales) {
  require(scales.size() == r.dim(), ErrorCode::DimMismatch, "rescale_correlation: length mismatch");
  Matrix s(r.dim(), r.dim());
  for (std::size_t a = 0; a < r.dim(); ++a)
    for (std::size_t b = 0; b < r.dim(); ++b) s(a, b) = scales[a] * scales[b] * r(a, b);
  return ScatterMatrix(std::move(s));
}

}  // namespace rpca
