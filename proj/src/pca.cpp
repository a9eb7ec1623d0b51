#include "rpca/pca.hpp"

#include <algorithm>
#include <numeric>

#include "rpca/error.hpp"
#include "rpca/linalg.hpp"
#include "rpca/location_scale.hpp"

namespace rpca {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::Classical: return "classical";
    case Method::MCov: return "mcov";
    case Method::Spearman: return "spearman";
    case Method::Kendall: return "kendall";
    case Method::PpMad: return "pp-mad";
    case Method::PpQn: return "pp-qn";
    case Method::MaxEnt: return "maxent";
  }
  return "unknown";
}

std::string_view to_string(ScatterSource s) noexcept {
  switch (s) {
    case ScatterSource::Covariance: return "covariance";
    case ScatterSource::Correlation: return "correlation";
    case ScatterSource::None: return "none";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
  for (Method m : {Method::Classical, Method::MCov, Method::Spearman, Method::Kendall,
                   Method::PpMad, Method::PpQn, Method::MaxEnt})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

PcaModel pca_from_scatter(Vector center, const ScatterMatrix& s, std::size_t k, Method method,
                          ScatterSource source) {
  require(k >= 1 && k <= s.dim(), ErrorCode::InvalidK, "component count must be in [1, p]");
  require(center.size() == s.dim(), ErrorCode::DimMismatch, "center length differs from scatter dim");
  auto eig = eig_symmetric(s);
  PcaModel model;
  model.center = std::move(center);
  model.loadings = eig.eigenvectors.left_cols(k);
  model.eigenvalues.assign(eig.eigenvalues.begin(), eig.eigenvalues.begin() + static_cast<std::ptrdiff_t>(k));
  for (double& l : model.eigenvalues) l = std::max(l, 0.0);
  model.method = method;
  model.scatter_source = source;
  return model;
}

PcaModel fit_classical(const DataMatrix& x, bool use_correlation, std::size_t k) {
  auto mc = sample_mean_cov(x);
  if (use_correlation)
    return pca_from_scatter(std::move(mc.mean), pearson_corr_matrix(x), k, Method::Classical,
                            ScatterSource::Correlation);
  return pca_from_scatter(std::move(mc.mean), mc.covariance, k, Method::Classical,
                          ScatterSource::Covariance);
}

PcaModel fit_rank(const DataMatrix& x, Method method, std::size_t k, const RankPcaOptions& opts) {
  require(method == Method::Spearman || method == Method::Kendall, ErrorCode::InvalidInput,
          "fit_rank takes Spearman or Kendall");
  const std::size_t p = x.cols();
  Vector center(p);
  for (std::size_t j = 0; j < p; ++j) center[j] = median(x.col(j));
  ScatterMatrix r = method == Method::Spearman ? spearman_corr_matrix(x, opts.parallel)
                                               : kendall_corr_matrix(x, opts.parallel);
  if (opts.scatter == RankScatter::Correlation)
    return pca_from_scatter(std::move(center), r, k, method, ScatterSource::Correlation);

  Vector scales(p);
  for (std::size_t j = 0; j < p; ++j) {
    scales[j] = mad(x.col(j));
    require(scales[j] > 0.0, ErrorCode::DegenerateColumn, "column has zero MAD");
  }
  return pca_from_scatter(std::move(center), rescale_correlation(r, scales), k, method,
                          ScatterSource::Covariance);
}

PcaModel fit_mcov(const DataMatrix& x, std::size_t k, const MCovOptions& opts) {
  const WeightFunction w = opts.weight.value_or(WeightFunction::campbell(x.cols()));
  auto est = m_estimate(x, w, opts.tol, opts.max_iter);
  PcaModel model = pca_from_scatter(std::move(est.mean), est.covariance, k, Method::MCov,
                                    ScatterSource::Covariance);
  model.diagnostics.iterations = est.iterations;
  model.diagnostics.converged = est.converged;
  return model;
}

Matrix scores(const PcaModel& model, const DataMatrix& x) {
  const std::size_t p = model.dim();
  require(x.cols() == p && model.center.size() == p, ErrorCode::DimMismatch,
          "data and model dimensions differ");
  const std::size_t k = model.components();
  Matrix out(x.rows(), k);
  Vector dev(p);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < p; ++j) dev[j] = x(i, j) - model.center[j];
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < p; ++j) s += model.loadings(j, c) * dev[j];
      out(i, c) = s;
    }
  }
  return out;
}

Matrix reconstruct(const PcaModel& model, const Matrix& s) {
  require(s.cols() == model.components(), ErrorCode::DimMismatch, "score width differs from k");
  Matrix out = s * model.loadings.transpose();
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += model.center[j];
  return out;
}

void sort_components(PcaModel& model) {
  const std::size_t k = model.components();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return model.eigenvalues[a] > model.eigenvalues[b];
  });
  Matrix loadings(model.dim(), k);
  Vector values(k);
  for (std::size_t c = 0; c < k; ++c) {
    values[c] = model.eigenvalues[order[c]];
    for (std::size_t j = 0; j < model.dim(); ++j) loadings(j, c) = model.loadings(j, order[c]);
  }
  model.loadings = std::move(loadings);
  model.eigenvalues = std::move(values);
}

}  // namespace rpca
