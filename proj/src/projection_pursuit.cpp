#include "rpca/projection_pursuit.hpp"

#include <algorithm>
#include <cmath>

#include "rpca/error.hpp"
#include "rpca/linalg.hpp"

namespace rpca {

DeflatedData DeflatedData::centered(const DataMatrix& x, std::span<const double> center) {
  require(center.size() == x.cols(), ErrorCode::DimMismatch, "center length differs from p");
  DeflatedData d;
  d.vectors = x.matrix();
  double largest = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto r = d.vectors.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] -= center[j];
    largest = std::max(largest, norm2(r));
  }
  d.norm_scale = std::max(1.0, largest);
  return d;
}

double DeflatedData::zero_threshold() const noexcept { return 1e-12 * std::max(1.0, norm_scale); }

Matrix trial_directions(const DeflatedData& d) {
  const double threshold = d.zero_threshold();
  std::vector<double> values;
  std::size_t count = 0;
  const std::size_t p = d.vectors.cols();
  for (std::size_t i = 0; i < d.vectors.rows(); ++i) {
    const auto r = d.vectors.row(i);
    const double nr = norm2(r);
    if (nr <= threshold) continue;
    for (double v : r) values.push_back(v / nr);
    ++count;
  }
  if (count == 0) throw Error(ErrorCode::DegenerateStage, "every stage vector is numerically zero");
  return Matrix(count, p, std::move(values));
}

PpStep pp_step(const DeflatedData& d, ScaleKind scale, const ScaleOptions& opts, Parallelism par) {
  const double threshold = d.zero_threshold();
  std::vector<std::size_t> source;
  for (std::size_t i = 0; i < d.vectors.rows(); ++i)
    if (norm2(d.vectors.row(i)) > threshold) source.push_back(i);
  const Matrix dirs = trial_directions(d);

  const std::size_t n = d.vectors.rows();
  Vector index_value(dirs.rows());
  parallel_for(dirs.rows(), par, [&](std::size_t t) {
    Vector proj(n);
    const auto a = dirs.row(t);
    for (std::size_t i = 0; i < n; ++i) proj[i] = dot(a, d.vectors.row(i));
    index_value[t] = scale_sq(scale, proj, opts);
  });

  std::size_t best = 0;
  for (std::size_t t = 1; t < dirs.rows(); ++t)
    if (index_value[t] > index_value[best]) best = t;
  const auto a = dirs.row(best);
  return {Vector(a.begin(), a.end()), index_value[best], source[best]};
}

DeflatedData deflate(const DeflatedData& d, std::span<const double> a) {
  require(a.size() == d.vectors.cols(), ErrorCode::DimMismatch, "direction length differs from p");
  require(std::abs(norm2(a) - 1.0) <= 1e-10, ErrorCode::InvalidDirection, "direction is not unit length");
  DeflatedData out = d;
  for (std::size_t i = 0; i < out.vectors.rows(); ++i) {
    auto r = out.vectors.row(i);
    const double c = dot(a, r);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] -= c * a[j];
  }
  ++out.stage;
  return out;
}

namespace {

// Removes components along earlier directions and renormalizes.
Vector reorthogonalize(Vector a, const std::vector<Vector>& previous) {
  for (const Vector& q : previous) {
    const double c = dot(q, a);
    for (std::size_t j = 0; j < a.size(); ++j) a[j] -= c * q[j];
  }
  const double nr = norm2(a);
  for (double& v : a) v /= nr;
  return a;
}

}  // namespace

PcaModel fit_pp(const DataMatrix& x, const PpConfig& cfg) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  require(n >= 2, ErrorCode::InsufficientData, "projection pursuit needs n >= 2");
  require(p <= n, ErrorCode::InvalidInput, "projection pursuit assumes p <= n");
  require(cfg.scale == ScaleKind::Mad || cfg.scale == ScaleKind::Qn, ErrorCode::InvalidInput,
          "projection pursuit scale must be MAD or Qn");
  require(cfg.components >= 1 && cfg.components <= std::min(n, p), ErrorCode::InvalidK,
          "component count must be in [1, min(n, p)]");

  const auto center = l1_median_iterate(x);
  PcaModel model;
  model.center = center.center;
  model.method = cfg.scale == ScaleKind::Mad ? Method::PpMad : Method::PpQn;
  model.scatter_source = ScatterSource::None;
  model.diagnostics.iterations = center.iterations;
  model.diagnostics.converged = center.converged;

  DeflatedData stage = DeflatedData::centered(x, model.center);
  std::vector<Vector> directions;
  for (std::size_t k = 0; k < cfg.components; ++k) {
    PpStep step;
    try {
      step = pp_step(stage, cfg.scale, cfg.scale_options, cfg.parallel);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateStage) throw;
      model.diagnostics.truncated = true;
      break;
    }
    Vector a = reorthogonalize(std::move(step.direction), directions);
    model.diagnostics.discovered_eigenvalues.push_back(step.lambda);
    stage = deflate(stage, a);
    directions.push_back(std::move(a));
  }

  model.loadings = directions.empty() ? Matrix(p, 0) : Matrix::from_columns(directions);
  canonicalize_signs(model.loadings);
  model.eigenvalues = model.diagnostics.discovered_eigenvalues;
  sort_components(model);
  return model;
}

}  // namespace rpca
