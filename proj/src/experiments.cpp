#include "rpca/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "rpca/error.hpp"
#include "rpca/linalg.hpp"
#include "rpca/parallel.hpp"
#include "rpca/random.hpp"

namespace rpca {

GeneratorSpec GeneratorSpec::contaminated(std::uint64_t seed) {
  GeneratorSpec s;
  s.seed = seed;
  return s;
}

GeneratorSpec GeneratorSpec::clean(std::uint64_t seed) {
  GeneratorSpec s;
  s.n_contam = 0;
  s.seed = seed;
  return s;
}

void GeneratorSpec::validate() const {
  require(p >= 1, ErrorCode::InvalidInput, "generator needs p >= 1");
  require(means.size() == p && variances.size() == p, ErrorCode::DimMismatch,
          "generator means/variances must have p entries");
  for (double v : variances) require(v > 0.0 && std::isfinite(v), ErrorCode::InvalidInput, "variances must be positive");
  for (double m : means) require(std::isfinite(m), ErrorCode::InvalidInput, "means must be finite");
  require(contam_var > 0.0 && std::isfinite(contam_var) && std::isfinite(contam_mean), ErrorCode::InvalidInput,
          "contaminant variance must be positive");
  require(n_clean + n_contam >= 1, ErrorCode::EmptyInput, "generator would produce no rows");
}

DataMatrix generate(const GeneratorSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_clean + spec.n_contam;
  Matrix x(n, spec.p);
  NormalStream rng(spec.seed);
  Vector sd(spec.p);
  for (std::size_t j = 0; j < spec.p; ++j) sd[j] = std::sqrt(spec.variances[j]);
  for (std::size_t i = 0; i < spec.n_clean; ++i)
    for (std::size_t j = 0; j < spec.p; ++j) x(i, j) = spec.means[j] + sd[j] * rng.next();
  const double csd = std::sqrt(spec.contam_var);
  for (std::size_t i = spec.n_clean; i < n; ++i)
    for (std::size_t j = 0; j < spec.p; ++j) x(i, j) = spec.contam_mean + csd * rng.next();
  return DataMatrix(std::move(x));
}

double angle_deg(std::span<const double> u, std::span<const double> v) {
  require(u.size() == v.size(), ErrorCode::DimMismatch, "angle_deg: length mismatch");
  const double nu = norm2(u);
  const double nv = norm2(v);
  require(nu > 0.0 && nv > 0.0, ErrorCode::InvalidInput, "angle_deg: zero vector");
  const double c = std::min(1.0, std::abs(dot(u, v)) / (nu * nv));
  return std::acos(c) * 180.0 / std::numbers::pi;
}

Vector principal_angles(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), ErrorCode::DimMismatch, "principal_angles: bases live in different spaces");
  require(orthonormality_error(a) <= 1e-6 && orthonormality_error(b) <= 1e-6, ErrorCode::InvalidInput,
          "principal_angles: bases must be orthonormal");
  Vector s = singular_values(a.transpose() * b);
  Vector angles(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    angles[i] = std::acos(std::clamp(s[i], 0.0, 1.0)) * 180.0 / std::numbers::pi;
  return angles;
}

Matrix reference_axes(const GeneratorSpec& spec, std::size_t k) {
  require(k >= 1 && k <= spec.p, ErrorCode::InvalidK, "reference_axes: k out of range");
  std::vector<std::size_t> order(spec.p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return spec.variances[a] > spec.variances[b]; });
  Matrix axes(spec.p, k);
  for (std::size_t c = 0; c < k; ++c) axes(order[c], c) = 1.0;
  return axes;
}

ComparisonReport compare_on(const DataMatrix& x, const Matrix& reference, const std::vector<Method>& methods,
                            std::size_t k, const FitOptions& opts) {
  require(!methods.empty(), ErrorCode::InvalidInput, "comparison needs at least one method");
  require(reference.rows() == x.cols(), ErrorCode::DimMismatch, "reference axes differ from p");
  ComparisonReport report;
  report.components = k;
  report.reference = reference;
  report.results.resize(methods.size());

  FitOptions inner = opts;
  inner.parallel = Parallelism{1};
  parallel_for(methods.size(), opts.parallel, [&](std::size_t i) {
    MethodResult& r = report.results[i];
    r.method = methods[i];
    try {
      PcaModel model = fit(x, methods[i], k, inner);
      require(model.components() >= 1, ErrorCode::DegenerateStage, "fit produced no components");
      r.first_angle_deg = angle_deg(model.loadings.col(0), reference.col(0));
      const std::size_t kk = std::min(model.components(), reference.cols());
      r.subspace_angles_deg = principal_angles(model.loadings.left_cols(kk), reference.left_cols(kk));
      r.eigenvalues = model.eigenvalues;
      r.model = std::move(model);
      r.ok = true;
    } catch (const std::exception& e) {
      r.ok = false;
      r.error = e.what();
    }
  });
  return report;
}

ComparisonReport run_comparison(const GeneratorSpec& spec, const std::vector<Method>& methods, std::size_t k,
                                const FitOptions& opts) {
  const DataMatrix x = generate(spec);
  ComparisonReport report = compare_on(x, reference_axes(spec, k), methods, k, opts);
  report.spec = spec;
  return report;
}

}  // namespace rpca
