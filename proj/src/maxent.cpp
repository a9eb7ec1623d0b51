#include "rpca/maxent.hpp"

#include <cmath>
#include <numbers>

#include "rpca/error.hpp"
#include "rpca/linalg.hpp"
#include "rpca/location_scale.hpp"
#include "rpca/random.hpp"

namespace rpca {

namespace {

double kernel_normalizer(std::size_t m) {
  return std::pow(2.0 * std::numbers::pi, -0.5 * static_cast<double>(m));
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

Vector column_means(const DataMatrix& x) {
  Vector mean(x.cols(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) mean[j] += x(i, j);
  for (double& m : mean) m /= static_cast<double>(x.rows());
  return mean;
}

void check_basis(const DataMatrix& x, const Matrix& u) {
  require(u.rows() == x.cols(), ErrorCode::DimMismatch, "projection basis rows differ from p");
  require(u.cols() >= 1, ErrorCode::InvalidK, "projection basis has no columns");
}

}  // namespace

double gaussian_kernel(std::span<const double> z, double sigma_sq) {
  require(sigma_sq > 0.0, ErrorCode::InvalidInput, "kernel bandwidth must be positive");
  return kernel_normalizer(z.size()) * std::exp(-dot(z, z) / (2.0 * sigma_sq));
}

Matrix project(const DataMatrix& x, const Matrix& u, std::span<const double> center) {
  require(u.rows() == x.cols(), ErrorCode::DimMismatch, "projection basis rows differ from p");
  require(center.empty() || center.size() == x.cols(), ErrorCode::DimMismatch,
          "center length differs from p");
  Matrix y(x.rows(), u.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t c = 0; c < u.cols(); ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < x.cols(); ++j)
        s += (x(i, j) - (center.empty() ? 0.0 : center[j])) * u(j, c);
      y(i, c) = s;
    }
  return y;
}

double entropy_objective(const DataMatrix& x, const Matrix& u, double sigma_sq, Parallelism par) {
  check_basis(x, u);
  require(sigma_sq > 0.0, ErrorCode::InvalidInput, "kernel bandwidth must be positive");
  const Matrix y = project(x, u);
  const std::size_t n = x.rows();
  Vector row_sum(n);
  parallel_for(n, par, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::exp(-squared_distance(y.row(j), y.row(i)) / (2.0 * sigma_sq));
    row_sum[i] = s;
  });
  double total = 0.0;
  for (double s : row_sum) total += s;
  const double nn = static_cast<double>(n);
  return -std::log(kernel_normalizer(u.cols()) * total / (nn * nn));
}

Bandwidth bandwidth(const DataMatrix& x, const Matrix& u, double scale_factor) {
  check_basis(x, u);
  require(scale_factor > 0.0, ErrorCode::InvalidInput, "bandwidth scale factor must be positive");
  require(x.rows() >= 2, ErrorCode::InsufficientData, "bandwidth needs n >= 2");
  // Σ_i Σ_j ‖y_i − y_j‖² = 2n Σ_i ‖y_i − ȳ‖².
  const Matrix y = project(x, u);
  const std::size_t n = x.rows();
  const double nn = static_cast<double>(n);
  double total = 0.0;
  for (std::size_t c = 0; c < y.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += y(i, c);
    mean /= nn;
    for (std::size_t i = 0; i < n; ++i) total += (y(i, c) - mean) * (y(i, c) - mean);
  }
  total *= 2.0 * nn;
  Bandwidth out{total / (scale_factor * nn * nn), false};
  if (!(out.sigma_sq >= 1e-12)) {
    out.sigma_sq = 1e-12;
    out.degenerate = true;
  }
  return out;
}

GraphMatrices graph_matrices(const DataMatrix& x, const Matrix& u, double sigma_sq, Parallelism par) {
  check_basis(x, u);
  require(sigma_sq > 0.0, ErrorCode::InvalidInput, "kernel bandwidth must be positive");
  const Matrix y = project(x, u);
  const std::size_t n = x.rows();
  const double c = kernel_normalizer(u.cols());
  GraphMatrices g{Matrix(n, n), Matrix(n, n)};
  Vector row_sum(n);
  parallel_for(n, par, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = c * std::exp(-squared_distance(y.row(i), y.row(j)) / (2.0 * sigma_sq));
      g.w(i, j) = v;
      s += v;
    }
    row_sum[i] = s;
  });
  double total = 0.0;
  for (double s : row_sum) total += s;
  const double scale = 1.0 / (sigma_sq * total);
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      g.w(i, j) *= scale;
      degree += g.w(i, j);
    }
    for (std::size_t j = 0; j < n; ++j) g.l(i, j) = -g.w(i, j);
    g.l(i, i) += degree;
  }
  return g;
}

Matrix entropy_ascent_direction(const DataMatrix& x, const Matrix& u, double sigma_sq, Parallelism par) {
  check_basis(x, u);
  require(sigma_sq > 0.0, ErrorCode::InvalidInput, "kernel bandwidth must be positive");
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  const Vector mean = column_means(x);
  const Matrix y = project(x, u);

  // Row i of L·X_c is D_ii x_i − Σ_j W_ij x_j; accumulate it unnormalized and
  // rescale once the kernel total is known. Avoids storing the n×n matrices.
  Matrix lx(n, p);
  Vector row_sum(n);
  parallel_for(n, par, [&](std::size_t i) {
    auto out = lx.row(i);
    double degree = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double g = std::exp(-squared_distance(y.row(i), y.row(j)) / (2.0 * sigma_sq));
      degree += g;
      for (std::size_t k = 0; k < p; ++k) out[k] -= g * (x(j, k) - mean[k]);
    }
    for (std::size_t k = 0; k < p; ++k) out[k] += degree * (x(i, k) - mean[k]);
    row_sum[i] = degree;
  });
  double total = 0.0;
  for (double s : row_sum) total += s;
  // The kernel normalizer cancels between G_ij and the total.
  const double scale = 1.0 / (sigma_sq * total);

  Matrix m(p, p);
  for (std::size_t i = 0; i < n; ++i) {
    const auto li = lx.row(i);
    for (std::size_t a = 0; a < p; ++a) {
      const double xa = x(i, a) - mean[a];
      for (std::size_t b = 0; b < p; ++b) m(a, b) += xa * li[b];
    }
  }
  return (scale * m) * u;
}

MaxEntState initial_state(const DataMatrix& x, Matrix u, const MaxEntConfig& cfg) {
  MaxEntState s;
  const auto bw = bandwidth(x, u, cfg.scale_factor);
  s.sigma_sq = bw.sigma_sq;
  s.degenerate_bandwidth = bw.degenerate;
  s.objective = entropy_objective(x, u, s.sigma_sq, cfg.parallel);
  s.u = std::move(u);
  s.beta = cfg.beta0;
  s.trace.push_back(s.objective);
  return s;
}

MaxEntState fixed_point_step(const DataMatrix& x, const MaxEntState& state, const MaxEntConfig& cfg) {
  // Unit RMS column norm: β is a relative step whatever the data scale.
  Matrix direction = entropy_ascent_direction(x, state.u, state.sigma_sq, cfg.parallel);
  const double size = frobenius_norm(direction) / std::sqrt(static_cast<double>(direction.cols()));
  if (size > 0.0) direction = (1.0 / size) * direction;
  MaxEntState next = state;
  double beta = state.beta;
  for (int attempt = 0; attempt <= 30; ++attempt) {
    Matrix candidate;
    try {
      candidate = svd_orthonormalize(state.u + beta * direction);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient) throw;
      beta *= 0.5;
      continue;
    }
    const auto bw = bandwidth(x, candidate, cfg.scale_factor);
    const double objective = entropy_objective(x, candidate, bw.sigma_sq, cfg.parallel);
    if (objective >= state.objective) {
      next.u = std::move(candidate);
      next.sigma_sq = bw.sigma_sq;
      next.degenerate_bandwidth = bw.degenerate;
      next.objective = objective;
      next.beta = std::min(beta * 1.5, cfg.beta0 * 10.0);
      next.trace.push_back(objective);
      ++next.accepted;
      next.stalled = false;
      return next;
    }
    beta *= 0.5;
  }
  next.beta = beta;
  next.stalled = true;
  return next;
}

Matrix random_orthonormal(std::size_t p, std::size_t m, std::uint64_t seed) {
  NormalStream rng(seed, 1);
  Matrix g(p, m);
  for (double& v : g.values()) v = rng.next();
  return svd_orthonormalize(g);
}

PcaModel fit_maxent(const DataMatrix& x, const MaxEntConfig& cfg) {
  const std::size_t p = x.cols();
  require(x.rows() >= 2, ErrorCode::InsufficientData, "maxent needs n >= 2");
  require(cfg.components >= 1 && cfg.components <= p, ErrorCode::InvalidK, "component count must be in [1, p]");
  require(cfg.scale_factor > 0.0 && cfg.beta0 > 0.0 && cfg.tol > 0.0 && cfg.max_iter >= 0,
          ErrorCode::InvalidInput, "maxent settings must be positive");

  Matrix u0 = cfg.random_init ? random_orthonormal(p, cfg.components, cfg.seed)
                              : fit_classical(x, false, cfg.components).loadings;
  MaxEntState state = initial_state(x, std::move(u0), cfg);

  PcaModel model;
  model.method = Method::MaxEnt;
  model.scatter_source = ScatterSource::None;
  model.center = column_means(x);
  model.diagnostics.converged = false;
  int iterations = 0;
  for (; iterations < cfg.max_iter; ++iterations) {
    const double before = state.objective;
    state = fixed_point_step(x, state, cfg);
    if (state.stalled) {
      model.diagnostics.stalled = true;
      model.diagnostics.converged = true;
      ++iterations;
      break;
    }
    if (std::abs(state.objective - before) <= cfg.tol * std::max(std::abs(before), 1e-300)) {
      model.diagnostics.converged = true;
      ++iterations;
      break;
    }
  }
  model.diagnostics.iterations = iterations;
  model.diagnostics.objective_trace = state.trace;

  model.loadings = state.u;
  const Matrix y = project(x, model.loadings, model.center);
  model.eigenvalues.resize(cfg.components);
  for (std::size_t c = 0; c < cfg.components; ++c) model.eigenvalues[c] = variance_sq(y.col(c));
  sort_components(model);
  canonicalize_signs(model.loadings);
  return model;
}

}  // namespace rpca
