#pragma once

#include <cstddef>

#include "rpca/location_scale.hpp"
#include "rpca/matrix.hpp"
#include "rpca/parallel.hpp"
#include "rpca/pca.hpp"

namespace rpca {

/// Projection-pursuit PCA. Each component maximizes a robust S² over the
/// directions spanned by the (deflated) centered observations, and the data are
/// then deflated by projecting that direction out.
struct PpConfig {
  ScaleKind scale = ScaleKind::Mad;
  std::size_t components = 1;
  ScaleOptions scale_options;
  Parallelism parallel;
};

/// Observations x_iᵏ at deflation stage k (rows), all orthogonal to the
/// directions already extracted.
struct DeflatedData {
  std::size_t stage = 1;
  Matrix vectors;
  /// Norm reference for the zero-vector threshold (largest stage-1 norm).
  double norm_scale = 1.0;

  static DeflatedData centered(const DataMatrix& x, std::span<const double> center);
  double zero_threshold() const noexcept;
};

/// Unit vectors x_iᵏ/‖x_iᵏ‖ as rows, in observation order, skipping vectors at or
/// below the zero threshold. Throws DegenerateStage if none remain.
Matrix trial_directions(const DeflatedData& d);

struct PpStep {
  Vector direction;
  double lambda = 0.0;  // S² along `direction`
  std::size_t observation = 0;  // row that generated the winning direction
};

/// Maximizes S² of the projected stage data over the trial directions. Ties go
/// to the lowest observation index whatever the thread count.
PpStep pp_step(const DeflatedData& d, ScaleKind scale, const ScaleOptions& opts = {},
               Parallelism par = {});

/// x_i − (aᵀx_i)a for every row. Throws InvalidDirection unless ‖a‖ = 1 within 1e-10.
DeflatedData deflate(const DeflatedData& d, std::span<const double> a);

/// Centers at the L1-median, then alternates pp_step and deflate. Components are
/// stored sorted by λ̂ (descending); the discovery order is kept in diagnostics.
/// Stops early with diagnostics.truncated when a stage degenerates.
PcaModel fit_pp(const DataMatrix& x, const PpConfig& cfg);

}  // namespace rpca
