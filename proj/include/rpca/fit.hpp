#pragma once

#include "rpca/maxent.hpp"
#include "rpca/pca.hpp"
#include "rpca/projection_pursuit.hpp"

namespace rpca {

/// Settings for every method, so callers can switch methods by tag alone.
struct FitOptions {
  bool use_correlation = false;  // classical: Pearson correlation instead of covariance
  RankScatter rank_scatter = RankScatter::MadScaled;
  MCovOptions mcov;
  ScaleOptions scale_options;
  MaxEntConfig maxent;  // `components` is overridden by k
  Parallelism parallel;
};

PcaModel fit(const DataMatrix& x, Method method, std::size_t k, const FitOptions& opts = {});

}  // namespace rpca
