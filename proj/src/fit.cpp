#include "rpca/fit.hpp"

namespace rpca {

PcaModel fit(const DataMatrix& x, Method method, std::size_t k, const FitOptions& opts) {
  switch (method) {
    case Method::Classical: return fit_classical(x, opts.use_correlation, k);
    case Method::MCov: return fit_mcov(x, k, opts.mcov);
    case Method::Spearman:
    case Method::Kendall: return fit_rank(x, method, k, {opts.rank_scatter, opts.parallel});
    case Method::PpMad:
    case Method::PpQn: {
      PpConfig cfg;
      cfg.scale = method == Method::PpMad ? ScaleKind::Mad : ScaleKind::Qn;
      cfg.components = k;
      cfg.scale_options = opts.scale_options;
      cfg.parallel = opts.parallel;
      return fit_pp(x, cfg);
    }
    case Method::MaxEnt: {
      MaxEntConfig cfg = opts.maxent;
      cfg.components = k;
      cfg.parallel = opts.parallel;
      return fit_maxent(x, cfg);
    }
  }
  return {};
}

}  // namespace rpca
