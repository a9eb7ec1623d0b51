#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rpca/fit.hpp"
#include "rpca/matrix.hpp"

namespace rpca {

/// Diagonal Gaussian core plus a block of contaminants drawn with every
/// coordinate from Normal(contam_mean, contam_var).
struct GeneratorSpec {
  std::size_t n_clean = 1000;
  std::size_t p = 6;
  Vector means{0, 1, 2, 3, 4, 5};
  Vector variances{5, 1, 1, 1, 1, 1};
  std::size_t n_contam = 60;
  double contam_mean = 20.0;
  double contam_var = 5.0;
  std::uint64_t seed = 0;

  /// 1000 clean rows, means 0..5, variances (5,1,1,1,1,1), 60 contaminants N(20, 5).
  static GeneratorSpec contaminated(std::uint64_t seed);
  /// Same core without contaminants.
  static GeneratorSpec clean(std::uint64_t seed);

  void validate() const;
};

/// Clean rows first, then contaminants; one normal stream per seed, row-major.
DataMatrix generate(const GeneratorSpec& spec);

/// Acute angle between the lines spanned by u and v, in degrees.
double angle_deg(std::span<const double> u, std::span<const double> v);

/// Principal angles (degrees, ascending) between the column spans of two
/// orthonormal p×k bases. Throws InvalidInput if either is not orthonormal within 1e-6.
Vector principal_angles(const Matrix& a, const Matrix& b);

/// First k coordinate axes ordered by the generator's variances (descending, stable).
Matrix reference_axes(const GeneratorSpec& spec, std::size_t k);

struct MethodResult {
  Method method = Method::Classical;
  bool ok = false;
  std::string error;
  double first_angle_deg = 0.0;
  Vector subspace_angles_deg;
  Vector eigenvalues;
  std::optional<PcaModel> model;
};

struct ComparisonReport {
  GeneratorSpec spec;
  std::size_t components = 0;
  Matrix reference;
  std::vector<MethodResult> results;
};

/// Generates the data once and fits every method against it. Failures are
/// recorded per method. Methods may run on separate threads (opts.parallel).
ComparisonReport run_comparison(const GeneratorSpec& spec, const std::vector<Method>& methods,
                                std::size_t k, const FitOptions& opts = {});

/// Same, on caller-supplied data with the truth given by `reference`.
ComparisonReport compare_on(const DataMatrix& x, const Matrix& reference,
                            const std::vector<Method>& methods, std::size_t k,
                            const FitOptions& opts = {});

}  // namespace rpca
