#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpca/experiments.hpp"
#include "rpca/matrix.hpp"
#include "rpca/pca.hpp"

namespace rpca::io {

/// Raised for unreadable or malformed files; the CLI maps it to exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Comma-separated, '.' decimal. A first row that does not parse as numbers is
/// taken as a header. Throws IoError on ragged rows, bad numbers, or no data.
Matrix read_csv(std::istream& in);
Matrix read_csv_file(const std::string& path);

/// Header `<prefix>1..<prefix>p`, then one row per observation at 17 significant digits.
void write_csv(std::ostream& out, const Matrix& m, const std::string& prefix);
void write_csv_file(const std::string& path, const Matrix& m, const std::string& prefix);

/// %.17g formatting shared by every writer.
std::string format_double(double v);

/// Model schema:
///   {method, scatter_source, p, k, center[p], eigenvalues[k], layout: "column-major",
///    loadings: [[p] × k], diagnostics{iterations, converged, truncated, stalled,
///    objective_trace?, discovered_eigenvalues?}}
nlohmann::ordered_json model_to_json(const PcaModel& model);
PcaModel model_from_json(const nlohmann::json& j);

nlohmann::ordered_json spec_to_json(const GeneratorSpec& spec);
nlohmann::ordered_json result_to_json(const MethodResult& r, const Matrix& reference);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace rpca::io
