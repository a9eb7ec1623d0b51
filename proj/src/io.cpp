#include "rpca/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rpca::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
  return v;
}

ScatterSource parse_scatter_source(std::string_view s) {
  if (s == "covariance") return ScatterSource::Covariance;
  if (s == "correlation") return ScatterSource::Correlation;
  if (s == "none") return ScatterSource::None;
  throw IoError("unknown scatter_source '" + std::string(s) + "'");
}

std::vector<double> to_vector(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_array()) throw IoError(std::string("model is missing array '") + field + "'");
  std::vector<double> out;
  for (const auto& v : j.at(field)) {
    if (!v.is_number()) throw IoError(std::string("non-numeric entry in '") + field + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Matrix read_csv(std::istream& in) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    std::vector<double> row;
    row.reserve(fields.size());
    bool numeric = true;
    for (auto f : fields) {
      auto v = parse_number(f);
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    if (!numeric) {
      if (rows == 0 && cols == 0) {
        cols = fields.size();  // header
        continue;
      }
      throw IoError("line " + std::to_string(line_no) + ": non-numeric field");
    }
    if (cols == 0) cols = row.size();
    if (row.size() != cols)
      throw IoError("line " + std::to_string(line_no) + ": expected " + std::to_string(cols) + " fields, found " +
                    std::to_string(row.size()));
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows == 0) throw IoError("no data rows");
  return Matrix(rows, cols, std::move(values));
}

Matrix read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return read_csv(in);
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const Matrix& m, const std::string& prefix) {
  for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? "," : "") << prefix << j + 1;
  out << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
}

void write_csv_file(const std::string& path, const Matrix& m, const std::string& prefix) {
  std::ostringstream text;
  write_csv(text, m, prefix);
  write_text_file(path, text.str());
}

nlohmann::ordered_json model_to_json(const PcaModel& model) {
  nlohmann::ordered_json j;
  j["method"] = to_string(model.method);
  j["scatter_source"] = to_string(model.scatter_source);
  j["p"] = model.dim();
  j["k"] = model.components();
  j["center"] = model.center;
  j["eigenvalues"] = model.eigenvalues;
  j["layout"] = "column-major";
  auto loadings = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < model.components(); ++c) loadings.push_back(model.loadings.col(c));
  j["loadings"] = std::move(loadings);

  const auto& d = model.diagnostics;
  nlohmann::ordered_json diag;
  diag["iterations"] = d.iterations;
  diag["converged"] = d.converged;
  diag["truncated"] = d.truncated;
  diag["stalled"] = d.stalled;
  if (!d.objective_trace.empty()) diag["objective_trace"] = d.objective_trace;
  if (!d.discovered_eigenvalues.empty()) diag["discovered_eigenvalues"] = d.discovered_eigenvalues;
  j["diagnostics"] = std::move(diag);
  return j;
}

PcaModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw IoError("model JSON must be an object");
  if (j.value("layout", "") != "column-major") throw IoError("model layout must be \"column-major\"");
  PcaModel model;
  const auto method = parse_method(j.value("method", ""));
  if (!method) throw IoError("unknown method in model");
  model.method = *method;
  model.scatter_source = parse_scatter_source(j.value("scatter_source", ""));
  model.center = to_vector(j, "center");
  model.eigenvalues = to_vector(j, "eigenvalues");

  const std::size_t p = model.center.size();
  if (!j.contains("loadings") || !j.at("loadings").is_array()) throw IoError("model is missing 'loadings'");
  const auto& cols = j.at("loadings");
  if (cols.size() != model.eigenvalues.size()) throw IoError("loadings and eigenvalues disagree on k");
  model.loadings = Matrix(p, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (!cols[c].is_array() || cols[c].size() != p) throw IoError("loading column length differs from p");
    for (std::size_t r = 0; r < p; ++r) {
      if (!cols[c][r].is_number()) throw IoError("non-numeric loading entry");
      model.loadings(r, c) = cols[c][r].get<double>();
    }
  }
  if (j.contains("diagnostics")) {
    const auto& d = j.at("diagnostics");
    model.diagnostics.iterations = d.value("iterations", 0);
    model.diagnostics.converged = d.value("converged", true);
    model.diagnostics.truncated = d.value("truncated", false);
    model.diagnostics.stalled = d.value("stalled", false);
    if (d.contains("objective_trace")) model.diagnostics.objective_trace = to_vector(d, "objective_trace");
    if (d.contains("discovered_eigenvalues"))
      model.diagnostics.discovered_eigenvalues = to_vector(d, "discovered_eigenvalues");
  }
  return model;
}

nlohmann::ordered_json spec_to_json(const GeneratorSpec& spec) {
  nlohmann::ordered_json j;
  j["n_clean"] = spec.n_clean;
  j["n_contam"] = spec.n_contam;
  j["p"] = spec.p;
  j["means"] = spec.means;
  j["variances"] = spec.variances;
  j["contam_mean"] = spec.contam_mean;
  j["contam_var"] = spec.contam_var;
  j["seed"] = spec.seed;
  return j;
}

nlohmann::ordered_json result_to_json(const MethodResult& r, const Matrix& reference) {
  nlohmann::ordered_json j;
  j["method"] = to_string(r.method);
  j["ok"] = r.ok;
  if (!r.ok) {
    j["error"] = r.error;
    return j;
  }
  j["first_angle_deg"] = r.first_angle_deg;
  Vector per_component;
  const std::size_t k = std::min(r.model->components(), reference.cols());
  for (std::size_t c = 0; c < k; ++c)
    per_component.push_back(angle_deg(r.model->loadings.col(c), reference.col(c)));
  j["component_angles_deg"] = per_component;
  j["subspace_angles_deg"] = r.subspace_angles_deg;
  j["eigenvalues"] = r.eigenvalues;
  j["model"] = model_to_json(*r.model);
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace rpca::io
