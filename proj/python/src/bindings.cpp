#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <string>

#include "rpca/experiments.hpp"
#include "rpca/fit.hpp"
#include "rpca/location_scale.hpp"

namespace py = pybind11;
using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

namespace {

rpca::Matrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return rpca::Matrix(rows, cols, std::vector<double>(a.data(), a.data() + a.size()));
}

rpca::Vector to_vector(const Array& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

Array from_matrix(const rpca::Matrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.values().begin(), m.values().end(), out.mutable_data());
  return out;
}

Array from_vector(const rpca::Vector& v) {
  Array out(v.size());
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

rpca::Method method_from(const std::string& name) {
  const auto m = rpca::parse_method(name);
  if (!m) throw py::value_error("unknown method '" + name + "'");
  return *m;
}

struct PyOptions {
  bool use_correlation = false;
  std::string rank_scatter = "mad";
  std::string weight = "campbell";
  double tol = -1.0;
  int max_iter = -1;
  double scale_factor = 2.0;
  double beta0 = 0.1;
  bool random_init = false;
  std::uint64_t init_seed = 0;
  unsigned threads = 1;

  rpca::FitOptions build(std::size_t p) const {
    rpca::FitOptions o;
    o.use_correlation = use_correlation;
    if (rank_scatter == "mad")
      o.rank_scatter = rpca::RankScatter::MadScaled;
    else if (rank_scatter == "correlation")
      o.rank_scatter = rpca::RankScatter::Correlation;
    else
      throw py::value_error("rank_scatter must be 'mad' or 'correlation'");
    if (weight == "campbell")
      o.mcov.weight = rpca::WeightFunction::campbell(p);
    else if (weight == "huber")
      o.mcov.weight = rpca::WeightFunction::huber(p);
    else
      throw py::value_error("weight must be 'campbell' or 'huber'");
    if (tol >= 0.0) o.mcov.tol = o.maxent.tol = tol;
    if (max_iter >= 0) o.mcov.max_iter = o.maxent.max_iter = max_iter;
    o.maxent.scale_factor = scale_factor;
    o.maxent.beta0 = beta0;
    o.maxent.random_init = random_init;
    o.maxent.seed = init_seed;
    o.parallel.threads = threads;
    o.maxent.parallel = o.parallel;
    return o;
  }
};

py::dict model_dict(const rpca::PcaModel& m) {
  py::dict diag;
  diag["iterations"] = m.diagnostics.iterations;
  diag["converged"] = m.diagnostics.converged;
  diag["truncated"] = m.diagnostics.truncated;
  diag["stalled"] = m.diagnostics.stalled;
  diag["objective_trace"] = from_vector(m.diagnostics.objective_trace);
  diag["discovered_eigenvalues"] = from_vector(m.diagnostics.discovered_eigenvalues);

  py::dict d;
  d["method"] = std::string(rpca::to_string(m.method));
  d["scatter_source"] = std::string(rpca::to_string(m.scatter_source));
  d["center"] = from_vector(m.center);
  d["loadings"] = from_matrix(m.loadings);
  d["eigenvalues"] = from_vector(m.eigenvalues);
  d["diagnostics"] = diag;
  return d;
}

rpca::PcaModel model_from(const py::dict& d) {
  rpca::PcaModel m;
  m.method = method_from(d["method"].cast<std::string>());
  m.center = to_vector(d["center"].cast<Array>());
  m.loadings = to_matrix(d["loadings"].cast<Array>());
  m.eigenvalues = to_vector(d["eigenvalues"].cast<Array>());
  return m;
}

rpca::GeneratorSpec spec_from(std::uint64_t seed, bool clean, std::size_t n_clean, std::size_t n_contam) {
  auto spec = clean ? rpca::GeneratorSpec::clean(seed) : rpca::GeneratorSpec::contaminated(seed);
  if (n_clean > 0) spec.n_clean = n_clean;
  if (!clean && n_contam != static_cast<std::size_t>(-1)) spec.n_contam = n_contam;
  return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Robust principal component analysis";

  static py::exception<rpca::Error> rpca_error(m, "RpcaError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const rpca::Error& e) {
      py::set_error(rpca_error, e.what());
    }
  });

  m.def("methods", [] {
    std::vector<std::string> names;
    for (auto meth : {rpca::Method::Classical, rpca::Method::MCov, rpca::Method::Spearman,
                      rpca::Method::Kendall, rpca::Method::PpMad, rpca::Method::PpQn, rpca::Method::MaxEnt})
      names.emplace_back(rpca::to_string(meth));
    return names;
  });

  py::class_<PyOptions>(m, "FitOptions")
      .def(py::init<>())
      .def_readwrite("use_correlation", &PyOptions::use_correlation)
      .def_readwrite("rank_scatter", &PyOptions::rank_scatter)
      .def_readwrite("weight", &PyOptions::weight)
      .def_readwrite("tol", &PyOptions::tol)
      .def_readwrite("max_iter", &PyOptions::max_iter)
      .def_readwrite("scale_factor", &PyOptions::scale_factor)
      .def_readwrite("beta0", &PyOptions::beta0)
      .def_readwrite("random_init", &PyOptions::random_init)
      .def_readwrite("init_seed", &PyOptions::init_seed)
      .def_readwrite("threads", &PyOptions::threads);

  m.def(
      "fit",
      [](const Array& x, const std::string& method, std::size_t k, const PyOptions& opts) {
        const rpca::DataMatrix data(to_matrix(x));
        const std::size_t comps = k == 0 ? data.cols() : k;
        const auto fit_opts = opts.build(data.cols());
        const auto meth = method_from(method);
        rpca::PcaModel model;
        {
          py::gil_scoped_release release;
          model = rpca::fit(data, meth, comps, fit_opts);
        }
        return model_dict(model);
      },
      py::arg("x"), py::arg("method"), py::arg("k") = 0, py::arg("options") = PyOptions{});

  m.def(
      "scores",
      [](const py::dict& model, const Array& x) {
        return from_matrix(rpca::scores(model_from(model), rpca::DataMatrix(to_matrix(x))));
      },
      py::arg("model"), py::arg("x"));

  m.def(
      "generate",
      [](std::uint64_t seed, bool clean, std::size_t n_clean, std::size_t n_contam) {
        return from_matrix(rpca::generate(spec_from(seed, clean, n_clean, n_contam)).matrix());
      },
      py::arg("seed") = 7, py::arg("clean") = false, py::arg("n_clean") = 0,
      py::arg("n_contam") = static_cast<std::size_t>(-1));

  m.def(
      "compare",
      [](std::uint64_t seed, const std::vector<std::string>& methods, std::size_t k, bool clean) {
        std::vector<rpca::Method> list;
        for (const auto& name : methods) list.push_back(method_from(name));
        rpca::ComparisonReport report;
        {
          py::gil_scoped_release release;
          report = rpca::run_comparison(spec_from(seed, clean, 0, static_cast<std::size_t>(-1)), list, k);
        }
        py::list rows;
        for (const auto& r : report.results) {
          py::dict d;
          d["method"] = std::string(rpca::to_string(r.method));
          d["ok"] = r.ok;
          d["error"] = r.error;
          d["first_angle_deg"] = r.first_angle_deg;
          d["subspace_angles_deg"] = from_vector(r.subspace_angles_deg);
          d["eigenvalues"] = from_vector(r.eigenvalues);
          rows.append(d);
        }
        return rows;
      },
      py::arg("seed"), py::arg("methods"), py::arg("k") = 1, py::arg("clean") = false);

  m.def("mad", [](const Array& z) { return rpca::mad(to_vector(z)); }, py::arg("z"));
  m.def("qn", [](const Array& z) { return rpca::qn(to_vector(z)); }, py::arg("z"));
  m.def("l1_median", [](const Array& x) { return from_vector(rpca::l1_median(rpca::DataMatrix(to_matrix(x)))); },
        py::arg("x"));
  m.def("spearman", [](const Array& x) { return from_matrix(rpca::spearman_corr_matrix(rpca::DataMatrix(to_matrix(x))).matrix()); },
        py::arg("x"));
  m.def("kendall", [](const Array& x) { return from_matrix(rpca::kendall_corr_matrix(rpca::DataMatrix(to_matrix(x))).matrix()); },
        py::arg("x"));
}
