// rpca: generate synthetic data, fit robust PCA models, compare methods, export scores.
//
//   rpca generate --paper-51 --seed 7 -o data.csv
//   rpca fit -i data.csv --method kendall -k 2 -o model.json
//   rpca compare --paper-51 --seeds 7,8 --methods all -o report.json --plot-csv angles.csv
//   rpca scores --model model.json -i data.csv -o scores.csv
//
// Exit codes: 0 success, 1 numerical failure, 2 usage or I/O error.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rpca/error.hpp"
#include "rpca/experiments.hpp"
#include "rpca/fit.hpp"
#include "rpca/io.hpp"

namespace {

constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GeneratorFlags {
  bool paper_51 = false;
  bool clean = false;
  std::size_t n_clean = 1000;
  std::size_t n_contam = 60;
  std::size_t p = 6;
  std::vector<double> means;
  std::vector<double> variances;
  double contam_mean = 20.0;
  double contam_var = 5.0;

  void attach(CLI::App& cmd) {
    cmd.add_flag("--paper-51", paper_51, "1000 clean rows plus 60 contaminants at N(20, 5) (the default setup)");
    cmd.add_flag("--clean", clean, "omit the contaminant block");
    cmd.add_option("--n-clean", n_clean, "rows drawn from the Gaussian core");
    cmd.add_option("--n-contam", n_contam, "contaminant rows");
    cmd.add_option("--p", p, "number of variables");
    cmd.add_option("--means", means, "core means, one per variable (default 0,1,...)")->delimiter(',');
    cmd.add_option("--variances", variances, "core variances, one per variable (default 5,1,1,...)")->delimiter(',');
    cmd.add_option("--contam-mean", contam_mean, "mean of every contaminant coordinate");
    cmd.add_option("--contam-var", contam_var, "variance of every contaminant coordinate");
  }

  rpca::GeneratorSpec spec(std::uint64_t seed) const {
    rpca::GeneratorSpec s = rpca::GeneratorSpec::contaminated(seed);
    if (!paper_51) {
      s.n_clean = n_clean;
      s.n_contam = n_contam;
      s.p = p;
      s.contam_mean = contam_mean;
      s.contam_var = contam_var;
      s.means.resize(p);
      s.variances.assign(p, 1.0);
      for (std::size_t j = 0; j < p; ++j) s.means[j] = static_cast<double>(j);
      s.variances[0] = 5.0;
      if (!means.empty()) s.means = means;
      if (!variances.empty()) s.variances = variances;
    }
    if (clean) s.n_contam = 0;
    return s;
  }
};

struct FitFlags {
  std::string method;
  std::size_t k = 0;
  bool correlation = false;
  std::string rank_scatter = "mad";
  std::string weight = "campbell";
  std::string qn_rank = "floor-quarter";
  std::optional<double> tol;
  std::optional<int> max_iter;
  double scale_factor = 2.0;
  double beta0 = 0.1;
  bool random_init = false;
  std::uint64_t init_seed = 0;

  void attach(CLI::App& cmd, bool with_method) {
    if (with_method)
      cmd.add_option("-m,--method", method, "classical, mcov, spearman, kendall, pp-mad, pp-qn or maxent")
          ->required();
    cmd.add_option("-k,--components", k, "number of components (default: p)");
    cmd.add_flag("--correlation", correlation, "classical PCA on the Pearson correlation matrix");
    cmd.add_option("--rank-scatter", rank_scatter, "rank PCA scatter: mad (MAD-rescaled) or correlation")
        ->check(CLI::IsMember({"mad", "correlation"}));
    cmd.add_option("--weight", weight, "M-estimator weight: campbell or huber")
        ->check(CLI::IsMember({"campbell", "huber"}));
    cmd.add_option("--qn-rank", qn_rank, "Qn order statistic: floor-quarter, ceil-quarter or half-sample")
        ->check(CLI::IsMember({"floor-quarter", "ceil-quarter", "half-sample"}));
    cmd.add_option("--tol", tol, "relative convergence tolerance (mcov, maxent)");
    cmd.add_option("--max-iter", max_iter, "iteration cap (mcov, maxent)")->check(CLI::NonNegativeNumber);
    cmd.add_option("--scale-factor", scale_factor, "maxent bandwidth divisor s");
    cmd.add_option("--beta0", beta0, "maxent initial step length");
    cmd.add_flag("--random-init", random_init, "maxent: start from a random orthonormal basis");
    cmd.add_option("--init-seed", init_seed, "maxent: seed for --random-init");
  }

  rpca::FitOptions options(unsigned threads) const {
    rpca::FitOptions o;
    o.use_correlation = correlation;
    o.rank_scatter = rank_scatter == "mad" ? rpca::RankScatter::MadScaled : rpca::RankScatter::Correlation;
    o.scale_options.qn_rank = qn_rank == "floor-quarter" ? rpca::QnRank::FloorQuarter
                              : qn_rank == "ceil-quarter" ? rpca::QnRank::CeilQuarter
                                                          : rpca::QnRank::HalfSample;
    o.maxent.scale_factor = scale_factor;
    o.maxent.beta0 = beta0;
    o.maxent.random_init = random_init;
    o.maxent.seed = init_seed;
    if (tol) o.mcov.tol = o.maxent.tol = *tol;
    if (max_iter) o.mcov.max_iter = o.maxent.max_iter = *max_iter;
    o.parallel = rpca::Parallelism{threads};
    return o;
  }

  std::size_t components(std::size_t p) const { return k == 0 ? p : k; }

  // The default Campbell weight depends on p, so it is resolved once the data is known.
  void resolve_weight(rpca::FitOptions& o, std::size_t p) const {
    o.mcov.weight = weight == "huber" ? rpca::WeightFunction::huber(p) : rpca::WeightFunction::campbell(p);
  }
};

rpca::Method method_or_throw(const std::string& name) {
  auto m = rpca::parse_method(name);
  if (!m) throw UsageError("unknown method '" + name + "'");
  return *m;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    rpca::io::write_text_file(path, text);
}

rpca::DataMatrix load_data(const std::string& path) {
  return rpca::DataMatrix(rpca::io::read_csv_file(path));
}

int run_generate(const GeneratorFlags& gen, std::uint64_t seed, const std::string& out) {
  const rpca::DataMatrix x = rpca::generate(gen.spec(seed));
  std::ostringstream text;
  rpca::io::write_csv(text, x.matrix(), "x");
  emit(out, text.str());
  return 0;
}

int run_fit(const FitFlags& f, const std::string& input, const std::string& out, unsigned threads) {
  const rpca::Method method = method_or_throw(f.method);
  const rpca::DataMatrix x = load_data(input);
  rpca::FitOptions opts = f.options(threads);
  f.resolve_weight(opts, x.cols());
  const rpca::PcaModel model = rpca::fit(x, method, f.components(x.cols()), opts);
  emit(out, rpca::io::model_to_json(model).dump(2) + "\n");
  return 0;
}

struct CompareFlags {
  std::vector<std::string> methods{"all"};
  std::vector<std::uint64_t> seeds{7};
  std::string input;
  std::vector<double> truth;
  std::string plot_csv;
};

std::vector<rpca::Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<rpca::Method> out;
  for (const auto& n : names) {
    if (n.empty()) continue;
    if (n == "all") {
      for (auto m : {rpca::Method::Classical, rpca::Method::MCov, rpca::Method::Spearman, rpca::Method::Kendall,
                     rpca::Method::PpMad, rpca::Method::PpQn, rpca::Method::MaxEnt})
        out.push_back(m);
      continue;
    }
    out.push_back(method_or_throw(n));
  }
  if (out.empty()) throw UsageError("--methods lists no methods");
  return out;
}

int run_compare(const GeneratorFlags& gen, const FitFlags& f, const CompareFlags& c, const std::string& out,
                unsigned threads) {
  const auto methods = parse_methods(c.methods);
  if (c.seeds.empty()) throw UsageError("--seeds lists no seeds");
  rpca::FitOptions opts = f.options(threads);

  nlohmann::ordered_json report;
  report["components"] = nullptr;
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  std::ostringstream plot;
  plot << "seed,method,component,angle_deg,eigenvalue\n";

  auto add_run = [&](const rpca::ComparisonReport& r, const std::string& label, nlohmann::ordered_json source) {
    if (report["components"].is_null()) {
      report["components"] = r.components;
      auto ref = nlohmann::ordered_json::array();
      for (std::size_t col = 0; col < r.reference.cols(); ++col) ref.push_back(r.reference.col(col));
      report["reference"] = std::move(ref);
    }
    nlohmann::ordered_json run;
    run["source"] = std::move(source);
    auto results = nlohmann::ordered_json::array();
    for (const auto& res : r.results) {
      results.push_back(rpca::io::result_to_json(res, r.reference));
      if (!res.ok) continue;
      const auto& model = *res.model;
      for (std::size_t comp = 0; comp < std::min(model.components(), r.reference.cols()); ++comp)
        plot << label << ',' << rpca::to_string(res.method) << ',' << comp + 1 << ','
             << rpca::io::format_double(rpca::angle_deg(model.loadings.col(comp), r.reference.col(comp))) << ','
             << rpca::io::format_double(model.eigenvalues[comp]) << '\n';
    }
    run["results"] = std::move(results);
    runs.push_back(std::move(run));
  };

  if (!c.input.empty()) {
    const rpca::DataMatrix x = load_data(c.input);
    if (c.truth.size() != x.cols()) throw UsageError("--truth needs one variance per column of the input");
    rpca::GeneratorSpec truth_spec;
    truth_spec.p = x.cols();
    truth_spec.variances = c.truth;
    f.resolve_weight(opts, x.cols());
    const std::size_t k = f.components(x.cols());
    const auto r = rpca::compare_on(x, rpca::reference_axes(truth_spec, k), methods, k, opts);
    nlohmann::ordered_json source;
    source["input"] = c.input;
    source["truth_variances"] = c.truth;
    add_run(r, "", std::move(source));
  } else {
    for (std::uint64_t seed : c.seeds) {
      const rpca::GeneratorSpec spec = gen.spec(seed);
      f.resolve_weight(opts, spec.p);
      const auto r = rpca::run_comparison(spec, methods, f.components(spec.p), opts);
      add_run(r, std::to_string(seed), rpca::io::spec_to_json(spec));
    }
  }
  report["runs"] = std::move(runs);
  emit(out, report.dump(2) + "\n");
  if (!c.plot_csv.empty()) rpca::io::write_text_file(c.plot_csv, plot.str());
  return 0;
}

int run_scores(const std::string& model_path, const std::string& input, const std::string& out) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(rpca::io::read_text_file(model_path));
  } catch (const nlohmann::json::exception& e) {
    throw rpca::io::IoError(model_path + ": " + e.what());
  }
  const rpca::PcaModel model = rpca::io::model_from_json(j);
  const rpca::DataMatrix x = load_data(input);
  if (x.cols() != model.dim())
    throw UsageError("data has " + std::to_string(x.cols()) + " columns but the model expects " +
                     std::to_string(model.dim()));
  std::ostringstream text;
  rpca::io::write_csv(text, rpca::scores(model, x), "pc");
  emit(out, text.str());
  return 0;
}

bool is_usage_code(rpca::ErrorCode code) {
  switch (code) {
    case rpca::ErrorCode::InvalidInput:
    case rpca::ErrorCode::EmptyInput:
    case rpca::ErrorCode::InvalidK:
    case rpca::ErrorCode::DimMismatch: return true;
    default: return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust principal component analysis toolkit"};
  app.require_subcommand(1);
  unsigned threads = 1;
  app.add_option("--threads", threads, "worker threads (results do not depend on it)")
      ->check(CLI::Range(1u, 256u));

  GeneratorFlags gen;
  FitFlags fit_flags;
  CompareFlags cmp;
  std::uint64_t seed = 7;
  std::string input, output, model_path;

  auto* generate = app.add_subcommand("generate", "write a synthetic contaminated Gaussian sample as CSV");
  gen.attach(*generate);
  generate->add_option("--seed", seed, "generator seed");
  generate->add_option("-o,--output", output, "output CSV (default: stdout)");

  auto* fit = app.add_subcommand("fit", "fit a PCA model and write it as JSON");
  fit->add_option("-i,--input", input, "data CSV")->required();
  fit->add_option("-o,--output", output, "output JSON (default: stdout)");
  fit_flags.attach(*fit, true);

  auto* compare = app.add_subcommand("compare", "compare methods by their angle to the true axes");
  gen.attach(*compare);
  fit_flags.attach(*compare, false);
  compare->add_option("--methods", cmp.methods, "comma-separated methods, or 'all'")->delimiter(',');
  compare->add_option("--seed,--seeds", cmp.seeds, "generator seeds, comma-separated")->delimiter(',');
  compare->add_option("-i,--input", cmp.input, "compare on this CSV instead of generated data");
  compare->add_option("--truth", cmp.truth, "true per-variable variances for --input (defines the axes)")
      ->delimiter(',');
  compare->add_option("-o,--output", output, "report JSON (default: stdout)");
  compare->add_option("--plot-csv", cmp.plot_csv, "also write seed,method,component,angle_deg,eigenvalue rows");

  auto* scores = app.add_subcommand("scores", "project data onto a fitted model");
  scores->add_option("--model", model_path, "model JSON from 'fit'")->required();
  scores->add_option("-i,--input", input, "data CSV")->required();
  scores->add_option("-o,--output", output, "output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*generate) return run_generate(gen, seed, output);
    if (*fit) return run_fit(fit_flags, input, output, threads);
    if (*compare) return run_compare(gen, fit_flags, cmp, output, threads);
    if (*scores) return run_scores(model_path, input, output);
  } catch (const UsageError& e) {
    std::cerr << "rpca: " << e.what() << '\n';
    return kExitUsage;
  } catch (const rpca::io::IoError& e) {
    std::cerr << "rpca: " << e.what() << '\n';
    return kExitUsage;
  } catch (const rpca::Error& e) {
    std::cerr << "rpca: " << e.what() << '\n';
    return is_usage_code(e.code()) ? kExitUsage : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "rpca: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
