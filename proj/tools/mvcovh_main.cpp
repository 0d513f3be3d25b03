// mvcovh: command line front-end for hidden-view extraction, multi-view
// clustering, evaluation and the benchmark protocols (repeats, grid search,
// beta sweep, hidden-view ablation).

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mvcovh/mvcovh.hpp"

namespace fs = std::filesystem;
using namespace mvcovh;

namespace {

struct CommonOptions {
  Seed seed = 0;
  std::optional<double> epsilon;
  std::optional<int> max_iter;
  fs::path out = ".";
  int threads = 1;
};

struct ModelOptions {
  fs::path manifest;
  int clusters = 0;
  double beta = 0.5;
  double eta = 1.0;
  std::optional<int> hidden_dim;
  double lambda = 1.0;
  int nmf_max_iter = 200;
  std::string init = "weighted";
  int repeats = 10;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_option("--epsilon", o.epsilon, "Relative objective change that stops a fit (default 1e-6)");
  cmd->add_option("--max-iter", o.max_iter, "Iteration limit (clustering 100, extraction 200)");
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads for repeats and grid cells")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

void add_manifest(CLI::App* cmd, ModelOptions& m) {
  cmd->add_option("--manifest", m.manifest, "Dataset manifest JSON")->required();
}

void add_model(CLI::App* cmd, ModelOptions& m, bool scalar_beta) {
  cmd->add_option("--clusters", m.clusters, "Number of clusters C")->required();
  if (scalar_beta) cmd->add_option("--beta", m.beta, "Hidden/visible balance")->capture_default_str();
  cmd->add_option("--eta", m.eta, "Entropy regularizer of the view weights")->capture_default_str();
  cmd->add_option("--hidden-dim", m.hidden_dim, "Hidden dimension r (default: min(C, d))");
  cmd->add_option("--lambda", m.lambda, "Entropy regularizer of the hidden-view extraction")
      ->capture_default_str();
  cmd->add_option("--nmf-max-iter", m.nmf_max_iter, "Iteration limit of the extraction stage")
      ->capture_default_str();
  cmd->add_option("--init", m.init, "Center initialization: weighted or uniform")
      ->capture_default_str()
      ->check(CLI::IsMember({"weighted", "uniform"}));
}

HyperParams make_params(const ModelOptions& m, const CommonOptions& c, const MultiViewDataset& data) {
  HyperParams p;
  p.clusters = m.clusters;
  p.beta = m.beta;
  p.eta = m.eta;
  p.hidden_dim = m.hidden_dim.value_or(std::min(m.clusters, data.min_features()));
  p.lambda = m.lambda;
  if (c.epsilon) p.epsilon = p.nmf_epsilon = *c.epsilon;
  if (c.max_iter) p.max_iter = *c.max_iter;
  p.nmf_max_iter = m.nmf_max_iter;
  p.seed = c.seed;
  p.init = parse_init_strategy(m.init);
  return p;
}

void write_timing(const fs::path& dir, double seconds) {
  write_json(dir / "timing.json", {{"wall_clock_seconds", seconds}});
}

void write_assignment(const fs::path& path, const Assignment& a) {
  std::string text;
  for (int c : a) text += std::to_string(c) + "\n";
  csv::write_text(path, text);
}

void write_run_outputs(const RunReport& report, const fs::path& dir) {
  write_json(dir / "report.json", to_json(report));
  export_trace(report.best().objective_trace, dir / "trace.csv");
  write_timing(dir, report.wall_clock_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-view clustering with a shared hidden view"};
  app.require_subcommand(1);

  CommonOptions common;
  ModelOptions model;

  // synth
  SynthSpec synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a planted multi-view dataset");
  add_common(synth_cmd, common);
  synth_cmd->add_option("--clusters", synth.clusters, "Planted classes")->capture_default_str();
  synth_cmd->add_option("--samples", synth.samples, "Sample count")->capture_default_str();
  synth_cmd->add_option("--dims", synth.dims, "Features per view")->delimiter(',')->capture_default_str();
  synth_cmd->add_option("--separation", synth.separation, "Latent center distance scale")
      ->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise, "Noise SD, one value or one per view")
      ->delimiter(',')
      ->capture_default_str();

  // extract-hidden
  auto* extract_cmd = app.add_subcommand("extract-hidden", "Extract the shared hidden view");
  add_common(extract_cmd, common);
  add_manifest(extract_cmd, model);
  int extract_rank = 1;
  extract_cmd->add_option("--hidden-dim", extract_rank, "Hidden dimension r")->required();
  extract_cmd->add_option("--lambda", model.lambda, "Entropy regularizer")->capture_default_str();

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Normalize, extract the hidden view and cluster");
  add_common(fit_cmd, common);
  add_manifest(fit_cmd, model);
  add_model(fit_cmd, model, true);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Score an assignment against the manifest labels");
  add_common(eval_cmd, common);
  add_manifest(eval_cmd, model);
  fs::path assignment_path;
  eval_cmd->add_option("--assignment", assignment_path, "One cluster index per line")->required();

  // sweep-beta
  std::vector<double> sweep_betas = default_beta_grid();
  auto* sweep_cmd = app.add_subcommand("sweep-beta", "Repeated runs across beta values");
  add_common(sweep_cmd, common);
  add_manifest(sweep_cmd, model);
  add_model(sweep_cmd, model, false);
  sweep_cmd->add_option("--beta", sweep_betas, "Beta values (default 0,0.1,...,1)")->delimiter(',');
  sweep_cmd->add_option("--repeats", model.repeats, "Seeded repeats per beta")->capture_default_str();

  // grid
  std::vector<double> grid_eta, grid_beta, grid_lambda;
  std::vector<int> grid_r;
  auto* grid_cmd = app.add_subcommand("grid", "Grid search over eta, beta, hidden dim and lambda");
  add_common(grid_cmd, common);
  add_manifest(grid_cmd, model);
  grid_cmd->add_option("--clusters", model.clusters, "Number of clusters C")->required();
  grid_cmd->add_option("--eta", grid_eta, "Eta grid (default 2^-6..2^6)")->delimiter(',');
  grid_cmd->add_option("--beta", grid_beta, "Beta grid (default 0..1 step 0.1)")->delimiter(',');
  grid_cmd->add_option("--hidden-dim", grid_r, "Hidden dimension grid (default from d)")->delimiter(',');
  grid_cmd->add_option("--lambda", grid_lambda, "Lambda grid (default 2^-6..2^6)")->delimiter(',');
  grid_cmd->add_option("--repeats", model.repeats, "Seeded repeats per cell")->capture_default_str();
  grid_cmd->add_option("--nmf-max-iter", model.nmf_max_iter, "Iteration limit of the extraction stage")
      ->capture_default_str();
  grid_cmd->add_option("--init", model.init, "Center initialization: weighted or uniform")
      ->capture_default_str()
      ->check(CLI::IsMember({"weighted", "uniform"}));

  // ablate
  auto* ablate_cmd = app.add_subcommand("ablate", "Compare beta = 0 against the given beta");
  add_common(ablate_cmd, common);
  add_manifest(ablate_cmd, model);
  add_model(ablate_cmd, model, true);
  ablate_cmd->add_option("--repeats", model.repeats, "Seeded repeats per arm")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << nlohmann::json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }

  try {
    fs::create_directories(common.out);
    const ExecutionOptions exec{common.threads};

    if (synth_cmd->parsed()) {
      synth.seed = common.seed;
      const auto data = synth_multiview(synth);
      const auto manifest = save_dataset(data, common.out);
      std::cout << manifest.string() << '\n';
    } else if (extract_cmd->parsed()) {
      const auto data = normalize_dataset(load_manifest(model.manifest));
      SolverOptions opts;
      if (common.epsilon) opts.epsilon = *common.epsilon;
      if (common.max_iter) opts.max_iter = *common.max_iter;
      const auto m = shd_nmf(data, extract_rank, model.lambda, opts, common.seed);
      save_model(m, common.out);
      write_json(common.out / "report.json", model_json(m));
      export_trace(m.objective_trace, common.out / "trace.csv");
    } else if (fit_cmd->parsed()) {
      const auto raw = load_manifest(model.manifest);
      const auto params = make_params(model, common, raw);
      const auto fit = fit_pipeline(raw, params);
      const auto data = normalize_dataset(raw);
      const auto* labels = raw.labels() ? &*raw.labels() : nullptr;
      write_json(common.out / "report.json", fit_report_json(data, fit, params, labels));
      export_trace(fit.clusters.objective_trace, common.out / "trace.csv");
      export_trace(fit.hidden.objective_trace, common.out / "hidden_trace.csv");
      write_assignment(common.out / "assignment.csv", fit.clusters.assignment);
      csv::write_matrix(common.out / "hidden_H.csv", fit.hidden.H);
      csv::write_matrix(common.out / "centers_hidden.csv", fit.clusters.V_hidden);
      for (std::size_t k = 0; k < fit.clusters.V.size(); ++k)
        csv::write_matrix(common.out / ("centers_view" + std::to_string(k) + ".csv"),
                          fit.clusters.V[k]);
    } else if (eval_cmd->parsed()) {
      const auto data = load_manifest(model.manifest);
      require(data.labels().has_value(), ErrorKind::missing_labels, "manifest has no labels");
      Assignment a;
      for (const auto& t : csv::read_tokens(assignment_path)) {
        try {
          a.push_back(std::stoi(t));
        } catch (const std::exception&) {
          fail(ErrorKind::non_numeric_cell, assignment_path.string() + ": bad cluster index '" + t + "'");
        }
      }
      write_json(common.out / "report.json", to_json(evaluate(*data.labels(), a)));
    } else if (sweep_cmd->parsed()) {
      const auto data = load_manifest(model.manifest);
      const auto params = make_params(model, common, data);
      const auto report = beta_sweep(data, params, sweep_betas, model.repeats, exec);
      write_run_outputs(report, common.out);
      std::string rows = "beta,nmi_mean,nmi_sd,rand_index_mean,rand_index_sd,precision_mean,precision_sd\n";
      for (const auto& r : beta_rows(report)) {
        for (double v : {r.beta, r.nmi.mean, r.nmi.sd, r.rand_index.mean, r.rand_index.sd,
                         r.precision.mean})
          rows += csv::format_double(v) + ",";
        rows += csv::format_double(r.precision.sd) + "\n";
      }
      csv::write_text(common.out / "sweep.csv", rows);
    } else if (grid_cmd->parsed()) {
      const auto data = load_manifest(model.manifest);
      auto grid = GridSpec::defaults(data.min_features());
      if (!grid_eta.empty()) grid.eta = grid_eta;
      if (!grid_beta.empty()) grid.beta = grid_beta;
      if (!grid_r.empty()) grid.hidden_dim = grid_r;
      if (!grid_lambda.empty()) grid.lambda = grid_lambda;
      grid.repeats = model.repeats;
      auto base = make_params(model, common, data);
      write_run_outputs(grid_search(data, grid, base, exec), common.out);
    } else if (ablate_cmd->parsed()) {
      const auto data = load_manifest(model.manifest);
      const auto params = make_params(model, common, data);
      write_run_outputs(ablation_hidden(data, params, model.repeats, exec), common.out);
    }
  } catch (const Error& e) {
    std::cerr << nlohmann::json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}}.dump()
              << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return 3;
  }
  return 0;
}
