#include "mvcovh/report_io.hpp"

#include <fstream>

#include "mvcovh/csv.hpp"
#include "mvcovh/error.hpp"

namespace mvcovh {
namespace {

nlohmann::json summary_json(const MetricSummary& s) { return {{"mean", s.mean}, {"sd", s.sd}}; }

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

nlohmann::json cell_json(const CellReport& cell) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : cell.runs) {
    auto m = to_json(r.metrics);
    m["seed"] = r.seed;
    m["iterations"] = r.iterations;
    m["hidden_iterations"] = r.hidden_iterations;
    m["final_objective"] = r.final_objective;
    runs.push_back(std::move(m));
  }
  return {{"params", to_json(cell.params)},
          {"nmi", summary_json(cell.nmi)},
          {"rand_index", summary_json(cell.rand_index)},
          {"precision", summary_json(cell.precision)},
          {"runs", std::move(runs)},
          {"objective_trace", cell.objective_trace}};
}

}  // namespace

nlohmann::json to_json(const HyperParams& p) {
  return {{"clusters", p.clusters},       {"beta", p.beta},
          {"eta", p.eta},                 {"hidden_dim", p.hidden_dim},
          {"lambda", p.lambda},           {"epsilon", p.epsilon},
          {"max_iter", p.max_iter},       {"nmf_epsilon", p.nmf_epsilon},
          {"nmf_max_iter", p.nmf_max_iter}, {"seed", p.seed},
          {"init", std::string(to_string(p.init))}};
}

nlohmann::json to_json(const MetricReport& m) {
  return {{"nmi", m.nmi},
          {"rand_index", m.rand_index},
          {"precision", m.precision},
          {"nmi_degenerate", m.nmi_degenerate}};
}

nlohmann::json to_json(const RunReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) cells.push_back(cell_json(c));

  nlohmann::json j{{"kind", report.kind},
                   {"dataset", report.dataset},
                   {"master_seed", report.master_seed},
                   {"repeats", report.repeats},
                   {"seeds", report.seeds},
                   {"hidden_fits", report.hidden_fits},
                   {"best_cell", report.best_cell},
                   {"cells", std::move(cells)}};
  const auto& best = report.best();
  j["best"] = {{"params", to_json(best.params)},
               {"nmi", summary_json(best.nmi)},
               {"rand_index", summary_json(best.rand_index)},
               {"precision", summary_json(best.precision)}};

  if (report.kind == "sweep-beta") {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : beta_rows(report))
      rows.push_back({{"beta", r.beta},
                      {"nmi", summary_json(r.nmi)},
                      {"rand_index", summary_json(r.rand_index)},
                      {"precision", summary_json(r.precision)}});
    j["rows"] = std::move(rows);
  } else if (report.kind == "ablate" && report.cells.size() == 2) {
    j["arms"] = {{"without_hidden", summary_json(report.cells[0].nmi)},
                 {"with_hidden", summary_json(report.cells[1].nmi)}};
  }
  return j;
}

nlohmann::json model_json(const HiddenSpaceModel& model) {
  return {{"r", model.rank()},
          {"lambda", model.lambda},
          {"q", to_std(model.q)},
          {"objective_trace", model.objective_trace},
          {"iterations", model.iterations},
          {"converged", model.converged},
          {"views", model.W.size()}};
}

nlohmann::json fit_report_json(const MultiViewDataset& normalized, const PipelineResult& fit,
                               const HyperParams& params, const std::vector<int>* labels) {
  const auto& s = fit.clusters;
  nlohmann::json j{{"params", to_json(params)},
                   {"iterations", s.iterations},
                   {"converged", s.converged},
                   {"objective_trace", s.objective_trace},
                   {"w", to_std(s.w)},
                   {"assignment", s.assignment},
                   {"per_view_dispersions", per_view_dispersions(normalized, s)},
                   {"hidden", model_json(fit.hidden)}};
  if (labels) j["metrics"] = to_json(evaluate(*labels, s.assignment));
  return j;
}

void save_model(const HiddenSpaceModel& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_json(dir / "model.json", model_json(model));
  csv::write_matrix(dir / "hidden_H.csv", model.H);
  for (std::size_t k = 0; k < model.W.size(); ++k)
    csv::write_matrix(dir / ("W_" + std::to_string(k) + ".csv"), model.W[k]);
}

HiddenSpaceModel load_model(const std::filesystem::path& dir) {
  std::ifstream in(dir / "model.json");
  require(in.good(), ErrorKind::missing_file, "cannot open " + (dir / "model.json").string());
  nlohmann::json j;
  try {
    in >> j;
    HiddenSpaceModel m;
    m.lambda = j.at("lambda").get<double>();
    const auto q = j.at("q").get<std::vector<double>>();
    m.q = Eigen::Map<const Vector>(q.data(), static_cast<Eigen::Index>(q.size()));
    m.objective_trace = j.at("objective_trace").get<std::vector<double>>();
    m.iterations = j.value("iterations", 0);
    m.converged = j.value("converged", false);
    m.H = csv::read_matrix(dir / "hidden_H.csv", false);
    const auto views = j.value("views", q.size());
    for (std::size_t k = 0; k < views; ++k)
      m.W.push_back(csv::read_matrix(dir / ("W_" + std::to_string(k) + ".csv"), false));
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::malformed_manifest, (dir / "model.json").string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  csv::write_text(path, j.dump(2) + "\n");
}

}  // namespace mvcovh
