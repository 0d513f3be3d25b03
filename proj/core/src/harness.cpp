#include "mvcovh/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "mvcovh/csv.hpp"
#include "mvcovh/error.hpp"
#include "parallel.hpp"

namespace mvcovh {
namespace {

using HiddenKey = std::tuple<int, double, double, int>;

HiddenKey hidden_key(const HyperParams& p) {
  return {p.hidden_dim, p.lambda, p.nmf_epsilon, p.nmf_max_iter};
}

void summarize_cell(CellReport& cell) {
  std::vector<double> a, b, c;
  for (const auto& r : cell.runs) {
    a.push_back(r.metrics.nmi);
    b.push_back(r.metrics.rand_index);
    c.push_back(r.metrics.precision);
  }
  cell.nmi = summarize(a);
  cell.rand_index = summarize(b);
  cell.precision = summarize(c);
}

}  // namespace

std::vector<double> power_of_two_grid() {
  std::vector<double> g;
  for (int e = -6; e <= 6; ++e) g.push_back(std::ldexp(1.0, e));
  return g;
}

std::vector<double> default_beta_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 10; ++i) g.push_back(i / 10.0);
  return g;
}

std::vector<int> default_hidden_dim_grid(int min_features) {
  require(min_features >= 1, ErrorKind::invalid_parameter, "feature count must be >= 1");
  std::vector<int> g;
  if (min_features <= 10) {
    for (int r = 1; r <= min_features; ++r) g.push_back(r);
  } else {
    for (int i = 1; i <= 10; ++i) g.push_back((i * min_features + 9) / 10);
  }
  return g;
}

GridSpec GridSpec::defaults(int min_features) {
  return {power_of_two_grid(), default_beta_grid(), default_hidden_dim_grid(min_features),
          power_of_two_grid(), 10};
}

void GridSpec::validate() const {
  require(!eta.empty() && !beta.empty() && !hidden_dim.empty() && !lambda.empty(),
          ErrorKind::invalid_parameter, "every grid axis needs at least one value");
  require(repeats >= 1, ErrorKind::invalid_parameter, "repeats must be >= 1");
}

MetricSummary summarize(std::span<const double> values) {
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double x : values) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  if (n == 0) return {};
  return {mean, std::sqrt(std::max(m2, 0.0) / static_cast<double>(n))};
}

Seed repeat_seed(Seed master, int index) {
  return derive_seed(master, {0x7265706561ULL, static_cast<std::uint64_t>(index)});
}

RunReport evaluate_cells(const MultiViewDataset& data, const std::vector<HyperParams>& cells,
                         int repeats, Seed master, ExecutionOptions exec) {
  const auto started = std::chrono::steady_clock::now();
  require(!cells.empty(), ErrorKind::invalid_parameter, "no cells to evaluate");
  require(repeats >= 1, ErrorKind::invalid_parameter, "repeats must be >= 1");
  require(data.labels().has_value(), ErrorKind::missing_labels,
          "dataset '" + data.name() + "' has no labels; metrics need ground truth");
  for (const auto& p : cells) p.validate();

  const auto normalized = normalize_dataset(data);
  const auto& labels = *normalized.labels();

  RunReport report;
  report.dataset = data.name();
  report.master_seed = master;
  report.repeats = repeats;
  for (int j = 0; j < repeats; ++j) report.seeds.push_back(repeat_seed(master, j));

  // Stage 1: one extraction per distinct hidden configuration and repeat.
  std::map<HiddenKey, int> key_index;
  std::vector<HyperParams> hidden_configs;
  for (const auto& p : cells) {
    if (key_index.try_emplace(hidden_key(p), static_cast<int>(hidden_configs.size())).second)
      hidden_configs.push_back(p);
  }
  const auto reps = static_cast<std::size_t>(repeats);
  std::vector<HiddenSpaceModel> hidden(hidden_configs.size() * reps);
  detail::parallel_for(hidden.size(), exec.threads, [&](std::size_t t) {
    const auto& p = hidden_configs[t / reps];
    const Seed seed = hidden_stage_seed(report.seeds[t % reps]);
    hidden[t] = shd_nmf(normalized, p.hidden_dim, p.lambda, {p.nmf_epsilon, p.nmf_max_iter}, seed);
  });
  report.hidden_fits = static_cast<int>(hidden.size());

  // Stage 2: clustering for every (cell, repeat).
  std::vector<ClusterState> states(cells.size() * reps);
  detail::parallel_for(states.size(), exec.threads, [&](std::size_t t) {
    const auto& p = cells[t / reps];
    const auto& h = hidden[static_cast<std::size_t>(key_index.at(hidden_key(p))) * reps + t % reps];
    HyperParams stage = p;
    stage.seed = cluster_stage_seed(report.seeds[t % reps]);
    states[t] = mvcovh_fit(normalized, h.H, stage);
  });

  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellReport cell;
    cell.params = cells[c];
    cell.params.seed = master;
    const auto hbase = static_cast<std::size_t>(key_index.at(hidden_key(cells[c]))) * reps;
    for (std::size_t j = 0; j < reps; ++j) {
      const auto& s = states[c * reps + j];
      RepeatRecord rec;
      rec.seed = report.seeds[j];
      rec.metrics = evaluate(labels, s.assignment);
      rec.iterations = s.iterations;
      rec.hidden_iterations = hidden[hbase + j].iterations;
      rec.final_objective = s.objective_trace.back();
      cell.runs.push_back(rec);
    }
    cell.objective_trace = states[c * reps].objective_trace;
    summarize_cell(cell);
    report.cells.push_back(std::move(cell));
  }

  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

RunReport repeat_runs(const MultiViewDataset& data, const HyperParams& params, int repeats,
                      ExecutionOptions exec) {
  auto r = evaluate_cells(data, {params}, repeats, params.seed, exec);
  r.kind = "repeat";
  return r;
}

RunReport grid_search(const MultiViewDataset& data, const GridSpec& grid, const HyperParams& base,
                      ExecutionOptions exec) {
  grid.validate();
  std::vector<HyperParams> cells;
  cells.reserve(grid.cell_count());
  for (double eta : grid.eta)
    for (double beta : grid.beta)
      for (int r : grid.hidden_dim)
        for (double lambda : grid.lambda) {
          HyperParams p = base;
          p.eta = eta;
          p.beta = beta;
          p.hidden_dim = r;
          p.lambda = lambda;
          cells.push_back(p);
        }

  auto report = evaluate_cells(data, cells, grid.repeats, base.seed, exec);
  report.kind = "grid";
  // Cells are enumerated in (eta, beta, hidden_dim, lambda) order, so the
  // first maximum is the lexicographically smallest tied cell.
  int best = 0;
  for (std::size_t c = 1; c < report.cells.size(); ++c)
    if (report.cells[c].nmi.mean > report.cells[static_cast<std::size_t>(best)].nmi.mean)
      best = static_cast<int>(c);
  report.best_cell = best;
  return report;
}

RunReport beta_sweep(const MultiViewDataset& data, const HyperParams& params,
                     std::span<const double> betas, int repeats, ExecutionOptions exec) {
  require(!betas.empty(), ErrorKind::invalid_parameter, "beta grid is empty");
  std::vector<HyperParams> cells;
  for (double b : betas) {
    HyperParams p = params;
    p.beta = b;
    cells.push_back(p);
  }
  auto report = evaluate_cells(data, cells, repeats, params.seed, exec);
  report.kind = "sweep-beta";
  int best = 0;
  for (std::size_t c = 1; c < report.cells.size(); ++c)
    if (report.cells[c].nmi.mean > report.cells[static_cast<std::size_t>(best)].nmi.mean)
      best = static_cast<int>(c);
  report.best_cell = best;
  return report;
}

std::vector<BetaRow> beta_rows(const RunReport& sweep) {
  std::vector<BetaRow> rows;
  for (const auto& c : sweep.cells)
    rows.push_back({c.params.beta, c.nmi, c.rand_index, c.precision});
  return rows;
}

RunReport ablation_hidden(const MultiViewDataset& data, const HyperParams& params, int repeats,
                          ExecutionOptions exec) {
  require(params.beta > 0.0, ErrorKind::invalid_parameter,
          "the with-hidden arm needs beta > 0");
  HyperParams without = params;
  without.beta = 0.0;
  auto report = evaluate_cells(data, {without, params}, repeats, params.seed, exec);
  report.kind = "ablate";
  report.best_cell = report.cells[1].nmi.mean > report.cells[0].nmi.mean ? 1 : 0;
  return report;
}

void export_trace(std::span<const double> trace, const std::filesystem::path& path) {
  require(!trace.empty(), ErrorKind::invalid_parameter, "objective trace is empty");
  std::ostringstream out;
  out << "iteration,objective\n";
  for (std::size_t t = 0; t < trace.size(); ++t) out << t << ',' << csv::format_double(trace[t]) << '\n';
  csv::write_text(path, out.str());
}

std::vector<double> read_trace(const std::filesystem::path& path) {
  const Matrix rows = csv::read_matrix(path, true);
  require(rows.cols() == 2, ErrorKind::shape_mismatch, path.string() + ": expected 2 columns");
  std::vector<double> trace(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) trace[static_cast<std::size_t>(i)] = rows(i, 1);
  return trace;
}

}  // namespace mvcovh
