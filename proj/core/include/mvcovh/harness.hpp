#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mvcovh/clustering.hpp"
#include "mvcovh/metrics.hpp"

namespace mvcovh {

/// {2^-6, 2^-5, ..., 2^6}
std::vector<double> power_of_two_grid();
/// {0.0, 0.1, ..., 1.0}
std::vector<double> default_beta_grid();
/// ceil(0.1 d), ceil(0.2 d), ..., d; or 1..d when d <= 10.
std::vector<int> default_hidden_dim_grid(int min_features);

struct GridSpec {
  std::vector<double> eta;
  std::vector<double> beta;
  std::vector<int> hidden_dim;
  std::vector<double> lambda;
  int repeats = 10;

  static GridSpec defaults(int min_features);
  void validate() const;
  std::size_t cell_count() const noexcept {
    return eta.size() * beta.size() * hidden_dim.size() * lambda.size();
  }
};

struct MetricSummary {
  double mean = 0.0;
  double sd = 0.0;  ///< population standard deviation
};

/// Streaming mean and population SD.
MetricSummary summarize(std::span<const double> values);

struct RepeatRecord {
  Seed seed = 0;
  MetricReport metrics;
  int iterations = 0;
  int hidden_iterations = 0;
  double final_objective = 0.0;
};

struct CellReport {
  HyperParams params;
  std::vector<RepeatRecord> runs;
  MetricSummary nmi;
  MetricSummary rand_index;
  MetricSummary precision;
  std::vector<double> objective_trace;  ///< clustering objective of the first repeat
};

struct RunReport {
  std::string kind;
  std::string dataset;
  Seed master_seed = 0;
  int repeats = 0;
  std::vector<Seed> seeds;  ///< one pipeline seed per repeat, shared by every cell
  std::vector<CellReport> cells;
  int best_cell = 0;
  int hidden_fits = 0;  ///< hidden-view extractions actually run
  double wall_clock_seconds = 0.0;

  const CellReport& best() const { return cells.at(static_cast<std::size_t>(best_cell)); }
};

struct ExecutionOptions {
  int threads = 1;
};

/// Seed of repeat `index`; depends only on the master seed and the index, so
/// every cell of a grid sees the same sequence of repeats.
Seed repeat_seed(Seed master, int index);

/// Runs every cell for `repeats` seeded repeats. Hidden-view extractions are
/// shared between cells that agree on (hidden_dim, lambda, NMF limits). The
/// result is identical for any thread count.
RunReport evaluate_cells(const MultiViewDataset& data, const std::vector<HyperParams>& cells,
                         int repeats, Seed master, ExecutionOptions exec = {});

RunReport repeat_runs(const MultiViewDataset& data, const HyperParams& params, int repeats,
                      ExecutionOptions exec = {});

/// Every (eta, beta, hidden_dim, lambda) cell over `base`; the best cell has
/// the highest mean NMI, ties going to the earliest cell in that order.
RunReport grid_search(const MultiViewDataset& data, const GridSpec& grid, const HyperParams& base,
                      ExecutionOptions exec = {});

struct BetaRow {
  double beta = 0.0;
  MetricSummary nmi;
  MetricSummary rand_index;
  MetricSummary precision;
};

RunReport beta_sweep(const MultiViewDataset& data, const HyperParams& params,
                     std::span<const double> betas, int repeats, ExecutionOptions exec = {});
std::vector<BetaRow> beta_rows(const RunReport& sweep);

/// Two arms with identical repeat seeds: cells[0] runs beta = 0 (visible views
/// only), cells[1] runs params.beta, which must be > 0.
RunReport ablation_hidden(const MultiViewDataset& data, const HyperParams& params, int repeats,
                          ExecutionOptions exec = {});

/// CSV "iteration,objective" rows at full precision.
void export_trace(std::span<const double> trace, const std::filesystem::path& path);
std::vector<double> read_trace(const std::filesystem::path& path);

}  // namespace mvcovh
