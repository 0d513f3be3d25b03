#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "mvcovh/factorization.hpp"
#include "mvcovh/mvdata.hpp"
#include "mvcovh/random.hpp"

namespace mvcovh {

/// Hard partition as a dense vector: assignment[j] is the cluster of sample j.
using Assignment = std::vector<int>;

/// How the C initial centers (sample indices) are picked.
enum class InitStrategy {
  uniform,   ///< C distinct indices drawn uniformly without replacement
  weighted,  ///< D^2-weighted seeding: later picks favor samples far from earlier picks
};

std::string_view to_string(InitStrategy s) noexcept;
InitStrategy parse_init_strategy(std::string_view name);

struct HyperParams {
  int clusters = 2;
  double beta = 0.5;  ///< weight of the hidden-view dispersion, in [0, 1]
  double eta = 1.0;   ///< entropy regularizer for the visible-view weights
  int hidden_dim = 1;
  double lambda = 1.0;  ///< entropy regularizer of the hidden-view extraction
  double epsilon = 1e-6;
  int max_iter = 100;
  double nmf_epsilon = 1e-6;
  int nmf_max_iter = 200;
  Seed seed = 0;
  InitStrategy init = InitStrategy::weighted;

  /// Range checks that do not need the data (cluster count vs N and hidden
  /// dimension vs feature count are checked by the fits).
  void validate() const;
};

struct KMeansResult {
  Assignment assignment;
  Matrix centers;
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
};

struct ClusterState {
  Assignment assignment;
  std::vector<Matrix> V;  ///< visible centers, one m_k x C matrix per view
  Matrix V_hidden;        ///< hidden-view centers, r x C
  Vector w;               ///< visible-view weights
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;

  int num_clusters() const noexcept { return static_cast<int>(V_hidden.cols()); }
};

// ---------------------------------------------------------------------------
// K-means baseline
// ---------------------------------------------------------------------------

/// Nearest center per column of X; ties go to the lowest center index.
Assignment kmeans_assign(const Matrix& X, const Matrix& centers);

/// Cluster means. An empty cluster is re-seeded at the sample lying farthest
/// from its own cluster's mean.
Matrix kmeans_centers(const Matrix& X, const Assignment& assignment, int clusters);

double kmeans_objective(const Matrix& X, const Assignment& assignment, const Matrix& centers);

KMeansResult kmeans_fit(const Matrix& X, int clusters, SolverOptions options, Seed seed,
                        InitStrategy init = InitStrategy::weighted);

// ---------------------------------------------------------------------------
// Visible/hidden collaborative clustering
// ---------------------------------------------------------------------------

/// Within-cluster dispersion of each visible view under `state`.
std::vector<double> per_view_dispersions(const MultiViewDataset& data, const ClusterState& state);
double hidden_dispersion(const Matrix& H, const ClusterState& state);

double mvcovh_objective(const MultiViewDataset& data, const Matrix& H, const ClusterState& state,
                        double beta, double eta);

/// Composite distance of sample j to every center:
/// beta ||h_j - hidden_s||^2 + (1 - beta) sum_k w_k ||x^k_j - v^k_s||^2.
Vector composite_distances(const MultiViewDataset& data, const Matrix& H,
                           const ClusterState& state, double beta, int sample);

Assignment mvcovh_assign(const MultiViewDataset& data, const Matrix& H, const ClusterState& state,
                         double beta);
std::vector<Matrix> mvcovh_visible_centers(const MultiViewDataset& data,
                                           const Assignment& assignment, int clusters);
Matrix mvcovh_hidden_centers(const Matrix& H, const Assignment& assignment, int clusters);
Vector mvcovh_weights(const MultiViewDataset& data, const ClusterState& state, double beta,
                      double eta);

/// Called after the initialization (iteration 0) and after every sweep.
using ClusterObserver = std::function<void(int iteration, const ClusterState&)>;

/// Alternates assignment, visible centers, hidden centers and view weights
/// with H held fixed. Uses params.seed for the center initialization.
ClusterState mvcovh_fit(const MultiViewDataset& data, const Matrix& H, const HyperParams& params,
                        const ClusterObserver& observer = {});

inline ClusterState mvcovh_fit(const MultiViewDataset& data, const HiddenSpaceModel& hidden,
                               const HyperParams& params, const ClusterObserver& observer = {}) {
  return mvcovh_fit(data, hidden.H, params, observer);
}

struct PipelineResult {
  HiddenSpaceModel hidden;
  ClusterState clusters;
};

/// Stage seeds for the pipeline, both derived from the master seed.
Seed hidden_stage_seed(Seed master);
Seed cluster_stage_seed(Seed master);

/// Normalizes, extracts the hidden view, then clusters.
PipelineResult fit_pipeline(const MultiViewDataset& data, const HyperParams& params);

}  // namespace mvcovh
