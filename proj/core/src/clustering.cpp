#include "mvcovh/clustering.hpp"

#include <cmath>
#include <limits>

#include "mvcovh/error.hpp"

namespace mvcovh {
namespace {

void check_assignment(const Assignment& a, Eigen::Index samples, int clusters) {
  require(static_cast<Eigen::Index>(a.size()) == samples, ErrorKind::shape_mismatch,
          "assignment length " + std::to_string(a.size()) + " does not match " +
              std::to_string(samples) + " samples");
  for (int c : a)
    require(c >= 0 && c < clusters, ErrorKind::invalid_value,
            "cluster index " + std::to_string(c) + " outside [0, " + std::to_string(clusters) + ")");
}

void check_cluster_count(int clusters, int samples) {
  require(clusters >= 2 && clusters <= samples, ErrorKind::invalid_parameter,
          "cluster count must lie in [2, " + std::to_string(samples) + "], got " +
              std::to_string(clusters));
}

std::vector<int> cluster_sizes(const Assignment& a, int clusters) {
  std::vector<int> sizes(static_cast<std::size_t>(clusters), 0);
  for (int c : a) ++sizes[static_cast<std::size_t>(c)];
  return sizes;
}

// Means of the member columns; empty clusters are left at zero and reported
// through `sizes`.
Matrix member_means(const Matrix& X, const Assignment& a, int clusters, std::vector<int>& sizes) {
  Matrix sums = Matrix::Zero(X.rows(), clusters);
  sizes = cluster_sizes(a, clusters);
  for (Eigen::Index j = 0; j < X.cols(); ++j) sums.col(a[static_cast<std::size_t>(j)]) += X.col(j);
  for (int i = 0; i < clusters; ++i)
    if (sizes[static_cast<std::size_t>(i)] > 0) sums.col(i) /= sizes[static_cast<std::size_t>(i)];
  return sums;
}

// Picks `count` distinct sample indices. Under the weighted strategy the first
// pick is uniform and each later pick has probability proportional to the
// squared distance to the nearest earlier pick.
template <class PairDistance>
std::vector<int> initial_indices(int samples, int count, Rng& rng, InitStrategy init,
                                 PairDistance&& distance) {
  if (init == InitStrategy::uniform) return sample_without_replacement(rng, samples, count);

  std::vector<int> picks;
  std::vector<double> nearest(static_cast<std::size_t>(samples),
                              std::numeric_limits<double>::infinity());
  std::vector<bool> taken(static_cast<std::size_t>(samples), false);
  std::uniform_int_distribution<int> first(0, samples - 1);
  int next = first(rng);
  while (true) {
    picks.push_back(next);
    taken[static_cast<std::size_t>(next)] = true;
    if (static_cast<int>(picks.size()) == count) break;

    double total = 0.0;
    for (int j = 0; j < samples; ++j) {
      auto& d = nearest[static_cast<std::size_t>(j)];
      d = taken[static_cast<std::size_t>(j)] ? 0.0 : std::min(d, distance(j, next));
      total += d;
    }
    if (total > 0.0 && std::isfinite(total)) {
      const double target = uniform01(rng) * total;
      double running = 0.0;
      next = -1;
      int last_positive = -1;
      for (int j = 0; j < samples; ++j) {
        const double d = nearest[static_cast<std::size_t>(j)];
        if (d <= 0.0) continue;
        last_positive = j;
        running += d;
        if (running > target) {
          next = j;
          break;
        }
      }
      if (next < 0) next = last_positive;
    } else {
      // Every remaining sample duplicates an earlier pick.
      std::vector<int> rest;
      for (int j = 0; j < samples; ++j)
        if (!taken[static_cast<std::size_t>(j)]) rest.push_back(j);
      std::uniform_int_distribution<std::size_t> pick(0, rest.size() - 1);
      next = rest[pick(rng)];
    }
  }
  return picks;
}

// Moves into each empty cluster the sample with the largest distance to its
// current center, drawn from clusters that keep at least one member. The moved
// sample sits exactly on the re-seeded center, so the objective cannot rise.
template <class DistanceToOwn>
void fill_empty_clusters(Assignment& a, int clusters, DistanceToOwn&& distance_to_own) {
  auto sizes = cluster_sizes(a, clusters);
  for (int i = 0; i < clusters; ++i) {
    if (sizes[static_cast<std::size_t>(i)] > 0) continue;
    int best = -1;
    double best_d = -1.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (sizes[static_cast<std::size_t>(a[j])] < 2) continue;
      const double d = distance_to_own(static_cast<int>(j));
      if (d > best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    if (best < 0) fail(ErrorKind::invalid_parameter, "more clusters than samples");
    --sizes[static_cast<std::size_t>(a[static_cast<std::size_t>(best)])];
    a[static_cast<std::size_t>(best)] = i;
    ++sizes[static_cast<std::size_t>(i)];
  }
}

double entropy_term(const Vector& w) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k)
    if (w[k] > 0.0) s += w[k] * std::log(w[k]);
  return s;
}

void check_finite_objective(double value, int iteration) {
  require(std::isfinite(value), ErrorKind::numerical_failure,
          "objective became non-finite at iteration " + std::to_string(iteration));
}

void check_state_shapes(const MultiViewDataset& data, const Matrix& H, const ClusterState& s) {
  const auto n = static_cast<Eigen::Index>(data.num_samples());
  require(H.cols() == n, ErrorKind::shape_mismatch,
          "hidden matrix has " + std::to_string(H.cols()) + " columns, expected " + std::to_string(n));
  require(s.V_hidden.rows() == H.rows(), ErrorKind::shape_mismatch,
          "hidden centers do not match the hidden dimension");
  require(s.V.size() == static_cast<std::size_t>(data.num_views()) &&
              s.w.size() == data.num_views(),
          ErrorKind::shape_mismatch, "state does not match the dataset's view count");
  const auto c = s.V_hidden.cols();
  for (int k = 0; k < data.num_views(); ++k) {
    const auto& Vk = s.V[static_cast<std::size_t>(k)];
    require(Vk.rows() == data.view(k).data.rows() && Vk.cols() == c, ErrorKind::shape_mismatch,
            "visible centers of view " + std::to_string(k) + " have the wrong shape");
  }
  check_assignment(s.assignment, n, static_cast<int>(c));
}

double visible_distance(const MultiViewDataset& data, const ClusterState& s, int j, int cluster) {
  double d = 0.0;
  for (int k = 0; k < data.num_views(); ++k)
    d += s.w[k] * (data.view(k).data.col(j) - s.V[static_cast<std::size_t>(k)].col(cluster)).squaredNorm();
  return d;
}

double composite_distance(const MultiViewDataset& data, const Matrix& H, const ClusterState& s,
                          double beta, int j, int cluster) {
  const double dh = (H.col(j) - s.V_hidden.col(cluster)).squaredNorm();
  return beta * dh + (1.0 - beta) * visible_distance(data, s, j, cluster);
}

}  // namespace

std::string_view to_string(InitStrategy s) noexcept {
  return s == InitStrategy::uniform ? "uniform" : "weighted";
}

InitStrategy parse_init_strategy(std::string_view name) {
  if (name == "uniform") return InitStrategy::uniform;
  if (name == "weighted") return InitStrategy::weighted;
  fail(ErrorKind::invalid_parameter, "unknown init strategy '" + std::string(name) + "'");
}

void HyperParams::validate() const {
  require(clusters >= 2, ErrorKind::invalid_parameter, "cluster count must be >= 2");
  require(std::isfinite(beta) && beta >= 0.0 && beta <= 1.0, ErrorKind::invalid_parameter,
          "beta must lie in [0, 1]");
  require(std::isfinite(eta) && eta > 0.0, ErrorKind::invalid_parameter, "eta must be > 0");
  require(hidden_dim >= 1, ErrorKind::invalid_parameter, "hidden dimension must be >= 1");
  require(std::isfinite(lambda) && lambda > 0.0, ErrorKind::invalid_parameter,
          "lambda must be > 0");
  require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorKind::invalid_parameter,
          "epsilon must be >= 0");
  require(std::isfinite(nmf_epsilon) && nmf_epsilon >= 0.0, ErrorKind::invalid_parameter,
          "NMF epsilon must be >= 0");
  require(max_iter >= 0 && nmf_max_iter >= 0, ErrorKind::invalid_parameter,
          "iteration limits must be >= 0");
}

// --- K-means -----------------------------------------------------------------

Assignment kmeans_assign(const Matrix& X, const Matrix& centers) {
  require(centers.cols() >= 1, ErrorKind::shape_mismatch, "need at least one center");
  require(centers.rows() == X.rows(), ErrorKind::shape_mismatch,
          "centers have " + std::to_string(centers.rows()) + " features, data has " +
              std::to_string(X.rows()));
  Assignment a(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < centers.cols(); ++i) {
      const double d = (X.col(j) - centers.col(i)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    a[static_cast<std::size_t>(j)] = best;
  }
  return a;
}

Matrix kmeans_centers(const Matrix& X, const Assignment& assignment, int clusters) {
  require(clusters >= 1, ErrorKind::invalid_parameter, "cluster count must be >= 1");
  check_assignment(assignment, X.cols(), clusters);
  std::vector<int> sizes;
  Matrix centers = member_means(X, assignment, clusters, sizes);

  std::vector<bool> used(static_cast<std::size_t>(X.cols()), false);
  for (int i = 0; i < clusters; ++i) {
    if (sizes[static_cast<std::size_t>(i)] > 0) continue;
    int best = -1;
    double best_d = -1.0;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const int own = assignment[static_cast<std::size_t>(j)];
      const double d = (X.col(j) - centers.col(own)).squaredNorm();
      if (d > best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    if (best < 0) break;
    used[static_cast<std::size_t>(best)] = true;
    centers.col(i) = X.col(best);
  }
  return centers;
}

double kmeans_objective(const Matrix& X, const Assignment& assignment, const Matrix& centers) {
  check_assignment(assignment, X.cols(), static_cast<int>(centers.cols()));
  double s = 0.0;
  for (Eigen::Index j = 0; j < X.cols(); ++j)
    s += (X.col(j) - centers.col(assignment[static_cast<std::size_t>(j)])).squaredNorm();
  return s;
}

KMeansResult kmeans_fit(const Matrix& X, int clusters, SolverOptions options, Seed seed,
                        InitStrategy init) {
  const int n = static_cast<int>(X.cols());
  check_cluster_count(clusters, n);
  require(X.allFinite(), ErrorKind::invalid_value, "data must be finite");
  require(options.max_iter >= 0, ErrorKind::invalid_parameter, "max_iter must be >= 0");

  auto rng = make_rng(seed);
  const auto picks = initial_indices(n, clusters, rng, init, [&](int j, int l) {
    return (X.col(j) - X.col(l)).squaredNorm();
  });

  KMeansResult r;
  r.centers = Matrix(X.rows(), clusters);
  for (int i = 0; i < clusters; ++i) r.centers.col(i) = X.col(picks[static_cast<std::size_t>(i)]);

  auto assign_step = [&] {
    r.assignment = kmeans_assign(X, r.centers);
    fill_empty_clusters(r.assignment, clusters, [&](int j) {
      return (X.col(j) - r.centers.col(r.assignment[static_cast<std::size_t>(j)])).squaredNorm();
    });
  };

  assign_step();
  r.objective_trace.push_back(kmeans_objective(X, r.assignment, r.centers));
  check_finite_objective(r.objective_trace.back(), 0);

  for (int t = 1; t <= options.max_iter; ++t) {
    assign_step();
    std::vector<int> sizes;
    r.centers = member_means(X, r.assignment, clusters, sizes);
    const double obj = kmeans_objective(X, r.assignment, r.centers);
    check_finite_objective(obj, t);
    const double prev = r.objective_trace.back();
    r.objective_trace.push_back(obj);
    r.iterations = t;
    if (relative_change(prev, obj) < options.epsilon) {
      r.converged = true;
      break;
    }
  }
  return r;
}

// --- visible/hidden collaborative clustering ---------------------------------

std::vector<double> per_view_dispersions(const MultiViewDataset& data, const ClusterState& state) {
  std::vector<double> d(static_cast<std::size_t>(data.num_views()), 0.0);
  for (int k = 0; k < data.num_views(); ++k) {
    const auto& Vk = state.V.at(static_cast<std::size_t>(k));
    require(Vk.rows() == data.view(k).data.rows(), ErrorKind::shape_mismatch,
            "visible centers of view " + std::to_string(k) + " have the wrong shape");
    d[static_cast<std::size_t>(k)] = kmeans_objective(data.view(k).data, state.assignment, Vk);
  }
  return d;
}

double hidden_dispersion(const Matrix& H, const ClusterState& state) {
  require(state.V_hidden.rows() == H.rows(), ErrorKind::shape_mismatch,
          "hidden centers do not match the hidden dimension");
  return kmeans_objective(H, state.assignment, state.V_hidden);
}

double mvcovh_objective(const MultiViewDataset& data, const Matrix& H, const ClusterState& state,
                        double beta, double eta) {
  check_state_shapes(data, H, state);
  const auto dv = per_view_dispersions(data, state);
  double visible = 0.0;
  for (std::size_t k = 0; k < dv.size(); ++k) visible += state.w[static_cast<Eigen::Index>(k)] * dv[k];
  return beta * hidden_dispersion(H, state) + (1.0 - beta) * visible + eta * entropy_term(state.w);
}

Vector composite_distances(const MultiViewDataset& data, const Matrix& H,
                           const ClusterState& state, double beta, int sample) {
  const int c = state.num_clusters();
  Vector d(c);
  for (int s = 0; s < c; ++s) d[s] = composite_distance(data, H, state, beta, sample, s);
  return d;
}

Assignment mvcovh_assign(const MultiViewDataset& data, const Matrix& H, const ClusterState& state,
                         double beta) {
  ClusterState probe = state;
  probe.assignment.assign(static_cast<std::size_t>(data.num_samples()), 0);
  check_state_shapes(data, H, probe);

  const int c = state.num_clusters();
  require(c >= 1, ErrorKind::shape_mismatch, "need at least one center");
  Assignment a(static_cast<std::size_t>(data.num_samples()));
  for (int j = 0; j < data.num_samples(); ++j) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int s = 0; s < c; ++s) {
      const double d = composite_distance(data, H, state, beta, j, s);
      if (d < best_d) {
        best_d = d;
        best = s;
      }
    }
    a[static_cast<std::size_t>(j)] = best;
  }
  return a;
}

std::vector<Matrix> mvcovh_visible_centers(const MultiViewDataset& data,
                                           const Assignment& assignment, int clusters) {
  std::vector<Matrix> V;
  V.reserve(static_cast<std::size_t>(data.num_views()));
  for (const auto& view : data.views()) V.push_back(kmeans_centers(view.data, assignment, clusters));
  return V;
}

Matrix mvcovh_hidden_centers(const Matrix& H, const Assignment& assignment, int clusters) {
  return kmeans_centers(H, assignment, clusters);
}

Vector mvcovh_weights(const MultiViewDataset& data, const ClusterState& state, double beta,
                      double eta) {
  require(std::isfinite(eta) && eta > 0.0, ErrorKind::invalid_parameter,
          "view-weight update needs eta > 0");
  auto costs = per_view_dispersions(data, state);
  for (auto& c : costs) c *= (1.0 - beta);
  return softmin_weights(costs, eta);
}

ClusterState mvcovh_fit(const MultiViewDataset& data, const Matrix& H, const HyperParams& params,
                        const ClusterObserver& observer) {
  params.validate();
  const int n = data.num_samples();
  const int c = params.clusters;
  const int views = data.num_views();
  check_cluster_count(c, n);
  require(H.cols() == n, ErrorKind::shape_mismatch,
          "hidden matrix has " + std::to_string(H.cols()) + " columns, expected " + std::to_string(n));
  require(H.rows() >= 1 && H.allFinite(), ErrorKind::invalid_value,
          "hidden matrix must be finite with at least one row");
  for (const auto& v : data.views())
    require(v.data.allFinite(), ErrorKind::invalid_value, "view '" + v.name + "' is not finite");

  const double beta = params.beta;
  ClusterState s;
  s.w = Vector::Constant(views, 1.0 / views);

  auto rng = make_rng(params.seed);
  const auto picks = initial_indices(n, c, rng, params.init, [&](int j, int l) {
    const double dh = (H.col(j) - H.col(l)).squaredNorm();
    double dv = 0.0;
    for (int k = 0; k < views; ++k)
      dv += s.w[k] * (data.view(k).data.col(j) - data.view(k).data.col(l)).squaredNorm();
    return beta * dh + (1.0 - beta) * dv;
  });

  s.V_hidden = Matrix(H.rows(), c);
  for (int k = 0; k < views; ++k) s.V.emplace_back(data.view(k).data.rows(), c);
  for (int i = 0; i < c; ++i) {
    const int j = picks[static_cast<std::size_t>(i)];
    s.V_hidden.col(i) = H.col(j);
    for (int k = 0; k < views; ++k) s.V[static_cast<std::size_t>(k)].col(i) = data.view(k).data.col(j);
  }

  auto assign_step = [&] {
    s.assignment = mvcovh_assign(data, H, s, beta);
    fill_empty_clusters(s.assignment, c, [&](int j) {
      return composite_distance(data, H, s, beta, j, s.assignment[static_cast<std::size_t>(j)]);
    });
  };

  assign_step();
  s.objective_trace.push_back(mvcovh_objective(data, H, s, beta, params.eta));
  check_finite_objective(s.objective_trace.back(), 0);
  if (observer) observer(0, s);

  for (int t = 1; t <= params.max_iter; ++t) {
    assign_step();
    std::vector<int> sizes;
    for (int k = 0; k < views; ++k)
      s.V[static_cast<std::size_t>(k)] = member_means(data.view(k).data, s.assignment, c, sizes);
    s.V_hidden = member_means(H, s.assignment, c, sizes);
    s.w = mvcovh_weights(data, s, beta, params.eta);

    const double obj = mvcovh_objective(data, H, s, beta, params.eta);
    check_finite_objective(obj, t);
    const double prev = s.objective_trace.back();
    s.objective_trace.push_back(obj);
    s.iterations = t;
    if (observer) observer(t, s);
    if (relative_change(prev, obj) < params.epsilon) {
      s.converged = true;
      break;
    }
  }
  return s;
}

Seed hidden_stage_seed(Seed master) { return derive_seed(master, {0}); }
Seed cluster_stage_seed(Seed master) { return derive_seed(master, {1}); }

PipelineResult fit_pipeline(const MultiViewDataset& data, const HyperParams& params) {
  params.validate();
  const auto normalized = normalize_dataset(data);
  PipelineResult r;
  r.hidden = shd_nmf(normalized, params.hidden_dim, params.lambda,
                     {params.nmf_epsilon, params.nmf_max_iter}, hidden_stage_seed(params.seed));
  HyperParams stage = params;
  stage.seed = cluster_stage_seed(params.seed);
  r.clusters = mvcovh_fit(normalized, r.hidden.H, stage);
  return r;
}

}  // namespace mvcovh
