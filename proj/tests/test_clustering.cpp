#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "mvcovh/clustering.hpp"
#include "mvcovh/error.hpp"
#include "mvcovh/metrics.hpp"
#include "mvcovh/synth.hpp"
#include "oracles.hpp"

using namespace mvcovh;

namespace {

Matrix points(std::initializer_list<std::initializer_list<double>> cols) {
  const auto rows = static_cast<Eigen::Index>(cols.begin()->size());
  Matrix m(rows, static_cast<Eigen::Index>(cols.size()));
  Eigen::Index j = 0;
  for (const auto& c : cols) {
    Eigen::Index i = 0;
    for (double v : c) m(i++, j) = v;
    ++j;
  }
  return m;
}

ClusterState random_state(const MultiViewDataset& data, const Matrix& H, int clusters,
                          std::mt19937_64& rng) {
  ClusterState s;
  for (const auto& v : data.views())
    s.V.push_back(oracle::random_matrix(rng, static_cast<int>(v.data.rows()), clusters));
  s.V_hidden = oracle::random_matrix(rng, static_cast<int>(H.rows()), clusters);
  const auto w = oracle::random_simplex_point(rng, data.num_views());
  s.w = Eigen::Map<const Vector>(w.data(), data.num_views());
  std::uniform_int_distribution<int> c(0, clusters - 1);
  for (int j = 0; j < data.num_samples(); ++j) s.assignment.push_back(c(rng));
  return s;
}

HyperParams params_for(int clusters, double beta, double eta = 1.0) {
  HyperParams p;
  p.clusters = clusters;
  p.beta = beta;
  p.eta = eta;
  return p;
}

}  // namespace

TEST(KMeansAssign, Examples) {
  const Matrix Z = points({{0, 0}, {5, 5}, {9, 0}});
  EXPECT_EQ(kmeans_assign(points({{9, 0}}), Z), (Assignment{2}));
  const Matrix two = points({{-1, 0}, {1, 0}});
  EXPECT_EQ(kmeans_assign(points({{0, 3}}), two), (Assignment{0}));
  EXPECT_THROW(kmeans_assign(points({{0, 0, 0}}), Z), Error);
}

TEST(KMeansAssign, MatchesExhaustiveScan) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix X = oracle::random_matrix(rng, 3, 6);
    const Matrix Z = oracle::random_matrix(rng, 3, 2);
    const auto a = kmeans_assign(X, Z);
    for (int j = 0; j < 6; ++j)
      EXPECT_EQ(a[static_cast<std::size_t>(j)],
                oracle::argmin({oracle::sq_dist(X, j, Z, 0), oracle::sq_dist(X, j, Z, 1)}));
  }
}

TEST(KMeansCenters, MeansAndRepair) {
  const Matrix same = points({{1, 2}, {1, 2}});
  EXPECT_EQ(kmeans_centers(same, {0, 0}, 1), points({{1, 2}}));

  const Matrix X = points({{0, 0}, {2, 2}, {10, 10}});
  EXPECT_EQ(kmeans_centers(X, {0, 0, 1}, 2).col(0), Eigen::Vector2d(1, 1));

  // Cluster 1 is empty; the sample farthest from its own center (the mean of
  // all three, [4, 4]) is [10, 10].
  const Matrix repaired = kmeans_centers(X, {0, 0, 0}, 2);
  EXPECT_EQ(repaired.col(1), Eigen::Vector2d(10, 10));
  EXPECT_EQ(repaired.col(0), Eigen::Vector2d(4, 4));
}

TEST(KMeansFit, MatchesBestPartitionOnSeparatedPairs) {
  const Matrix X = points({{0, 0}, {0, 1}, {10, 10}, {10, 11}});
  const auto r = kmeans_fit(X, 2, {1e-9, 50}, 4);
  const double brute = oracle::best_partition_cost(X, 2);
  EXPECT_DOUBLE_EQ(brute, 1.0);
  EXPECT_DOUBLE_EQ(r.objective_trace.back(), brute);
}

TEST(KMeansFit, SingletonClustersReachZero) {
  std::mt19937_64 rng(2);
  const Matrix X = oracle::random_matrix(rng, 2, 5);
  for (auto init : {InitStrategy::weighted, InitStrategy::uniform}) {
    const auto r = kmeans_fit(X, 5, {1e-9, 20}, 1, init);
    EXPECT_DOUBLE_EQ(r.objective_trace.back(), 0.0);
  }
}

TEST(KMeansFit, DeterministicAndValidated) {
  std::mt19937_64 rng(3);
  const Matrix X = oracle::random_matrix(rng, 3, 40);
  const auto a = kmeans_fit(X, 4, {1e-6, 100}, 77);
  const auto b = kmeans_fit(X, 4, {1e-6, 100}, 77);
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.objective_trace, b.objective_trace);
  EXPECT_THROW(kmeans_fit(X, 1, {}, 0), Error);
  EXPECT_THROW(kmeans_fit(X, 41, {}, 0), Error);
}

TEST(KMeansFit, DuplicateSamplesStillFillEveryCluster) {
  Matrix X = Matrix::Zero(2, 6);
  X.col(5) << 1, 1;
  const auto r = kmeans_fit(X, 3, {1e-9, 10}, 5, InitStrategy::uniform);
  std::vector<int> sizes(3, 0);
  for (int c : r.assignment) ++sizes[static_cast<std::size_t>(c)];
  for (int s : sizes) EXPECT_GE(s, 1);
  EXPECT_TRUE(oracle::non_increasing(r.objective_trace, 1e-9));
}

TEST(MvcovhObjective, WorkedValues) {
  // 1-D views; both clusters are singletons sitting on their centers.
  MultiViewDataset data("d", {{"a", points({{0}, {1}})}, {"b", points({{0}, {1}})}});
  const Matrix H = points({{0}, {1}});
  ClusterState s;
  s.assignment = {0, 1};
  s.V = {points({{0}, {1}}), points({{0}, {1}})};
  s.V_hidden = points({{0}, {1}});
  s.w = Vector::Constant(2, 0.5);
  EXPECT_DOUBLE_EQ(mvcovh_objective(data, H, s, 0.5, 0.0), 0.0);

  // One cluster holding both samples with center 0 everywhere: dispersions
  // are sums of squared coordinates.
  MultiViewDataset d2("d", {{"a", points({{1}, {1}})}, {"b", points({{std::sqrt(2.0)}, {std::sqrt(2.0)}})}});
  ClusterState t;
  t.assignment = {0, 0};
  t.V = {points({{0}, {5}}), points({{0}, {5}})};
  t.V_hidden = points({{0}, {5}});
  t.w = Vector::Constant(2, 0.5);
  const auto d = per_view_dispersions(d2, t);
  EXPECT_DOUBLE_EQ(d[0], 2.0);
  EXPECT_NEAR(d[1], 4.0, 1e-14);
  EXPECT_NEAR(mvcovh_objective(d2, H, t, 0.0, 0.0), 3.0, 1e-14);

  // beta = 1 ignores the visible data.
  const double a = mvcovh_objective(d2, H, t, 1.0, 0.7);
  MultiViewDataset d3("d", {{"a", points({{7}, {-3}})}, {"b", points({{2}, {2}})}});
  EXPECT_DOUBLE_EQ(mvcovh_objective(d3, H, t, 1.0, 0.7), a);
}

TEST(MvcovhAssign, Reductions) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    auto data = oracle::random_dataset(rng, {3, 2}, 8);
    const Matrix H = oracle::random_matrix(rng, 2, 8);
    auto s = random_state(data, H, 3, rng);
    EXPECT_EQ(mvcovh_assign(data, H, s, 1.0), kmeans_assign(H, s.V_hidden));

    MultiViewDataset one("one", {data.view(0)});
    ClusterState s1 = s;
    s1.V = {s.V[0]};
    s1.w = Vector::Ones(1);
    EXPECT_EQ(mvcovh_assign(one, H, s1, 0.0), kmeans_assign(data.view(0).data, s.V[0]));
  }
}

TEST(MvcovhAssign, MatchesExhaustiveCompositeDistance) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 8)(rng);
    auto data = oracle::random_dataset(rng, {3, 2}, n);
    const Matrix H = oracle::random_matrix(rng, 2, n);
    const auto s = random_state(data, H, 2, rng);
    const double beta = 0.4;
    const auto a = mvcovh_assign(data, H, s, beta);
    for (int j = 0; j < n; ++j) {
      std::vector<double> d;
      for (int c = 0; c < 2; ++c) {
        double v = beta * oracle::sq_dist(H, j, s.V_hidden, c);
        for (int k = 0; k < 2; ++k)
          v += (1 - beta) * s.w[k] * oracle::sq_dist(data.view(k).data, j, s.V[static_cast<std::size_t>(k)], c);
        d.push_back(v);
      }
      EXPECT_EQ(a[static_cast<std::size_t>(j)], oracle::argmin(d));
    }
  }
}

TEST(MvcovhAssign, ScalingAllDistancesKeepsAssignment) {
  std::mt19937_64 rng(6);
  auto data = oracle::random_dataset(rng, {3, 4}, 20);
  const Matrix H = oracle::random_matrix(rng, 2, 20);
  const auto s = random_state(data, H, 4, rng);
  const auto base = mvcovh_assign(data, H, s, 0.3);
  // Scaling every coordinate by c scales every composite distance by c^2.
  std::vector<ViewMatrix> scaled;
  for (const auto& v : data.views()) scaled.push_back({v.name, v.data * 3.0});
  ClusterState t = s;
  for (auto& V : t.V) V *= 3.0;
  t.V_hidden *= 3.0;
  EXPECT_EQ(mvcovh_assign(MultiViewDataset("s", scaled), H * 3.0, t, 0.3), base);
}

TEST(MvcovhCenters, Examples) {
  MultiViewDataset data("d", {{"a", points({{1}, {3}, {8}})}});
  EXPECT_DOUBLE_EQ(mvcovh_visible_centers(data, {0, 0, 1}, 2)[0](0, 0), 2.0);
  EXPECT_DOUBLE_EQ(mvcovh_visible_centers(data, {0, 0, 0}, 1)[0](0, 0), 4.0);
  EXPECT_EQ(mvcovh_visible_centers(data, {0, 1, 1}, 2)[0], kmeans_centers(data.view(0).data, {0, 1, 1}, 2));

  const Matrix H = points({{0, 2}, {2, 0}, {5, 5}});
  EXPECT_EQ(mvcovh_hidden_centers(H, {0, 0, 1}, 2).col(0), Eigen::Vector2d(1, 1));
  EXPECT_EQ(mvcovh_hidden_centers(H, {0, 0, 0}, 1).col(0), Eigen::Vector2d(7.0 / 3.0, 7.0 / 3.0));
  const Matrix swapped = points({{2, 0}, {0, 2}, {5, 5}});
  EXPECT_EQ(mvcovh_hidden_centers(swapped, {0, 0, 1}, 2), mvcovh_hidden_centers(H, {0, 0, 1}, 2));
}

TEST(MvcovhWeights, ClosedForm) {
  // Two 1-D views, one cluster at 0: D = sum of squares.
  MultiViewDataset data("d", {{"a", points({{0}, {0}})}, {"b", points({{0}, {std::sqrt(std::log(2.0))}})}});
  ClusterState s;
  s.assignment = {0, 0};
  s.V = {points({{0}}), points({{0}})};
  s.V_hidden = points({{0}});
  s.w = Vector::Constant(2, 0.5);
  const auto w = mvcovh_weights(data, s, 0.0, 1.0);
  EXPECT_NEAR(w[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(w[1], 1.0 / 3.0, 1e-15);

  const auto flat = mvcovh_weights(data, s, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(flat[0], 0.5);
  EXPECT_DOUBLE_EQ(flat[1], 0.5);

  EXPECT_THROW(mvcovh_weights(data, s, 0.5, 0.0), Error);
  EXPECT_THROW(mvcovh_weights(data, s, 0.5, -1.0), Error);
}

TEST(MvcovhWeights, BeatsRandomSimplexPoints) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    auto data = oracle::random_dataset(rng, {3, 5, 2}, 15);
    const Matrix H = oracle::random_matrix(rng, 2, 15);
    auto s = random_state(data, H, 3, rng);
    s.w = mvcovh_weights(data, s, 0.3, 0.5);
    const double at_w = mvcovh_objective(data, H, s, 0.3, 0.5);
    for (int p = 0; p < 1000; ++p) {
      const auto point = oracle::random_simplex_point(rng, 3);
      ClusterState other = s;
      other.w = Eigen::Map<const Vector>(point.data(), 3);
      EXPECT_LE(at_w, mvcovh_objective(data, H, other, 0.3, 0.5) + 1e-9);
    }
  }
}

TEST(MvcovhObjective, InvariantUnderClusterRelabeling) {
  std::mt19937_64 rng(8);
  auto data = oracle::random_dataset(rng, {3, 2}, 12);
  const Matrix H = oracle::random_matrix(rng, 2, 12);
  const auto s = random_state(data, H, 4, rng);
  std::vector<int> perm{2, 0, 3, 1};
  ClusterState t = s;
  for (auto& a : t.assignment) a = perm[static_cast<std::size_t>(a)];
  for (int c = 0; c < 4; ++c) {
    t.V_hidden.col(perm[static_cast<std::size_t>(c)]) = s.V_hidden.col(c);
    for (std::size_t k = 0; k < s.V.size(); ++k) t.V[k].col(perm[static_cast<std::size_t>(c)]) = s.V[k].col(c);
  }
  EXPECT_NEAR(mvcovh_objective(data, H, t, 0.6, 0.9), mvcovh_objective(data, H, s, 0.6, 0.9), 1e-12);
}

TEST(MvcovhFit, BetaOneMatchesKMeansOnHidden) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    auto data = oracle::random_dataset(rng, {4, 3}, 30);
    const Matrix H = oracle::random_matrix(rng, 3, 30);
    auto p = params_for(3, 1.0);
    p.seed = 500 + static_cast<Seed>(trial);
    const auto fit = mvcovh_fit(data, H, p);
    const auto km = kmeans_fit(H, 3, {p.epsilon, p.max_iter}, p.seed, p.init);
    EXPECT_EQ(fit.assignment, km.assignment) << "trial " << trial;
  }
}

TEST(MvcovhFit, BetaZeroSingleViewMatchesKMeansOnView) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    auto data = oracle::random_dataset(rng, {4}, 30);
    const Matrix H = oracle::random_matrix(rng, 2, 30);
    auto p = params_for(3, 0.0);
    p.seed = 900 + static_cast<Seed>(trial);
    p.init = trial % 2 ? InitStrategy::uniform : InitStrategy::weighted;
    const auto fit = mvcovh_fit(data, H, p);
    const auto km = kmeans_fit(data.view(0).data, 3, {p.epsilon, p.max_iter}, p.seed, p.init);
    EXPECT_EQ(fit.assignment, km.assignment);
    EXPECT_EQ(fit.objective_trace, km.objective_trace);
  }
}

TEST(MvcovhFit, BetaZeroIgnoresHidden) {
  std::mt19937_64 rng(11);
  auto data = oracle::random_dataset(rng, {4, 3}, 25);
  auto p = params_for(3, 0.0);
  const auto a = mvcovh_fit(data, oracle::random_matrix(rng, 2, 25), p);
  const auto b = mvcovh_fit(data, oracle::random_matrix(rng, 2, 25, -5.0, 5.0), p);
  EXPECT_EQ(a.assignment, b.assignment);
}

TEST(MvcovhFit, ZeroIterationsReturnsInitialization) {
  std::mt19937_64 rng(12);
  auto data = oracle::random_dataset(rng, {3, 3}, 10);
  const Matrix H = oracle::random_matrix(rng, 2, 10);
  auto p = params_for(2, 0.5);
  p.max_iter = 0;
  const auto s = mvcovh_fit(data, H, p);
  ASSERT_EQ(s.objective_trace.size(), 1u);
  EXPECT_DOUBLE_EQ(s.objective_trace[0], mvcovh_objective(data, H, s, 0.5, 1.0));
  EXPECT_DOUBLE_EQ(s.w[0], 0.5);
}

TEST(MvcovhFit, ParameterErrors) {
  std::mt19937_64 rng(13);
  auto data = oracle::random_dataset(rng, {3}, 5);
  const Matrix H = oracle::random_matrix(rng, 2, 5);
  EXPECT_THROW(mvcovh_fit(data, H, params_for(1, 0.5)), Error);
  EXPECT_THROW(mvcovh_fit(data, H, params_for(6, 0.5)), Error);
  EXPECT_THROW(mvcovh_fit(data, H, params_for(2, 1.5)), Error);
  EXPECT_THROW(mvcovh_fit(data, H, params_for(2, 0.5, 0.0)), Error);
  EXPECT_THROW(mvcovh_fit(data, oracle::random_matrix(rng, 2, 4), params_for(2, 0.5)), Error);
}

TEST(MvcovhFit, DescentAndHardPartitionOnRandomInstances) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = std::uniform_int_distribution<int>(1, 3)(rng);
    std::vector<int> dims;
    for (int v = 0; v < k; ++v) dims.push_back(std::uniform_int_distribution<int>(1, 10)(rng));
    const int n = std::uniform_int_distribution<int>(4, 30)(rng);
    auto data = oracle::random_dataset(rng, dims, n);
    const Matrix H = oracle::random_matrix(rng, std::uniform_int_distribution<int>(1, 5)(rng), n);
    auto p = params_for(std::uniform_int_distribution<int>(2, std::min(4, n))(rng),
                        std::uniform_real_distribution<double>(0.0, 1.0)(rng),
                        std::ldexp(1.0, std::uniform_int_distribution<int>(-6, 6)(rng)));
    p.seed = static_cast<Seed>(trial);
    p.epsilon = 1e-12;
    bool ok = true;
    const auto s = mvcovh_fit(data, H, p, [&](int, const ClusterState& st) {
      std::vector<int> sizes(static_cast<std::size_t>(p.clusters), 0);
      for (int c : st.assignment) {
        ok &= c >= 0 && c < p.clusters;
        if (c >= 0 && c < p.clusters) ++sizes[static_cast<std::size_t>(c)];
      }
      ok &= static_cast<int>(st.assignment.size()) == n;
      ok &= std::all_of(sizes.begin(), sizes.end(), [](int z) { return z > 0; });
      ok &= std::abs(st.w.sum() - 1.0) <= 1e-9 && (st.w.array() >= 0.0).all();
    });
    EXPECT_TRUE(ok) << "trial " << trial;
    EXPECT_TRUE(oracle::non_increasing(s.objective_trace, 1e-9)) << "trial " << trial;
  }
}

TEST(FitPipeline, DeterministicAndRecoversPlantedClusters) {
  SynthSpec spec;
  spec.seed = 5;
  const auto data = synth_multiview(spec);
  HyperParams p = params_for(3, 0.5);
  p.hidden_dim = 3;
  p.seed = 42;
  const auto a = fit_pipeline(data, p);
  const auto b = fit_pipeline(data, p);
  EXPECT_EQ(a.clusters.assignment, b.clusters.assignment);
  EXPECT_EQ(a.hidden.H, b.hidden.H);
  EXPECT_EQ(a.clusters.objective_trace, b.clusters.objective_trace);
  EXPECT_GE(evaluate(*data.labels(), a.clusters.assignment).nmi, 0.95);
}

TEST(InitStrategy, RoundTripsNames) {
  EXPECT_EQ(parse_init_strategy(to_string(InitStrategy::uniform)), InitStrategy::uniform);
  EXPECT_EQ(parse_init_strategy(to_string(InitStrategy::weighted)), InitStrategy::weighted);
  EXPECT_THROW(parse_init_strategy("kmeans++"), Error);
}
