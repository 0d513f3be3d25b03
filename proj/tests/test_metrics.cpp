#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "mvcovh/error.hpp"
#include "mvcovh/metrics.hpp"
#include "oracles.hpp"

using namespace mvcovh;
using Labels = std::vector<int>;

namespace {

Labels random_labels(std::mt19937_64& rng, int n, int values) {
  std::uniform_int_distribution<int> d(0, values - 1);
  Labels l(static_cast<std::size_t>(n));
  for (auto& x : l) x = d(rng);
  // Keep the label space contiguous from 0.
  std::vector<int> remap(static_cast<std::size_t>(values), -1);
  int next = 0;
  for (auto& x : l) {
    auto& r = remap[static_cast<std::size_t>(x)];
    if (r < 0) r = next++;
    x = r;
  }
  return l;
}

Labels permute(const Labels& l, std::mt19937_64& rng) {
  const int k = *std::max_element(l.begin(), l.end()) + 1;
  std::vector<int> p(static_cast<std::size_t>(k));
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  Labels out;
  for (int x : l) out.push_back(p[static_cast<std::size_t>(x)]);
  return out;
}

double nmi_of(const Labels& a, const Labels& b) { return nmi(contingency(a, b)).value; }

}  // namespace

TEST(Contingency, Examples) {
  const auto t = contingency(Labels{0, 0, 1}, Labels{0, 0, 1});
  EXPECT_EQ(t.at(0, 0), 2);
  EXPECT_EQ(t.at(1, 1), 1);
  EXPECT_EQ(t.at(0, 1), 0);

  const auto u = contingency(Labels{0, 1}, Labels{0, 0});
  EXPECT_EQ(u.classes, 2);
  EXPECT_EQ(u.clusters, 1);
  EXPECT_EQ(u.at(0, 0), 1);
  EXPECT_EQ(u.at(1, 0), 1);

  EXPECT_THROW(contingency(Labels{0, 1}, Labels{0}), Error);
}

TEST(Contingency, MarginalsConserveTotal) {
  std::mt19937_64 rng(1);
  const auto t = contingency(random_labels(rng, 50, 4), random_labels(rng, 50, 3));
  EXPECT_EQ(t.total, 50);
  EXPECT_EQ(std::accumulate(t.class_sizes.begin(), t.class_sizes.end(), std::int64_t{0}), 50);
  EXPECT_EQ(std::accumulate(t.cluster_sizes.begin(), t.cluster_sizes.end(), std::int64_t{0}), 50);
  EXPECT_EQ(std::accumulate(t.counts.begin(), t.counts.end(), std::int64_t{0}), 50);
}

TEST(PairCounts, Examples) {
  auto p = pair_counts(Labels{0, 0, 1, 1}, Labels{0, 0, 1, 1});
  EXPECT_EQ(p.f11, 2);
  EXPECT_EQ(p.f00, 4);
  EXPECT_EQ(p.total_pairs, 6);

  p = pair_counts(Labels{0, 1}, Labels{0, 0});
  EXPECT_EQ(p.f11, 0);
  EXPECT_EQ(p.f00, 0);

  p = pair_counts(Labels{0, 1, 2}, Labels{0, 1, 2});
  EXPECT_EQ(p.f11, 0);
  EXPECT_EQ(p.f00, 3);

  EXPECT_THROW(pair_counts(Labels{0}, Labels{0}), Error);
}

TEST(PairCounts, ClosedFormMatchesEnumeration) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 64)(rng);
    const auto a = random_labels(rng, n, std::uniform_int_distribution<int>(1, 6)(rng));
    const auto b = random_labels(rng, n, std::uniform_int_distribution<int>(1, 6)(rng));
    const auto p = pair_counts(a, b);
    const auto e = oracle::enumerate_pairs(a, b);
    EXPECT_EQ(p.f00, e.f00);
    EXPECT_EQ(p.f11, e.f11);
    EXPECT_EQ(p.same_cluster, e.same_cluster);
    EXPECT_EQ(p.total_pairs, std::int64_t{n} * (n - 1) / 2);
    EXPECT_LE(p.f00 + p.f11, p.total_pairs);
  }
}

TEST(Nmi, Examples) {
  EXPECT_DOUBLE_EQ(nmi_of({0, 0, 1, 1}, {0, 0, 1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(nmi_of({0, 0, 1, 1}, {0, 1, 0, 1}), 0.0);
  EXPECT_NEAR(nmi_of({0, 0, 1, 1}, {0, 0, 0, 1}), 0.3455920299442113, 1e-15);
  EXPECT_NEAR(nmi_of({0, 0, 1, 1}, {0, 0, 0, 1}), oracle::nmi_terms({0, 0, 1, 1}, {0, 0, 0, 1}), 1e-15);
}

TEST(Nmi, DegenerateInputIsFlagged) {
  const auto r = nmi(contingency(Labels{0, 1, 0}, Labels{0, 0, 0}));
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_FALSE(nmi(contingency(Labels{0, 1}, Labels{1, 0})).degenerate);
}

TEST(Nmi, MatchesTermByTermOracleAndIsSymmetric) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(4, 60)(rng);
    const auto a = random_labels(rng, n, 4);
    const auto b = random_labels(rng, n, 3);
    const auto r = nmi(contingency(a, b));
    if (r.degenerate) continue;
    const double expect = std::clamp(oracle::nmi_terms(a, b), 0.0, 1.0);
    EXPECT_NEAR(r.value, expect, 1e-12 * std::max(1.0, expect));
    EXPECT_NEAR(nmi_of(b, a), r.value, 1e-12);
    EXPECT_GE(r.value, 0.0);
    EXPECT_LE(r.value, 1.0);
  }
}

TEST(RandIndex, Examples) {
  EXPECT_DOUBLE_EQ(rand_index(pair_counts(Labels{0, 1, 1, 2}, Labels{0, 1, 1, 2})), 1.0);
  EXPECT_DOUBLE_EQ(rand_index(pair_counts(Labels{0, 0, 1}, Labels{0, 1, 1})), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(rand_index(pair_counts(Labels{0, 1}, Labels{0, 0})), 0.0);
}

TEST(Precision, Examples) {
  EXPECT_DOUBLE_EQ(precision_pairs(pair_counts(Labels{0, 0, 1, 1}, Labels{0, 0, 1, 1})), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(precision_pairs(pair_counts(Labels{0, 1, 2}, Labels{0, 1, 2})), 0.0);
  try {
    precision_pairs(pair_counts(Labels{0, 1}, Labels{0, 0}));
    FAIL() << "expected an undefined-result error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::undefined_result);
  }
}

TEST(Precision, ConventionalVariant) {
  // Same-cluster pairs: (0,1) and (2,3); only (0,1) shares a class.
  const auto p = pair_counts(Labels{0, 0, 1, 2}, Labels{0, 0, 1, 1});
  EXPECT_DOUBLE_EQ(precision_conventional(p), 0.5);
}

TEST(Metrics, InvariantUnderLabelPermutations) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(4, 40)(rng);
    const auto a = random_labels(rng, n, 4);
    const auto b = random_labels(rng, n, 4);
    const auto pa = permute(a, rng);
    const auto pb = permute(b, rng);
    const auto base = pair_counts(a, b);
    const auto moved = pair_counts(pa, pb);
    EXPECT_EQ(base.f00, moved.f00);
    EXPECT_EQ(base.f11, moved.f11);
    EXPECT_NEAR(nmi_of(a, b), nmi_of(pa, pb), 1e-12);
    EXPECT_DOUBLE_EQ(rand_index(base), rand_index(moved));
  }
}

TEST(Metrics, RangeAndSelfAgreement) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(3, 40)(rng);
    const auto a = random_labels(rng, n, 3);
    const auto b = random_labels(rng, n, 5);
    const auto p = pair_counts(a, b);
    const double ri = rand_index(p);
    EXPECT_GE(ri, 0.0);
    EXPECT_LE(ri, 1.0);
    if (p.f00 + p.f11 > 0) {
      const double pr = precision_pairs(p);
      EXPECT_GE(pr, 0.0);
      EXPECT_LE(pr, 1.0);
    }
    if (*std::max_element(a.begin(), a.end()) > 0) EXPECT_DOUBLE_EQ(rand_index(pair_counts(a, a)), 1.0);
  }
}

TEST(Evaluate, BundlesAllMetrics) {
  const auto r = evaluate(Labels{0, 0, 1, 1}, Labels{1, 1, 0, 0});
  EXPECT_DOUBLE_EQ(r.nmi, 1.0);
  EXPECT_DOUBLE_EQ(r.rand_index, 1.0);
  EXPECT_DOUBLE_EQ(r.precision, 1.0 / 3.0);
  EXPECT_FALSE(r.nmi_degenerate);
}
