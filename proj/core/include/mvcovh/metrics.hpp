#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mvcovh {

/// Cross-tabulation of ground-truth classes (rows) against predicted clusters
/// (columns).
struct ContingencyTable {
  int classes = 0;
  int clusters = 0;
  std::vector<std::int64_t> counts;  ///< row-major, classes x clusters
  std::vector<std::int64_t> class_sizes;
  std::vector<std::int64_t> cluster_sizes;
  std::int64_t total = 0;

  std::int64_t at(int cls, int cluster) const {
    return counts[static_cast<std::size_t>(cls) * static_cast<std::size_t>(clusters) +
                  static_cast<std::size_t>(cluster)];
  }
};

/// Pair statistics over all N(N-1)/2 unordered sample pairs.
struct PairCounts {
  std::int64_t f00 = 0;  ///< different class and different cluster
  std::int64_t f11 = 0;  ///< same class and same cluster
  std::int64_t same_class = 0;
  std::int64_t same_cluster = 0;
  std::int64_t total_pairs = 0;
};

struct NmiResult {
  double value = 0.0;
  bool degenerate = false;  ///< a marginal entropy vanished; value reported as 0
};

struct MetricReport {
  double nmi = 0.0;
  double rand_index = 0.0;
  double precision = 0.0;
  bool nmi_degenerate = false;
};

ContingencyTable contingency(std::span<const int> labels, std::span<const int> assignment);

/// Closed form from the contingency table, no pair enumeration.
PairCounts pair_counts(std::span<const int> labels, std::span<const int> assignment);
PairCounts pair_counts(const ContingencyTable& table);

/// Natural-log NMI normalized by the geometric mean of the two entropies.
NmiResult nmi(const ContingencyTable& table);

/// (f00 + f11) / total_pairs
double rand_index(const PairCounts& pairs);

/// f11 / (f00 + f11). This is the pairwise index reported in the benchmark
/// tables; note it is not the textbook pairwise precision.
double precision_pairs(const PairCounts& pairs);

/// Textbook pairwise precision f11 / same_cluster. Not used in reports.
double precision_conventional(const PairCounts& pairs);

MetricReport evaluate(std::span<const int> labels, std::span<const int> assignment);

}  // namespace mvcovh
