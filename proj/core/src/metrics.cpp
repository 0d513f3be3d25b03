#include "mvcovh/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "mvcovh/error.hpp"

namespace mvcovh {
namespace {

std::int64_t choose2(std::int64_t n) { return n * (n - 1) / 2; }

int label_space(std::span<const int> values, const char* what) {
  int hi = -1;
  for (int v : values) {
    require(v >= 0, ErrorKind::invalid_value, std::string(what) + " must be non-negative");
    hi = std::max(hi, v);
  }
  return hi + 1;
}

}  // namespace

ContingencyTable contingency(std::span<const int> labels, std::span<const int> assignment) {
  require(labels.size() == assignment.size(), ErrorKind::shape_mismatch,
          "labels have " + std::to_string(labels.size()) + " entries, assignment has " +
              std::to_string(assignment.size()));
  ContingencyTable t;
  t.classes = label_space(labels, "labels");
  t.clusters = label_space(assignment, "cluster indices");
  t.counts.assign(static_cast<std::size_t>(t.classes) * static_cast<std::size_t>(t.clusters), 0);
  t.class_sizes.assign(static_cast<std::size_t>(t.classes), 0);
  t.cluster_sizes.assign(static_cast<std::size_t>(t.clusters), 0);
  for (std::size_t j = 0; j < labels.size(); ++j) {
    const auto i = static_cast<std::size_t>(labels[j]);
    const auto c = static_cast<std::size_t>(assignment[j]);
    ++t.counts[i * static_cast<std::size_t>(t.clusters) + c];
    ++t.class_sizes[i];
    ++t.cluster_sizes[c];
  }
  t.total = static_cast<std::int64_t>(labels.size());
  return t;
}

PairCounts pair_counts(const ContingencyTable& table) {
  require(table.total >= 2, ErrorKind::invalid_parameter, "pair counts need at least 2 samples");
  PairCounts p;
  p.total_pairs = choose2(table.total);
  for (auto n : table.counts) p.f11 += choose2(n);
  for (auto n : table.class_sizes) p.same_class += choose2(n);
  for (auto n : table.cluster_sizes) p.same_cluster += choose2(n);
  p.f00 = p.total_pairs - p.same_class - p.same_cluster + p.f11;
  return p;
}

PairCounts pair_counts(std::span<const int> labels, std::span<const int> assignment) {
  return pair_counts(contingency(labels, assignment));
}

NmiResult nmi(const ContingencyTable& table) {
  require(table.total > 0, ErrorKind::invalid_parameter, "NMI needs at least one sample");
  const double n = static_cast<double>(table.total);

  double mutual = 0.0;
  for (int i = 0; i < table.classes; ++i) {
    for (int j = 0; j < table.clusters; ++j) {
      const auto nij = table.at(i, j);
      if (nij == 0) continue;
      const double ni = static_cast<double>(table.class_sizes[static_cast<std::size_t>(i)]);
      const double nj = static_cast<double>(table.cluster_sizes[static_cast<std::size_t>(j)]);
      mutual += static_cast<double>(nij) * std::log(n * static_cast<double>(nij) / (ni * nj));
    }
  }
  auto marginal = [n](const std::vector<std::int64_t>& sizes) {
    double s = 0.0;
    for (auto c : sizes)
      if (c > 0) s += static_cast<double>(c) * std::log(static_cast<double>(c) / n);
    return s;
  };
  const double denom = marginal(table.class_sizes) * marginal(table.cluster_sizes);
  if (!(denom > 0.0)) return {0.0, true};
  return {std::clamp(mutual / std::sqrt(denom), 0.0, 1.0), false};
}

double rand_index(const PairCounts& pairs) {
  require(pairs.total_pairs > 0, ErrorKind::invalid_parameter, "Rand index needs at least 2 samples");
  return static_cast<double>(pairs.f00 + pairs.f11) / static_cast<double>(pairs.total_pairs);
}

double precision_pairs(const PairCounts& pairs) {
  const auto denom = pairs.f00 + pairs.f11;
  require(denom > 0, ErrorKind::undefined_result, "precision undefined: f00 + f11 = 0");
  return static_cast<double>(pairs.f11) / static_cast<double>(denom);
}

double precision_conventional(const PairCounts& pairs) {
  require(pairs.same_cluster > 0, ErrorKind::undefined_result,
          "conventional precision undefined: no same-cluster pairs");
  return static_cast<double>(pairs.f11) / static_cast<double>(pairs.same_cluster);
}

MetricReport evaluate(std::span<const int> labels, std::span<const int> assignment) {
  const auto table = contingency(labels, assignment);
  const auto pairs = pair_counts(table);
  const auto info = nmi(table);
  return {info.value, rand_index(pairs), precision_pairs(pairs), info.degenerate};
}

}  // namespace mvcovh
