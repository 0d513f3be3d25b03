#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mvcovh {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// One visible view: features in rows, samples in columns (m_k x N).
struct ViewMatrix {
  std::string name;
  Matrix data;
};

/// K sample-aligned views plus optional ground-truth labels in [0, C_true).
class MultiViewDataset {
 public:
  /// Validates shapes: K >= 1, N >= 1, every view has N columns, and labels
  /// (when given) have length N with every class in [0, max] populated.
  MultiViewDataset(std::string name, std::vector<ViewMatrix> views,
                   std::optional<std::vector<int>> labels = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  const std::vector<ViewMatrix>& views() const noexcept { return views_; }
  const ViewMatrix& view(int k) const { return views_.at(static_cast<std::size_t>(k)); }
  const std::optional<std::vector<int>>& labels() const noexcept { return labels_; }

  int num_views() const noexcept { return static_cast<int>(views_.size()); }
  int num_samples() const noexcept { return static_cast<int>(views_.front().data.cols()); }
  int num_classes() const noexcept;
  /// Smallest feature count across views (the `d` of the hidden-dimension grid).
  int min_features() const noexcept;

 private:
  std::string name_;
  std::vector<ViewMatrix> views_;
  std::optional<std::vector<int>> labels_;
};

struct ManifestView {
  std::string name;
  std::filesystem::path csv_path;
  bool has_header = false;
};

struct DatasetManifest {
  std::string name;
  std::vector<ManifestView> views;
  std::optional<std::filesystem::path> labels_path;
};

/// Parses the manifest JSON; relative paths are resolved against the
/// manifest's directory.
DatasetManifest read_manifest(const std::filesystem::path& path);

/// Loads every view CSV (rows are samples) and transposes to features x
/// samples. Labels are remapped to 0..C_true-1 in first-occurrence order.
MultiViewDataset load_manifest(const std::filesystem::path& path);

/// Writes `dataset` as a manifest plus one CSV per view (and labels.csv when
/// labels exist) under `dir`. Returns the manifest path.
std::filesystem::path save_dataset(const MultiViewDataset& dataset,
                                   const std::filesystem::path& dir);

std::vector<int> remap_labels(const std::vector<std::string>& tokens);

/// Per-feature min-max scaling to [0, 1]; constant rows become 0.
ViewMatrix normalize_view(const Matrix& raw, std::string name = {});

MultiViewDataset normalize_dataset(const MultiViewDataset& dataset);

}  // namespace mvcovh
