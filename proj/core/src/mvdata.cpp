#include "mvcovh/mvdata.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "mvcovh/csv.hpp"
#include "mvcovh/error.hpp"

namespace mvcovh {

MultiViewDataset::MultiViewDataset(std::string name, std::vector<ViewMatrix> views,
                                   std::optional<std::vector<int>> labels)
    : name_(std::move(name)), views_(std::move(views)), labels_(std::move(labels)) {
  require(!views_.empty(), ErrorKind::empty_view, "dataset needs at least one view");
  const auto n = views_.front().data.cols();
  for (const auto& v : views_) {
    require(v.data.rows() > 0 && v.data.cols() > 0, ErrorKind::empty_view,
            "view '" + v.name + "' is empty");
    require(v.data.cols() == n, ErrorKind::row_count_mismatch,
            "view '" + v.name + "' has " + std::to_string(v.data.cols()) +
                " samples, expected " + std::to_string(n));
  }
  if (labels_) {
    require(static_cast<Eigen::Index>(labels_->size()) == n, ErrorKind::row_count_mismatch,
            "labels have " + std::to_string(labels_->size()) + " entries, expected " +
                std::to_string(n));
    const int classes = *std::max_element(labels_->begin(), labels_->end()) + 1;
    std::vector<int> counts(static_cast<std::size_t>(std::max(classes, 0)), 0);
    for (int l : *labels_) {
      require(l >= 0, ErrorKind::invalid_value, "labels must be non-negative");
      ++counts[static_cast<std::size_t>(l)];
    }
    for (int c = 0; c < classes; ++c)
      require(counts[static_cast<std::size_t>(c)] > 0, ErrorKind::invalid_value,
              "label " + std::to_string(c) + " has no members");
  }
}

int MultiViewDataset::num_classes() const noexcept {
  if (!labels_) return 0;
  return *std::max_element(labels_->begin(), labels_->end()) + 1;
}

int MultiViewDataset::min_features() const noexcept {
  Eigen::Index d = views_.front().data.rows();
  for (const auto& v : views_) d = std::min(d, v.data.rows());
  return static_cast<int>(d);
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::missing_file, "cannot open manifest " + path.string());

  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::malformed_manifest, path.string() + ": " + e.what());
  }

  const auto base = path.parent_path();
  DatasetManifest m;
  try {
    m.name = j.value("name", path.stem().string());
    require(j.contains("views") && j["views"].is_array() && !j["views"].empty(),
            ErrorKind::malformed_manifest, path.string() + ": 'views' must be a non-empty array");
    for (const auto& v : j["views"]) {
      ManifestView mv;
      mv.csv_path = base / v.at("path").get<std::string>();
      mv.name = v.value("name", mv.csv_path.stem().string());
      mv.has_header = v.value("has_header", false);
      m.views.push_back(std::move(mv));
    }
    if (j.contains("labels") && !j["labels"].is_null())
      m.labels_path = base / j["labels"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::malformed_manifest, path.string() + ": " + e.what());
  }
  return m;
}

std::vector<int> remap_labels(const std::vector<std::string>& tokens) {
  std::unordered_map<std::string, int> ids;
  std::vector<int> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    const auto [it, inserted] = ids.try_emplace(t, static_cast<int>(ids.size()));
    out.push_back(it->second);
  }
  return out;
}

MultiViewDataset load_manifest(const std::filesystem::path& path) {
  const auto manifest = read_manifest(path);

  std::vector<ViewMatrix> views;
  for (const auto& mv : manifest.views) {
    Matrix samples_by_features = csv::read_matrix(mv.csv_path, mv.has_header);
    if (!views.empty() && samples_by_features.rows() != views.front().data.cols()) {
      fail(ErrorKind::row_count_mismatch,
           "view '" + mv.name + "' has " + std::to_string(samples_by_features.rows()) +
               " rows but view '" + views.front().name + "' has " +
               std::to_string(views.front().data.cols()));
    }
    views.push_back({mv.name, samples_by_features.transpose()});
  }

  std::optional<std::vector<int>> labels;
  if (manifest.labels_path) {
    const auto tokens = csv::read_tokens(*manifest.labels_path);
    require(!tokens.empty(), ErrorKind::empty_view,
            manifest.labels_path->string() + " contains no labels");
    labels = remap_labels(tokens);
  }
  return MultiViewDataset(manifest.name, std::move(views), std::move(labels));
}

std::filesystem::path save_dataset(const MultiViewDataset& dataset,
                                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json j;
  j["name"] = dataset.name();
  j["views"] = nlohmann::json::array();
  for (int k = 0; k < dataset.num_views(); ++k) {
    const auto& v = dataset.view(k);
    const std::string file = "view" + std::to_string(k) + ".csv";
    csv::write_matrix(dir / file, v.data.transpose());
    j["views"].push_back({{"name", v.name}, {"path", file}, {"has_header", false}});
  }
  if (dataset.labels()) {
    std::string text;
    for (int l : *dataset.labels()) text += std::to_string(l) + "\n";
    csv::write_text(dir / "labels.csv", text);
    j["labels"] = "labels.csv";
  } else {
    j["labels"] = nullptr;
  }
  const auto path = dir / "manifest.json";
  csv::write_text(path, j.dump(2) + "\n");
  return path;
}

ViewMatrix normalize_view(const Matrix& raw, std::string name) {
  require(raw.allFinite(), ErrorKind::invalid_value,
          "view '" + name + "' contains NaN or infinite entries");
  Matrix out(raw.rows(), raw.cols());
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    const double lo = raw.row(i).minCoeff();
    const double hi = raw.row(i).maxCoeff();
    const double range = hi - lo;
    if (range > 0.0) {
      out.row(i) = ((raw.row(i).array() - lo) / range).cwiseMin(1.0).cwiseMax(0.0);
    } else {
      out.row(i).setZero();
    }
  }
  return {std::move(name), std::move(out)};
}

MultiViewDataset normalize_dataset(const MultiViewDataset& dataset) {
  std::vector<ViewMatrix> views;
  views.reserve(dataset.views().size());
  for (const auto& v : dataset.views()) views.push_back(normalize_view(v.data, v.name));
  return MultiViewDataset(dataset.name(), std::move(views), dataset.labels());
}

}  // namespace mvcovh
