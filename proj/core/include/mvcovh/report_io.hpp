#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "mvcovh/clustering.hpp"
#include "mvcovh/harness.hpp"
#include "mvcovh/metrics.hpp"

namespace mvcovh {

nlohmann::json to_json(const HyperParams& params);
nlohmann::json to_json(const MetricReport& metrics);
nlohmann::json to_json(const RunReport& report);

/// {r, lambda, q, objective_trace, iterations, converged}
nlohmann::json model_json(const HiddenSpaceModel& model);

/// {params, iterations, objective_trace, w, assignment, per_view_dispersions}
/// plus "metrics" when labels are given.
nlohmann::json fit_report_json(const MultiViewDataset& normalized, const PipelineResult& fit,
                               const HyperParams& params, const std::vector<int>* labels);

/// Writes model.json, hidden_H.csv and W_<k>.csv into `dir`.
void save_model(const HiddenSpaceModel& model, const std::filesystem::path& dir);

/// Reads back what save_model wrote.
HiddenSpaceModel load_model(const std::filesystem::path& dir);

/// Pretty-printed JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace mvcovh
