#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mvcovh::csv {

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

// Reads a comma-separated numeric table. Rows are returned as-is (row i of the
// result is line i of the file, after the optional header).
Eigen::MatrixXd read_matrix(const std::filesystem::path& path, bool has_header);

// One token per line (first field of each line), whitespace trimmed; blank
// lines are skipped.
std::vector<std::string> read_tokens(const std::filesystem::path& path);

// Writes `m` row by row at full precision.
void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mvcovh::csv
