#include "mvcovh/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "mvcovh/error.hpp"

namespace mvcovh::csv {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::missing_file, "cannot open " + path.string());
  return in;
}

double parse_cell(std::string_view cell, const std::filesystem::path& path,
                  std::size_t line_no) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto* begin = cell.data();
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (cell.empty() || ec != std::errc() || ptr != end) {
    fail(ErrorKind::non_numeric_cell, path.string() + ":" + std::to_string(line_no) +
                                          ": non-numeric cell '" + std::string(cell) + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& path, bool has_header) {
  auto in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_cell(rest.substr(0, comma), path, line_no));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(ErrorKind::shape_mismatch, path.string() + ":" + std::to_string(line_no) +
                                          ": expected " + std::to_string(rows.front().size()) +
                                          " columns, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), ErrorKind::empty_view, path.string() + " contains no data rows");

  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

std::vector<std::string> read_tokens(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    auto field = trim(line);
    if (field.empty()) continue;
    field = trim(field.substr(0, field.find(',')));
    tokens.emplace_back(field);
  }
  return tokens;
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  write_text(path, out.str());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorKind::io_failure, "cannot write " + path.string());
  out << text;
  out.flush();
  require(out.good(), ErrorKind::io_failure, "write failed for " + path.string());
}

}  // namespace mvcovh::csv
