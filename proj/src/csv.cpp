#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace aniso {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_line(std::string_view line, char delimiter) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == delimiter) {
      cells.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return cells;
}

double parse_cell(std::string_view cell, std::size_t line_no, std::size_t col) {
  double value = 0.0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || cell.empty()) {
    fail(ErrorCode::parse_error, "line " + std::to_string(line_no) + ", column " +
                                     std::to_string(col + 1) + ": cannot parse '" +
                                     std::string(cell) + "' as a number");
  }
  if (!std::isfinite(value)) {
    fail(ErrorCode::non_finite_value, "line " + std::to_string(line_no) + ", column " +
                                          std::to_string(col + 1) + ": non-finite value");
  }
  return value;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

Dataset load_dataset_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open '" + path + "' for reading");

  std::vector<double> values;
  std::vector<std::uint8_t> labels;
  std::size_t n_cols = 0;
  std::size_t n_rows = 0;

  std::string line;
  std::size_t line_no = 0;
  bool skipped_header = !options.has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    const auto cells = split_line(line, options.delimiter);
    if (n_rows == 0) {
      n_cols = cells.size();
      if (options.label_column && *options.label_column >= n_cols) {
        fail(ErrorCode::invalid_argument,
             "label column " + std::to_string(*options.label_column) + " out of range for " +
                 std::to_string(n_cols) + " columns");
      }
      if (options.label_column && n_cols < 2) {
        fail(ErrorCode::invalid_argument, "need at least one feature column besides the label");
      }
    } else if (cells.size() != n_cols) {
      fail(ErrorCode::ragged_rows, "line " + std::to_string(line_no) + ": expected " +
                                       std::to_string(n_cols) + " cells, found " +
                                       std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double v = parse_cell(cells[c], line_no, c);
      if (options.label_column && c == *options.label_column) {
        if (v != 0.0 && v != 1.0) {
          fail(ErrorCode::label_not_binary,
               "line " + std::to_string(line_no) + ": label must be 0 or 1");
        }
        labels.push_back(v == 1.0 ? 1 : 0);
      } else {
        values.push_back(v);
      }
    }
    ++n_rows;
  }

  if (n_rows == 0) fail(ErrorCode::empty_input, "'" + path + "' contains no data rows");

  const std::size_t n_features = options.label_column ? n_cols - 1 : n_cols;
  Matrix features(n_rows, n_features, std::move(values));
  if (options.label_column) {
    return Dataset(std::move(features), std::move(labels));
  }
  return Dataset(std::move(features));
}

void write_scores_csv(const std::string& path, std::span<const double> scores) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  out << "index,score\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out << i << ',' << format_double(scores[i]) << '\n';
  }
  if (!out.good()) fail(ErrorCode::io_error, "failed writing '" + path + "'");
}

void write_dataset_csv(const std::string& path, const Dataset& data, bool header) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  if (header) {
    for (std::size_t j = 0; j < data.dim(); ++j) {
      if (j > 0) out << ',';
      out << 'f' << j;
    }
    if (data.has_labels()) out << ",label";
    out << '\n';
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto row = data.point(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out << ',';
      out << format_double(row[j]);
    }
    if (data.has_labels()) out << ',' << static_cast<int>(data.labels()[i]);
    out << '\n';
  }
  if (!out.good()) fail(ErrorCode::io_error, "failed writing '" + path + "'");
}

}  // namespace aniso
