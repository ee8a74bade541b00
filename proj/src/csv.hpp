#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "dataset.hpp"

namespace aniso {

struct CsvOptions {
  char delimiter = ',';
  bool has_header = false;
  /// Zero-based column holding the 0/1 label; the remaining columns are
  /// features. Unset means all columns are features.
  std::optional<std::size_t> label_column;
};

/// Loads a numeric CSV into a dataset. Every row must have the same number
/// of cells as the first; cells must parse as finite doubles (the label
/// column as exactly 0 or 1). Errors carry 1-based file line numbers.
Dataset load_dataset_csv(const std::string& path, const CsvOptions& options = {});

/// Writes "index,score" rows, scores rendered shortest-round-trip.
void write_scores_csv(const std::string& path, std::span<const double> scores);

/// Writes the dataset back out (header optional); with labels present they
/// go to the last column, matching load with label_column = dim.
void write_dataset_csv(const std::string& path, const Dataset& data, bool header = false);

}  // namespace aniso
