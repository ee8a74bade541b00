#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "aggregation.hpp"
#include "dataset.hpp"
#include "scoring.hpp"

namespace aniso {

struct DetectorConfig {
  std::uint32_t n_estimators = 100;
  std::uint32_t subsample_size = 256;
  ScorerKind scorer = ScorerKind::depth;
  Alpha alpha{0.0};
  std::optional<double> tau;
  std::optional<double> contamination;
  std::uint64_t seed = 0;
  bool strict_paper_depth = false;
  BoundingPolicy bounding = BoundingPolicy::per_tree;
  std::optional<HyperRectangle> user_box;
};

/// Ascending-sort quantile with "higher" interpolation: the smallest sample
/// value whose position is >= level * (N - 1).
double quantile_higher(std::vector<double> values, double level);

class Detector {
public:
  /// Fits a forest on the data. With config.contamination set, scores the
  /// training data and stores the (1 - contamination) quantile as the
  /// decision threshold. Setting both tau and contamination is an error.
  static Detector fit(const Dataset& data, DetectorConfig config);

  /// Aggregated anomaly score per row, in (0, 1]; higher means more
  /// anomalous. Points are scored in parallel; results do not depend on
  /// the thread count.
  std::vector<double> score_samples(const Dataset& data) const;

  /// 1 where score >= threshold. Threshold is config.tau if set, else the
  /// fitted contamination quantile; neither set is an error.
  std::vector<std::uint8_t> predict(const Dataset& data) const;

  const ForestModel& forest() const noexcept { return forest_; }
  const DetectorConfig& config() const noexcept { return config_; }
  std::optional<double> fitted_tau() const noexcept { return fitted_tau_; }

  /// Reassembles a detector from persisted parts (model file loading).
  Detector(ForestModel forest, DetectorConfig config, std::optional<double> fitted_tau);

private:
  ScorerSpec scorer_spec() const;

  ForestModel forest_;
  DetectorConfig config_;
  std::optional<double> fitted_tau_;
};

}  // namespace aniso
