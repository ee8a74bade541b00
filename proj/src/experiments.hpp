#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "detector.hpp"

namespace aniso {

/// Labeled toy set: n_inliers points uniform in the unit cube plus one
/// outlier at (offset, 0.5, ..., 0.5), just past the cube face; label 1
/// marks the outlier (last row).
Dataset gen_cube_outlier(std::size_t d, std::size_t n_inliers, double offset,
                         std::mt19937_64& rng);

/// Labeled toy set: n_inliers points on the unit sphere (uniform direction,
/// radius jittered by sigma * N(0,1)) plus one outlier at the origin, the
/// center of the empty interior; label 1 marks the outlier (last row).
Dataset gen_sphere_origin(std::size_t d, std::size_t n_inliers, double noise_sigma,
                          std::mt19937_64& rng);

/// Area under the ROC curve via the rank-sum statistic, with average ranks
/// on tied scores (so the value is invariant under strictly increasing
/// transforms of the scores). Labels must contain both classes.
double auc_roc(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct ExperimentSpec {
  std::string experiment = "cube";  // "cube" or "sphere"
  std::size_t d = 10;
  std::size_t n_inliers = 127;
  double offset = 1.05;      // cube only
  double noise_sigma = 0.05; // sphere only
  std::uint64_t seed = 0;
};

Dataset gen_experiment(const ExperimentSpec& spec, std::uint64_t trial);

struct TrialConfigResult {
  DetectorConfig config;
  double mean_auc = 0.0;
  double std_auc = 0.0;
  std::vector<double> per_trial;
};

struct TrialReport {
  std::string experiment;
  std::size_t d = 0;
  std::size_t n_trials = 0;
  std::vector<TrialConfigResult> results;
};

/// Runs n_trials independent repetitions: each trial generates a fresh
/// dataset (seed derived from spec.seed and the trial index), fits every
/// config on it, and records the AUCROC of its scores against the labels.
/// Detector seeds are derived per (trial, config), so a report depends only
/// on its inputs.
TrialReport run_trials(const ExperimentSpec& spec, std::span<const DetectorConfig> configs,
                       std::size_t n_trials);

std::string trial_report_json(const TrialReport& report);

struct RankSummary {
  std::vector<double> avg_rank;   // per algorithm; rank 1 = best AUC
  std::vector<double> mean_auc;   // over the datasets the algorithm ran on
  std::vector<std::uint32_t> n_ranked;
};

/// Cross-dataset comparison of algorithms from an AUC matrix (rows =
/// algorithms, columns = datasets). NaN entries mean "not run" and are
/// excluded pairwise; ties share the average rank.
RankSummary rank_table(const Matrix& aucs);

}  // namespace aniso
