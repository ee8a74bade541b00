#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "rng.hpp"

namespace aniso {

Dataset gen_cube_outlier(std::size_t d, std::size_t n_inliers, double offset,
                         std::mt19937_64& rng) {
  if (d == 0) fail(ErrorCode::invalid_argument, "cube experiment needs d >= 1");
  if (n_inliers == 0) fail(ErrorCode::invalid_argument, "cube experiment needs inliers");
  Matrix pts(n_inliers + 1, d);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < n_inliers; ++i) {
    for (std::size_t j = 0; j < d; ++j) pts.at(i, j) = unit(rng);
  }
  pts.at(n_inliers, 0) = offset;
  for (std::size_t j = 1; j < d; ++j) pts.at(n_inliers, j) = 0.5;

  std::vector<std::uint8_t> labels(n_inliers + 1, 0);
  labels.back() = 1;
  return Dataset(std::move(pts), std::move(labels));
}

Dataset gen_sphere_origin(std::size_t d, std::size_t n_inliers, double noise_sigma,
                          std::mt19937_64& rng) {
  if (d == 0) fail(ErrorCode::invalid_argument, "sphere experiment needs d >= 1");
  if (n_inliers == 0) fail(ErrorCode::invalid_argument, "sphere experiment needs inliers");
  Matrix pts(n_inliers + 1, d);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < n_inliers; ++i) {
    double norm = 0.0;
    std::vector<double> g(d);
    do {
      norm = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        g[j] = gauss(rng);
        norm += g[j] * g[j];
      }
      norm = std::sqrt(norm);
    } while (norm == 0.0);
    const double radius = 1.0 + noise_sigma * gauss(rng);
    for (std::size_t j = 0; j < d; ++j) pts.at(i, j) = radius * g[j] / norm;
  }
  for (std::size_t j = 0; j < d; ++j) pts.at(n_inliers, j) = 0.0;

  std::vector<std::uint8_t> labels(n_inliers + 1, 0);
  labels.back() = 1;
  return Dataset(std::move(pts), std::move(labels));
}

double auc_roc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    fail(ErrorCode::dimension_mismatch, "auc_roc: scores and labels differ in length");
  }
  if (scores.empty()) fail(ErrorCode::empty_input, "auc_roc: empty input");

  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 1) fail(ErrorCode::label_not_binary, "auc_roc: labels must be 0/1");
    if (!std::isfinite(scores[i])) {
      fail(ErrorCode::non_finite_value, "auc_roc: scores must be finite");
    }
    n_pos += labels[i];
  }
  const std::size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    fail(ErrorCode::degenerate_labels, "auc_roc: need both classes present");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Rank sum of the positive class, ties resolved by average rank.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) rank_sum_pos += avg_rank;
    }
    i = j;
  }

  const double n_pos_d = static_cast<double>(n_pos);
  const double n_neg_d = static_cast<double>(n_neg);
  const double u = rank_sum_pos - n_pos_d * (n_pos_d + 1.0) / 2.0;
  return u / (n_pos_d * n_neg_d);
}

Dataset gen_experiment(const ExperimentSpec& spec, std::uint64_t trial) {
  auto rng = make_stream(spec.seed, trial);
  if (spec.experiment == "cube") {
    return gen_cube_outlier(spec.d, spec.n_inliers, spec.offset, rng);
  }
  if (spec.experiment == "sphere") {
    return gen_sphere_origin(spec.d, spec.n_inliers, spec.noise_sigma, rng);
  }
  fail(ErrorCode::invalid_argument, "unknown experiment '" + spec.experiment + "'");
}

TrialReport run_trials(const ExperimentSpec& spec, std::span<const DetectorConfig> configs,
                       std::size_t n_trials) {
  if (configs.empty()) fail(ErrorCode::empty_input, "run_trials: no detector configs");
  if (n_trials == 0) fail(ErrorCode::invalid_argument, "run_trials: need at least one trial");

  TrialReport report;
  report.experiment = spec.experiment;
  report.d = spec.d;
  report.n_trials = n_trials;
  report.results.resize(configs.size());
  for (std::size_t c = 0; c < configs.size(); ++c) {
    report.results[c].config = configs[c];
    report.results[c].per_trial.resize(n_trials);
  }

  for (std::size_t trial = 0; trial < n_trials; ++trial) {
    const Dataset data = gen_experiment(spec, trial);
    for (std::size_t c = 0; c < configs.size(); ++c) {
      DetectorConfig config = configs[c];
      config.seed = mix_seed(mix_seed(spec.seed, trial), c + 1);
      const Detector detector = Detector::fit(data, std::move(config));
      const auto scores = detector.score_samples(data);
      report.results[c].per_trial[trial] = auc_roc(scores, data.labels());
    }
  }

  for (auto& result : report.results) {
    const auto& xs = result.per_trial;
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double v : xs) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : xs) var += (v - mean) * (v - mean);
    result.mean_auc = mean;
    result.std_auc = xs.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  }
  return report;
}

namespace {

nlohmann::ordered_json alpha_json(const Alpha& alpha) {
  if (alpha.is_infinite()) return "inf";
  return alpha.value();
}

}  // namespace

std::string trial_report_json(const TrialReport& report) {
  nlohmann::ordered_json doc;
  doc["experiment"] = report.experiment;
  doc["d"] = report.d;
  doc["trials"] = report.n_trials;
  doc["configs"] = nlohmann::ordered_json::array();
  for (const auto& result : report.results) {
    nlohmann::ordered_json entry;
    entry["alpha"] = alpha_json(result.config.alpha);
    entry["scorer"] = result.config.scorer == ScorerKind::depth ? "depth" : "volume";
    entry["mean_auc"] = result.mean_auc;
    entry["std_auc"] = result.std_auc;
    entry["per_trial"] = result.per_trial;
    doc["configs"].push_back(std::move(entry));
  }
  return doc.dump(2);
}

RankSummary rank_table(const Matrix& aucs) {
  const std::size_t n_algos = aucs.rows();
  const std::size_t n_datasets = aucs.cols();
  if (n_algos == 0 || n_datasets == 0) {
    fail(ErrorCode::empty_input, "rank_table: empty AUC matrix");
  }

  RankSummary summary;
  summary.avg_rank.assign(n_algos, 0.0);
  summary.mean_auc.assign(n_algos, 0.0);
  summary.n_ranked.assign(n_algos, 0);

  for (std::size_t ds = 0; ds < n_datasets; ++ds) {
    std::vector<std::size_t> present;
    for (std::size_t a = 0; a < n_algos; ++a) {
      if (!std::isnan(aucs.at(a, ds))) present.push_back(a);
    }
    std::sort(present.begin(), present.end(), [&](std::size_t x, std::size_t y) {
      return aucs.at(x, ds) > aucs.at(y, ds);
    });
    std::size_t i = 0;
    while (i < present.size()) {
      std::size_t j = i;
      while (j < present.size() && aucs.at(present[j], ds) == aucs.at(present[i], ds)) ++j;
      const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
      for (std::size_t k = i; k < j; ++k) {
        summary.avg_rank[present[k]] += avg_rank;
        summary.mean_auc[present[k]] += aucs.at(present[k], ds);
        summary.n_ranked[present[k]] += 1;
      }
      i = j;
    }
  }

  for (std::size_t a = 0; a < n_algos; ++a) {
    if (summary.n_ranked[a] == 0) {
      summary.avg_rank[a] = std::numeric_limits<double>::quiet_NaN();
      summary.mean_auc[a] = std::numeric_limits<double>::quiet_NaN();
    } else {
      summary.avg_rank[a] /= static_cast<double>(summary.n_ranked[a]);
      summary.mean_auc[a] /= static_cast<double>(summary.n_ranked[a]);
    }
  }
  return summary;
}

}  // namespace aniso
