#include "detector.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace aniso {

double quantile_higher(std::vector<double> values, double level) {
  if (values.empty()) fail(ErrorCode::empty_input, "quantile of an empty sample");
  if (!(level >= 0.0 && level <= 1.0)) {
    fail(ErrorCode::invalid_argument, "quantile level must be in [0, 1]");
  }
  std::sort(values.begin(), values.end());
  const double pos = level * static_cast<double>(values.size() - 1);
  const auto idx = static_cast<std::size_t>(std::ceil(pos));
  return values[idx];
}

namespace {

void validate_config(const DetectorConfig& config) {
  if (config.tau && config.contamination) {
    fail(ErrorCode::invalid_argument, "set either tau or contamination, not both");
  }
  if (config.contamination) {
    const double c = *config.contamination;
    if (!(c > 0.0 && c <= 0.5)) {
      fail(ErrorCode::invalid_argument, "contamination must be in (0, 0.5]");
    }
  }
  if (config.scorer == ScorerKind::volume && config.bounding == BoundingPolicy::user &&
      !config.user_box) {
    fail(ErrorCode::invalid_argument, "user bounding policy needs a box");
  }
}

}  // namespace

Detector::Detector(ForestModel forest, DetectorConfig config, std::optional<double> fitted_tau)
    : forest_(std::move(forest)), config_(std::move(config)), fitted_tau_(fitted_tau) {
  validate_config(config_);
}

ScorerSpec Detector::scorer_spec() const {
  ScorerSpec spec;
  spec.kind = config_.scorer;
  spec.strict_paper_depth = config_.strict_paper_depth;
  spec.bounding = config_.bounding;
  spec.user_box = config_.user_box;
  return spec;
}

Detector Detector::fit(const Dataset& data, DetectorConfig config) {
  validate_config(config);
  FitConfig fit_config{config.n_estimators, config.subsample_size, config.seed};
  ForestModel forest = fit_forest(data, fit_config);

  Detector detector(std::move(forest), std::move(config), std::nullopt);
  if (detector.config_.contamination) {
    auto scores = detector.score_samples(data);
    detector.fitted_tau_ =
        quantile_higher(std::move(scores), 1.0 - *detector.config_.contamination);
  }
  return detector;
}

std::vector<double> Detector::score_samples(const Dataset& data) const {
  if (data.dim() != forest_.dim()) {
    fail(ErrorCode::dimension_mismatch, "data dimension does not match the fitted model");
  }
  const ScorerSpec spec = scorer_spec();
  const auto bounds = scoring_bounds(forest_, spec);
  const std::size_t n_trees = forest_.trees().size();

  std::vector<double> scores(data.size());
  parallel_for(data.size(), [&](std::size_t i) {
    std::vector<double> per_tree(n_trees);
    score_vector_into(forest_, data.point(i), spec, bounds, per_tree);
    scores[i] = aggregate(per_tree, config_.alpha);
  });
  return scores;
}

std::vector<std::uint8_t> Detector::predict(const Dataset& data) const {
  double tau = 0.0;
  if (config_.tau) {
    tau = *config_.tau;
  } else if (fitted_tau_) {
    tau = *fitted_tau_;
  } else {
    fail(ErrorCode::no_threshold,
         "predict needs a threshold: set tau or fit with contamination");
  }
  const auto scores = score_samples(data);
  std::vector<std::uint8_t> flags(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    flags[i] = classify(scores[i], tau) ? 1 : 0;
  }
  return flags;
}

}  // namespace aniso
