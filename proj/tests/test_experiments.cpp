#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include <json.hpp>

#include "experiments.hpp"

using namespace aniso;

TEST_CASE("cube generator shape, labels, and outlier placement") {
  std::mt19937_64 rng(1);
  const Dataset data = gen_cube_outlier(10, 127, 1.05, rng);
  CHECK(data.size() == 128);
  CHECK(data.dim() == 10);
  REQUIRE(data.has_labels());

  for (std::size_t i = 0; i < 127; ++i) {
    CHECK(data.labels()[i] == 0);
    for (double v : data.point(i)) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  CHECK(data.labels()[127] == 1);
  const auto outlier = data.point(127);
  CHECK(outlier[0] == 1.05);
  for (std::size_t j = 1; j < 10; ++j) CHECK(outlier[j] == 0.5);
}

TEST_CASE("sphere generator shape, labels, and radii") {
  std::mt19937_64 rng(2);
  const Dataset data = gen_sphere_origin(4, 127, 0.05, rng);
  CHECK(data.size() == 128);
  CHECK(data.dim() == 4);
  REQUIRE(data.has_labels());

  for (std::size_t i = 0; i < 127; ++i) {
    double norm = 0.0;
    for (double v : data.point(i)) norm += v * v;
    norm = std::sqrt(norm);
    CHECK(norm > 0.5);  // radius 1 with sigma 0.05: far from the origin
    CHECK(norm < 1.5);
  }
  const auto center = data.point(127);
  for (double v : center) CHECK(v == 0.0);
  CHECK(data.labels()[127] == 1);
}

TEST_CASE("generators are deterministic in (seed, trial)") {
  ExperimentSpec spec;
  spec.experiment = "sphere";
  spec.d = 3;
  spec.seed = 9;
  const Dataset a = gen_experiment(spec, 4);
  const Dataset b = gen_experiment(spec, 4);
  const Dataset c = gen_experiment(spec, 5);

  REQUIRE(a.size() == b.size());
  bool same_ab = true;
  bool same_ac = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) {
      same_ab = same_ab && a.point(i)[j] == b.point(i)[j];
      same_ac = same_ac && a.point(i)[j] == c.point(i)[j];
    }
  }
  CHECK(same_ab);
  CHECK_FALSE(same_ac);

  ExperimentSpec bad = spec;
  bad.experiment = "torus";
  CHECK_THROWS_AS(gen_experiment(bad, 0), Error);
}

TEST_CASE("auc_roc frozen examples") {
  // Perfect ranking.
  CHECK(auc_roc(std::vector<double>{0.1, 0.2, 0.9},
                std::vector<std::uint8_t>{0, 0, 1}) == 1.0);
  // Perfectly inverted.
  CHECK(auc_roc(std::vector<double>{0.9, 0.2, 0.1},
                std::vector<std::uint8_t>{0, 1, 1}) == 0.0);
  // Interleaved: ranks asc 0.6(1) 0.7(2) 0.8(3) 0.9(4), positives at 2+4.
  CHECK(auc_roc(std::vector<double>{0.9, 0.8, 0.7, 0.6},
                std::vector<std::uint8_t>{1, 0, 1, 0}) == 0.75);
  // All tied: no information, AUC 1/2.
  CHECK(auc_roc(std::vector<double>{0.5, 0.5, 0.5, 0.5},
                std::vector<std::uint8_t>{1, 0, 1, 0}) == 0.5);
}

TEST_CASE("auc_roc is invariant under monotone transforms") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.3);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> scores(50);
    std::vector<std::uint8_t> labels(50);
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      scores[i] = unit(rng);
      labels[i] = coin(rng) ? 1 : 0;
      (labels[i] ? pos : neg) = true;
    }
    if (!pos || !neg) continue;
    std::vector<double> warped(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
      warped[i] = std::exp(3.0 * scores[i]) + 7.0;
    }
    CHECK(auc_roc(scores, labels) == doctest::Approx(auc_roc(warped, labels)).epsilon(1e-12));
  }
}

TEST_CASE("auc_roc input validation") {
  CHECK_THROWS_AS(auc_roc(std::vector<double>{1.0, 2.0}, std::vector<std::uint8_t>{1}), Error);
  CHECK_THROWS_AS(auc_roc(std::vector<double>{}, std::vector<std::uint8_t>{}), Error);
  CHECK_THROWS_AS(
      auc_roc(std::vector<double>{1.0, 2.0}, std::vector<std::uint8_t>{1, 1}), Error);
  CHECK_THROWS_AS(
      auc_roc(std::vector<double>{1.0, 2.0}, std::vector<std::uint8_t>{0, 0}), Error);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(
      auc_roc(std::vector<double>{1.0, nan}, std::vector<std::uint8_t>{0, 1}), Error);
}

TEST_CASE("run_trials is reproducible and fills the report") {
  ExperimentSpec spec;
  spec.experiment = "sphere";
  spec.d = 3;
  spec.seed = 42;

  DetectorConfig depth_config;
  depth_config.n_estimators = 20;
  DetectorConfig volume_config = depth_config;
  volume_config.scorer = ScorerKind::volume;
  const std::vector<DetectorConfig> configs{depth_config, volume_config};

  const TrialReport a = run_trials(spec, configs, 3);
  const TrialReport b = run_trials(spec, configs, 3);

  CHECK(a.experiment == "sphere");
  CHECK(a.d == 3);
  CHECK(a.n_trials == 3);
  REQUIRE(a.results.size() == 2);
  for (std::size_t c = 0; c < 2; ++c) {
    REQUIRE(a.results[c].per_trial.size() == 3);
    for (std::size_t t = 0; t < 3; ++t) {
      CHECK(a.results[c].per_trial[t] == b.results[c].per_trial[t]);
      CHECK(a.results[c].per_trial[t] >= 0.0);
      CHECK(a.results[c].per_trial[t] <= 1.0);
    }
    // mean/std are consistent with per_trial
    double mean = 0.0;
    for (double v : a.results[c].per_trial) mean += v;
    mean /= 3.0;
    CHECK(a.results[c].mean_auc == doctest::Approx(mean).epsilon(1e-15));
  }

  // The volume scorer dominates on the sphere at d=3.
  CHECK(a.results[1].mean_auc - a.results[0].mean_auc > 0.5);

  CHECK_THROWS_AS(run_trials(spec, {}, 3), Error);
  CHECK_THROWS_AS(run_trials(spec, configs, 0), Error);
}

TEST_CASE("trial_report_json carries the contract fields") {
  ExperimentSpec spec;
  spec.experiment = "cube";
  spec.d = 4;
  spec.seed = 1;

  DetectorConfig config;
  config.n_estimators = 10;
  config.alpha = Alpha::infinity();
  const TrialReport report = run_trials(spec, std::vector<DetectorConfig>{config}, 2);
  const auto doc = nlohmann::json::parse(trial_report_json(report));

  CHECK(doc.at("experiment") == "cube");
  CHECK(doc.at("d") == 4);
  CHECK(doc.at("trials") == 2);
  REQUIRE(doc.at("configs").size() == 1);
  const auto& entry = doc.at("configs")[0];
  CHECK(entry.at("alpha") == "inf");  // infinity is encoded as a string
  CHECK(entry.at("scorer") == "depth");
  CHECK(entry.at("mean_auc").is_number());
  CHECK(entry.at("std_auc").is_number());
  CHECK(entry.at("per_trial").size() == 2);
}

TEST_CASE("rank_table averages ranks with ties and pairwise exclusion") {
  // 3 algorithms x 3 datasets; algorithm 2 missing on dataset 2.
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Matrix aucs(3, 3, std::vector<double>{
      0.9, 0.5, 0.6,   // algo 0
      0.8, 0.5, 0.7,   // algo 1
      0.7, 0.4, nan,   // algo 2
  });
  const RankSummary summary = rank_table(aucs);

  // dataset 0 ranks: a0=1, a1=2, a2=3; dataset 1: tie a0/a1 -> 1.5, a2=3;
  // dataset 2 (a2 excluded): a1=1, a0=2.
  CHECK(summary.avg_rank[0] == doctest::Approx((1.0 + 1.5 + 2.0) / 3.0).epsilon(1e-12));
  CHECK(summary.avg_rank[1] == doctest::Approx((2.0 + 1.5 + 1.0) / 3.0).epsilon(1e-12));
  CHECK(summary.avg_rank[2] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(summary.n_ranked[0] == 3);
  CHECK(summary.n_ranked[2] == 2);
  CHECK(summary.mean_auc[2] == doctest::Approx(0.55).epsilon(1e-12));

  CHECK_THROWS_AS(rank_table(Matrix(0, 0)), Error);
}
