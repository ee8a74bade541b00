// aniso command-line front end. Talks to the engine exclusively through the
// C API in aniso/aniso.h; exit code 0 on success, 1 on usage errors, 2 on
// data/model errors reported by the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aniso/aniso.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct DatasetDeleter {
  void operator()(aniso_dataset* d) const { aniso_dataset_destroy(d); }
};
struct DetectorDeleter {
  void operator()(aniso_detector* d) const { aniso_detector_destroy(d); }
};
using DatasetPtr = std::unique_ptr<aniso_dataset, DatasetDeleter>;
using DetectorPtr = std::unique_ptr<aniso_detector, DetectorDeleter>;

[[nodiscard]] int report_failure() {
  std::cerr << "error: " << aniso_last_error() << "\n";
  return kExitData;
}

bool parse_alpha(const std::string& text, double* out) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "inf" || lower == "infinity") {
    *out = std::numeric_limits<double>::infinity();
    return true;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || std::isnan(v) || v < 0.0) return false;
    *out = v;
    return true;
  } catch (...) {
    return false;
  }
}

std::string alpha_label(double alpha) {
  if (std::isinf(alpha)) return "inf";
  std::ostringstream os;
  os << alpha;
  return os.str();
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

// Options shared by every subcommand that reads a CSV.
struct CsvFlags {
  std::string path;
  std::string delimiter = ",";
  bool header = false;
  std::int64_t label_column = -1;  // -1: no labels, -2: last column

  void attach(CLI::App* cmd, bool require_data = true) {
    auto* opt = cmd->add_option("--data", path, "input CSV file");
    if (require_data) opt->required();
    cmd->add_option("--delimiter", delimiter, "field delimiter (default ,)")
        ->check(CLI::Validator(
            [](std::string& s) {
              return s.size() == 1 ? std::string() : std::string("must be one character");
            },
            "CHAR"));
    cmd->add_flag("--header", header, "skip the first line");
    cmd->add_option("--label-column", label_column,
                    "zero-based 0/1 label column; -2 means the last column (default: none)")
        ->check(CLI::Range(std::int64_t{-2}, std::numeric_limits<std::int64_t>::max()));
  }

  [[nodiscard]] DatasetPtr load(const std::string& file) const {
    std::int64_t column = label_column;
    if (column == -2) {
      // Column count is only known after a read, so probe unlabeled first.
      aniso_dataset* probe = nullptr;
      if (aniso_dataset_from_csv(file.c_str(), delimiter[0], header ? 1 : 0, -1, &probe) !=
          ANISO_OK) {
        return nullptr;
      }
      column = static_cast<std::int64_t>(aniso_dataset_dims(probe)) - 1;
      aniso_dataset_destroy(probe);
    }
    aniso_dataset* data = nullptr;
    if (aniso_dataset_from_csv(file.c_str(), delimiter[0], header ? 1 : 0, column, &data) !=
        ANISO_OK) {
      return nullptr;
    }
    return DatasetPtr(data);
  }

  [[nodiscard]] DatasetPtr load() const { return load(path); }
};

// Detector options shared by fit/toy/bench.
struct ConfigFlags {
  std::uint32_t n_estimators = 100;
  std::uint32_t subsample = 256;
  std::string scorer = "depth";
  std::string alpha = "0";
  std::optional<double> tau;
  std::optional<double> contamination;
  std::uint64_t seed = 0;
  bool strict_depth = false;
  std::string bounding = "per_tree";
  std::vector<double> box_lower;
  std::vector<double> box_upper;

  void attach(CLI::App* cmd, bool with_threshold = true) {
    cmd->add_option("--n-estimators", n_estimators, "trees in the forest (default 100)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--subsample", subsample, "subsample size per tree (default 256)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--scorer", scorer, "per-tree score: depth or volume")
        ->check(CLI::IsMember({"depth", "volume"}));
    cmd->add_option("--alpha", alpha, "aggregation order: >= 0 or inf (default 0)");
    cmd->add_option("--seed", seed, "RNG seed (default 0)");
    cmd->add_flag("--strict-depth", strict_depth,
                  "score leaves by raw depth, without the multi-point correction");
    cmd->add_option("--bounding", bounding, "volume bounding box: per_tree, global, or user")
        ->check(CLI::IsMember({"per_tree", "global", "user"}));
    cmd->add_option("--box-lower", box_lower,
                    "user box lower corner, comma separated (with --bounding user)")
        ->delimiter(',');
    cmd->add_option("--box-upper", box_upper,
                    "user box upper corner, comma separated (with --bounding user)")
        ->delimiter(',');
    if (with_threshold) {
      auto* tau_opt = cmd->add_option("--tau", tau, "fixed decision threshold");
      cmd->add_option("--contamination", contamination,
                      "expected anomaly fraction in (0, 0.5]; estimates the threshold")
          ->excludes(tau_opt);
    }
  }

  [[nodiscard]] bool fill(aniso_config* config, std::string* error) const {
    aniso_config_init(config);
    config->n_estimators = n_estimators;
    config->subsample_size = subsample;
    config->scorer = scorer == "volume" ? ANISO_SCORER_VOLUME : ANISO_SCORER_DEPTH;
    if (!parse_alpha(alpha, &config->alpha)) {
      *error = "--alpha must be a number >= 0 or 'inf'";
      return false;
    }
    if (tau) {
      config->has_tau = 1;
      config->tau = *tau;
    }
    if (contamination) {
      if (!(*contamination > 0.0 && *contamination <= 0.5)) {
        *error = "--contamination must be in (0, 0.5]";
        return false;
      }
      config->has_contamination = 1;
      config->contamination = *contamination;
    }
    config->seed = seed;
    config->strict_paper_depth = strict_depth ? 1 : 0;
    if (bounding == "global") {
      config->bounding = ANISO_BOUNDING_GLOBAL;
    } else if (bounding == "user") {
      config->bounding = ANISO_BOUNDING_USER;
      if (box_lower.empty() || box_lower.size() != box_upper.size()) {
        *error = "--bounding user needs --box-lower and --box-upper of equal length";
        return false;
      }
      config->user_box_lower = box_lower.data();
      config->user_box_upper = box_upper.data();
      config->user_box_dim = box_lower.size();
    }
    return true;
  }
};

int run_fit(const CsvFlags& csv, const ConfigFlags& flags, const std::string& out_path) {
  aniso_config config;
  std::string error;
  if (!flags.fill(&config, &error)) {
    std::cerr << "error: " << error << "\n";
    return kExitUsage;
  }
  const auto data = csv.load();
  if (!data) return report_failure();

  aniso_detector* raw = nullptr;
  if (aniso_fit(data.get(), &config, &raw) != ANISO_OK) return report_failure();
  DetectorPtr detector(raw);

  if (aniso_detector_degenerate(detector.get())) {
    std::cerr << "warning: single-point subsamples; every depth score is 0\n";
  }
  if (aniso_save_model(detector.get(), out_path.c_str()) != ANISO_OK) return report_failure();

  int has_tau = 0;
  double tau = 0.0;
  aniso_fitted_tau(detector.get(), &has_tau, &tau);
  std::cout << "model written to " << out_path << "\n";
  if (has_tau) std::cout << "fitted tau " << tau << "\n";
  return kExitOk;
}

int run_score(const std::string& model_path, const CsvFlags& csv, const std::string& out_path) {
  aniso_detector* raw = nullptr;
  if (aniso_load_model(model_path.c_str(), &raw) != ANISO_OK) return report_failure();
  DetectorPtr detector(raw);

  const auto data = csv.load();
  if (!data) return report_failure();

  std::vector<double> scores(aniso_dataset_rows(data.get()));
  if (aniso_score_samples(detector.get(), data.get(), scores.data()) != ANISO_OK) {
    return report_failure();
  }
  if (aniso_write_scores_csv(out_path.c_str(), scores.data(), scores.size()) != ANISO_OK) {
    return report_failure();
  }
  std::cout << scores.size() << " scores written to " << out_path << "\n";
  return kExitOk;
}

int run_eval(const std::string& model_path, const CsvFlags& csv) {
  aniso_detector* raw = nullptr;
  if (aniso_load_model(model_path.c_str(), &raw) != ANISO_OK) return report_failure();
  DetectorPtr detector(raw);

  const auto data = csv.load();
  if (!data) return report_failure();
  if (!aniso_dataset_has_labels(data.get())) {
    std::cerr << "error: evaluation needs labeled data; pass --label-column\n";
    return kExitData;
  }

  const std::size_t rows = aniso_dataset_rows(data.get());
  std::vector<double> scores(rows);
  if (aniso_score_samples(detector.get(), data.get(), scores.data()) != ANISO_OK) {
    return report_failure();
  }
  std::vector<std::int32_t> labels(rows);
  if (aniso_dataset_labels(data.get(), labels.data()) != ANISO_OK) return report_failure();

  double auc = 0.0;
  if (aniso_auc_roc(scores.data(), labels.data(), rows, &auc) != ANISO_OK) {
    return report_failure();
  }
  std::cout << "AUCROC " << auc << "\n";
  return kExitOk;
}

struct ToyFlags {
  std::string experiment;
  std::size_t d = 10;
  std::size_t trials = 100;
  std::size_t n_inliers = 127;
  double offset = 1.05;
  double noise_sigma = 0.05;
  std::string alphas = "0,inf";
  std::string scorers = "depth";
  std::string out_path;
};

int run_toy(const ToyFlags& toy, const ConfigFlags& base) {
  std::vector<double> alphas;
  for (const auto& item : split_list(toy.alphas)) {
    double a = 0.0;
    if (!parse_alpha(item, &a)) {
      std::cerr << "error: bad alpha '" << item << "' in --alphas\n";
      return kExitUsage;
    }
    alphas.push_back(a);
  }
  std::vector<std::string> scorers = split_list(toy.scorers);
  for (const auto& s : scorers) {
    if (s != "depth" && s != "volume") {
      std::cerr << "error: bad scorer '" << s << "' in --scorers\n";
      return kExitUsage;
    }
  }
  if (alphas.empty() || scorers.empty()) {
    std::cerr << "error: --alphas and --scorers must be nonempty\n";
    return kExitUsage;
  }

  std::vector<aniso_config> configs;
  std::vector<std::string> labels;
  for (const auto& s : scorers) {
    for (double a : alphas) {
      aniso_config config;
      std::string error;
      if (!base.fill(&config, &error)) {
        std::cerr << "error: " << error << "\n";
        return kExitUsage;
      }
      config.scorer = s == "volume" ? ANISO_SCORER_VOLUME : ANISO_SCORER_DEPTH;
      config.alpha = a;
      configs.push_back(config);
      labels.push_back(s + "_a" + alpha_label(a));
    }
  }

  aniso_experiment spec;
  aniso_experiment_init(&spec);
  spec.name = toy.experiment.c_str();
  spec.d = toy.d;
  spec.n_inliers = toy.n_inliers;
  spec.offset = toy.offset;
  spec.noise_sigma = toy.noise_sigma;
  spec.seed = base.seed;  // trial protocol derives all detector seeds from this

  char* json = nullptr;
  if (aniso_run_trials(&spec, configs.data(), configs.size(), toy.trials, &json) != ANISO_OK) {
    return report_failure();
  }
  std::string report(json);
  aniso_string_free(json);

  if (!toy.out_path.empty()) {
    std::ofstream out(toy.out_path);
    out << report << "\n";
    if (!out.good()) {
      std::cerr << "error: failed writing " << toy.out_path << "\n";
      return kExitData;
    }
    std::cout << "report written to " << toy.out_path << "\n";
  } else {
    std::cout << report << "\n";
  }
  return kExitOk;
}

struct BenchFlags {
  std::string data_dir;
  std::string alphas = "0,0.5,1,2,inf";
  std::string scorers = "depth,volume";
  std::string out_matrix;
  std::string out_ranks;
};

int run_bench(const BenchFlags& bench, const CsvFlags& csv_base, const ConfigFlags& base) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(bench.data_dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  if (ec) {
    std::cerr << "error: cannot read directory " << bench.data_dir << "\n";
    return kExitData;
  }
  if (files.empty()) {
    std::cerr << "error: no .csv files in " << bench.data_dir << "\n";
    return kExitData;
  }
  std::sort(files.begin(), files.end());

  std::vector<double> alphas;
  for (const auto& item : split_list(bench.alphas)) {
    double a = 0.0;
    if (!parse_alpha(item, &a)) {
      std::cerr << "error: bad alpha '" << item << "' in --alphas\n";
      return kExitUsage;
    }
    alphas.push_back(a);
  }
  std::vector<std::string> scorers = split_list(bench.scorers);
  for (const auto& s : scorers) {
    if (s != "depth" && s != "volume") {
      std::cerr << "error: bad scorer '" << s << "' in --scorers\n";
      return kExitUsage;
    }
  }
  if (alphas.empty() || scorers.empty()) {
    std::cerr << "error: --alphas and --scorers must be nonempty\n";
    return kExitUsage;
  }

  std::vector<aniso_config> configs;
  std::vector<std::string> config_names;
  for (const auto& s : scorers) {
    for (double a : alphas) {
      aniso_config config;
      std::string error;
      if (!base.fill(&config, &error)) {
        std::cerr << "error: " << error << "\n";
        return kExitUsage;
      }
      config.scorer = s == "volume" ? ANISO_SCORER_VOLUME : ANISO_SCORER_DEPTH;
      config.alpha = a;
      configs.push_back(config);
      config_names.push_back(s + "_a" + alpha_label(a));
    }
  }

  // AUC matrix, configs x datasets.
  std::vector<double> aucs(configs.size() * files.size(),
                           std::numeric_limits<double>::quiet_NaN());
  CsvFlags csv = csv_base;
  if (csv.label_column == -1) csv.label_column = -2;  // bench data must be labeled

  for (std::size_t f = 0; f < files.size(); ++f) {
    const auto data = csv.load(files[f].string());
    if (!data) return report_failure();
    if (!aniso_dataset_has_labels(data.get())) {
      std::cerr << "error: " << files[f] << " has no label column\n";
      return kExitData;
    }
    const std::size_t rows = aniso_dataset_rows(data.get());
    std::vector<std::int32_t> labels(rows);
    if (aniso_dataset_labels(data.get(), labels.data()) != ANISO_OK) return report_failure();
    std::vector<double> scores(rows);

    for (std::size_t c = 0; c < configs.size(); ++c) {
      aniso_detector* raw = nullptr;
      if (aniso_fit(data.get(), &configs[c], &raw) != ANISO_OK) return report_failure();
      DetectorPtr detector(raw);
      if (aniso_score_samples(detector.get(), data.get(), scores.data()) != ANISO_OK) {
        return report_failure();
      }
      double auc = 0.0;
      if (aniso_auc_roc(scores.data(), labels.data(), rows, &auc) != ANISO_OK) {
        return report_failure();
      }
      aucs[c * files.size() + f] = auc;
    }
  }

  std::vector<double> avg_rank(configs.size());
  std::vector<double> mean_auc(configs.size());
  std::vector<std::uint32_t> n_ranked(configs.size());
  if (aniso_rank_table(aucs.data(), configs.size(), files.size(), avg_rank.data(),
                       mean_auc.data(), n_ranked.data()) != ANISO_OK) {
    return report_failure();
  }

  std::ostringstream matrix;
  matrix << "dataset";
  for (const auto& name : config_names) matrix << ',' << name;
  matrix << '\n';
  for (std::size_t f = 0; f < files.size(); ++f) {
    matrix << files[f].stem().string();
    for (std::size_t c = 0; c < configs.size(); ++c) {
      matrix << ',' << aucs[c * files.size() + f];
    }
    matrix << '\n';
  }

  std::ostringstream ranks;
  ranks << "config,avg_rank,mean_auc,n_datasets\n";
  for (std::size_t c = 0; c < configs.size(); ++c) {
    ranks << config_names[c] << ',' << avg_rank[c] << ',' << mean_auc[c] << ',' << n_ranked[c]
          << '\n';
  }

  std::cout << matrix.str() << "\n" << ranks.str();
  if (!bench.out_matrix.empty()) {
    std::ofstream out(bench.out_matrix);
    out << matrix.str();
    if (!out.good()) {
      std::cerr << "error: failed writing " << bench.out_matrix << "\n";
      return kExitData;
    }
  }
  if (!bench.out_ranks.empty()) {
    std::ofstream out(bench.out_ranks);
    out << ranks.str();
    if (!out.good()) {
      std::cerr << "error: failed writing " << bench.out_ranks << "\n";
      return kExitData;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aniso: isolation-forest anomaly detection with power-mean aggregation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", []() { return std::string(aniso_version()); });

  // fit
  auto* fit = app.add_subcommand("fit", "fit a detector on a CSV and save the model");
  CsvFlags fit_csv;
  ConfigFlags fit_config;
  std::string fit_out;
  fit_csv.attach(fit);
  fit_config.attach(fit);
  fit->add_option("--out", fit_out, "model file to write")->required();

  // score
  auto* score = app.add_subcommand("score", "score a CSV with a saved model");
  CsvFlags score_csv;
  std::string score_model, score_out;
  score_csv.attach(score);
  score->add_option("--model", score_model, "model file")->required();
  score->add_option("--out", score_out, "scores CSV to write (index,score)")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "AUCROC of a saved model on labeled data");
  CsvFlags eval_csv;
  std::string eval_model;
  eval_csv.attach(eval);
  eval->add_option("--model", eval_model, "model file")->required();

  // toy
  auto* toy = app.add_subcommand("toy", "run the synthetic trial protocol");
  ToyFlags toy_flags;
  ConfigFlags toy_config;
  toy->add_option("--experiment", toy_flags.experiment, "cube or sphere")
      ->required()
      ->check(CLI::IsMember({"cube", "sphere"}));
  toy->add_option("--d", toy_flags.d, "dimension (default 10)")->check(CLI::PositiveNumber);
  toy->add_option("--trials", toy_flags.trials, "trial count (default 100)")
      ->check(CLI::PositiveNumber);
  toy->add_option("--n-inliers", toy_flags.n_inliers, "inliers per dataset (default 127)")
      ->check(CLI::PositiveNumber);
  toy->add_option("--offset", toy_flags.offset, "cube outlier offset (default 1.05)");
  toy->add_option("--noise-sigma", toy_flags.noise_sigma,
                  "sphere radial noise sigma (default 0.05)");
  toy->add_option("--alphas", toy_flags.alphas, "comma list of alphas (default 0,inf)");
  toy->add_option("--scorers", toy_flags.scorers, "comma list of scorers (default depth)");
  toy->add_option("--out", toy_flags.out_path, "write the JSON report here (default stdout)");
  toy_config.attach(toy, /*with_threshold=*/false);

  // bench
  auto* bench = app.add_subcommand("bench", "AUC matrix and rank table over a CSV directory");
  BenchFlags bench_flags;
  CsvFlags bench_csv;
  ConfigFlags bench_config;
  bench->add_option("--data-dir", bench_flags.data_dir, "directory of labeled CSV files")
      ->required();
  bench->add_option("--alphas", bench_flags.alphas,
                    "comma list of alphas (default 0,0.5,1,2,inf)");
  bench->add_option("--scorers", bench_flags.scorers,
                    "comma list of scorers (default depth,volume)");
  bench->add_option("--out-matrix", bench_flags.out_matrix, "write the AUC matrix CSV here");
  bench->add_option("--out-ranks", bench_flags.out_ranks, "write the rank table CSV here");
  bench_csv.attach(bench, /*require_data=*/false);
  bench_config.attach(bench, /*with_threshold=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (fit->parsed()) return run_fit(fit_csv, fit_config, fit_out);
  if (score->parsed()) return run_score(score_model, score_csv, score_out);
  if (eval->parsed()) return run_eval(eval_model, eval_csv);
  if (toy->parsed()) return run_toy(toy_flags, toy_config);
  if (bench->parsed()) return run_bench(bench_flags, bench_csv, bench_config);
  return kExitUsage;
}
