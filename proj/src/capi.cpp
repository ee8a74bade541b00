#include "aniso/aniso.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "csv.hpp"
#include "dataset.hpp"
#include "detector.hpp"
#include "experiments.hpp"
#include "model_io.hpp"

struct aniso_dataset {
  aniso::Dataset data;
};

struct aniso_detector {
  aniso::Detector detector;
};

namespace {

thread_local std::string t_last_error;

aniso_status map_code(aniso::ErrorCode code) {
  using aniso::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return ANISO_ERR_INVALID_ARGUMENT;
    case ErrorCode::dimension_mismatch: return ANISO_ERR_DIMENSION_MISMATCH;
    case ErrorCode::empty_input: return ANISO_ERR_EMPTY_INPUT;
    case ErrorCode::non_finite_value: return ANISO_ERR_NON_FINITE_VALUE;
    case ErrorCode::parse_error: return ANISO_ERR_PARSE;
    case ErrorCode::ragged_rows: return ANISO_ERR_RAGGED_ROWS;
    case ErrorCode::label_not_binary: return ANISO_ERR_LABEL_NOT_BINARY;
    case ErrorCode::degenerate_labels: return ANISO_ERR_DEGENERATE_LABELS;
    case ErrorCode::not_a_probability: return ANISO_ERR_NOT_A_PROBABILITY;
    case ErrorCode::negative_entry: return ANISO_ERR_NEGATIVE_ENTRY;
    case ErrorCode::no_threshold: return ANISO_ERR_NO_THRESHOLD;
    case ErrorCode::io_error: return ANISO_ERR_IO;
    case ErrorCode::corrupt_file: return ANISO_ERR_CORRUPT_FILE;
    case ErrorCode::version_mismatch: return ANISO_ERR_VERSION_MISMATCH;
  }
  return ANISO_ERR_INTERNAL;
}

aniso_status failure(aniso_status status, const char* message) {
  t_last_error = message;
  return status;
}

aniso_status current_exception_status() {
  try {
    throw;
  } catch (const aniso::Error& e) {
    t_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return ANISO_ERR_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return ANISO_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return ANISO_ERR_INTERNAL;
  }
}

aniso::DetectorConfig convert_config(const aniso_config& c) {
  aniso::DetectorConfig config;
  config.n_estimators = c.n_estimators;
  config.subsample_size = c.subsample_size;
  switch (c.scorer) {
    case ANISO_SCORER_DEPTH: config.scorer = aniso::ScorerKind::depth; break;
    case ANISO_SCORER_VOLUME: config.scorer = aniso::ScorerKind::volume; break;
    default: aniso::fail(aniso::ErrorCode::invalid_argument, "unknown scorer");
  }
  config.alpha = aniso::Alpha(c.alpha);
  if (c.has_tau) config.tau = c.tau;
  if (c.has_contamination) config.contamination = c.contamination;
  config.seed = c.seed;
  config.strict_paper_depth = c.strict_paper_depth != 0;
  switch (c.bounding) {
    case ANISO_BOUNDING_PER_TREE: config.bounding = aniso::BoundingPolicy::per_tree; break;
    case ANISO_BOUNDING_GLOBAL: config.bounding = aniso::BoundingPolicy::global; break;
    case ANISO_BOUNDING_USER: config.bounding = aniso::BoundingPolicy::user; break;
    default: aniso::fail(aniso::ErrorCode::invalid_argument, "unknown bounding policy");
  }
  if (c.user_box_lower != nullptr && c.user_box_upper != nullptr && c.user_box_dim > 0) {
    config.user_box = aniso::HyperRectangle(
        std::vector<double>(c.user_box_lower, c.user_box_lower + c.user_box_dim),
        std::vector<double>(c.user_box_upper, c.user_box_upper + c.user_box_dim));
  }
  return config;
}

}  // namespace

extern "C" {

void aniso_config_init(aniso_config* config) {
  if (config == nullptr) return;
  std::memset(config, 0, sizeof *config);
  config->n_estimators = 100;
  config->subsample_size = 256;
  config->scorer = ANISO_SCORER_DEPTH;
  config->alpha = 0.0;
  config->bounding = ANISO_BOUNDING_PER_TREE;
}

aniso_status aniso_dataset_create(const double* values, size_t rows, size_t cols,
                                  const int32_t* labels, aniso_dataset** out) {
  if (values == nullptr || out == nullptr) {
    return failure(ANISO_ERR_INVALID_HANDLE, "null pointer argument");
  }
  try {
    aniso::Matrix features(rows, cols, std::vector<double>(values, values + rows * cols));
    std::optional<std::vector<std::uint8_t>> lab;
    if (labels != nullptr) {
      std::vector<std::uint8_t> l(rows);
      for (size_t i = 0; i < rows; ++i) {
        if (labels[i] != 0 && labels[i] != 1) {
          aniso::fail(aniso::ErrorCode::label_not_binary,
                      "label at row " + std::to_string(i) + " is not 0/1");
        }
        l[i] = static_cast<std::uint8_t>(labels[i]);
      }
      lab = std::move(l);
    }
    *out = new aniso_dataset{aniso::Dataset(std::move(features), std::move(lab))};
    return ANISO_OK;
  } catch (...) {
    return current_exception_status();
  }
}

aniso_status aniso_dataset_from_csv(const char* path, char delimiter, int has_header,
                                    int64_t label_column, aniso_dataset** out) {
  if (path == nullptr || out == nullptr) {
    return failure(ANISO_ERR_INVALID_HANDLE, "null pointer argument");
  }
  try {
    aniso::CsvOptions options;
    options.delimiter = delimiter;
    options.has_header = has_header != 0;
    if (label_column >= 0) options.label_column = static_cast<std::size_t>(label_column);
    *out = new aniso_dataset{aniso::load_dataset_csv(path, options)};
    return ANISO_OK;
  } catch (...) {
    return current_exception_status();
  }
}

size_t aniso_dataset_rows(const aniso_dataset* data) {
  return data == nullptr ? 0 : data->data.size();
}

size_t aniso_dataset_dims(const aniso_dataset* data) {
  return data == nullptr ? 0 : data->data.dim();
}

int aniso_dataset_has_labels(const aniso_dataset* data) {
  return data != nullptr && data->data.has_labels() ? 1 : 0;
}

aniso_status aniso_dataset_labels(const aniso_dataset* data, int32_t* out) {
  if (data == nullptr || out == nullptr) {
    return failure(ANISO_ERR_INVALID_HANDLE, "null pointer argument");
  }
  try {
    const auto& labels = data->data.labels();
    for (size_t i = 0; i < labels.size(); ++i) out[i] = labels[i];
    return ANISO_OK;
  } catch (...) {
    return current_exception_status();
  }
}

void aniso_dataset_destroy(aniso_dataset* data) { delete data; }

aniso_status aniso_fit(const aniso_dataset* data, const aniso_config* config,
                       aniso_detector** out) {
  if (data == nullptr || config == nullptr || out == nullptr) {
    return failure(ANISO_ERR_INVALID_HANDLE, "null pointer argument");
  }
  try {
    *out = new aniso_detector{aniso::Detector::fit(data->data, convert_config(*config))};
    return ANISO_OK;
  } catch (...) {
    return current_exception_status();
  }
}

aniso_status aniso_score_samples(const aniso_detector* detector, const aniso_dataset* data,
                                 double* scores) {
  if (detector == nullptr || data == nullptr || scores == nullptr) {
    return failure(ANISO_ERR_INVALID_HANDLE, "null pointer argument");
  }
  try {
    const auto values = detector->detector.score_samples(data->data);
    std::memcpy(scores, values.data(), values.size() * sizeof(double));
    return ANISO_OK;
  } catch (...) {
    return current_exception_status();
  }
}

aniso_status aniso_predict(const aniso_detector* detector, const aniso_dataset* data,
                           int32_t* flags) {
  if (detector == nullptr || data == nullptr || flags == nullptr) {
    return failure(ANISO_ERR_INVALID_HANDLE, "null pointer argument");
  }
  try {
    const auto values = detector->detector.predict(data->data);
    for (size_t i = 0; i < values.size(); ++i) flags[i] = values[i];
    return ANISO_OK;
  } catch (...) {
    return current_exception_status();
  }
}

aniso_status aniso_fitted_tau(const aniso_detector* detector, int* has_tau, double* tau) {
  if (detector == nullptr || has_tau == nullptr || tau == nullptr) {
    return failure(ANISO_ERR_INVALID_HANDLE, "null pointer argument");
  }
  const auto fitted = detector->detector.fitted_tau();
  *has_tau = fitted.has_value() ? 1 : 0;
  *tau = fitted.value_or(0.0);
  return ANISO_OK;
}

int aniso_detector_degenerate(const aniso_detector* detector) {
  return detector != nullptr && detector->detector.forest().degenerate() ? 1 : 0;
}

aniso_status aniso_save_model(const aniso_detector* detector, const char* path) {
  if (detector == nullptr || path == nullptr) {
    return failure(ANISO_ERR_INVALID_HANDLE, "null pointer argument");
  }
  try {
    aniso::save_model(path, detector->detector);
    return ANISO_OK;
  } catch (...) {
    return current_exception_status();
  }
}

aniso_status aniso_load_model(const char* path, aniso_detector** out) {
  if (path == nullptr || out == nullptr) {
    return failure(ANISO_ERR_INVALID_HANDLE, "null pointer argument");
  }
  try {
    *out = new aniso_detector{aniso::load_model(path)};
    return ANISO_OK;
  } catch (...) {
    return current_exception_status();
  }
}

void aniso_detector_destroy(aniso_detector* detector) { delete detector; }

aniso_status aniso_power_mean(const double* x, size_t n, double alpha, double* out) {
  if (x == nullptr || out == nullptr) {
    return failure(ANISO_ERR_INVALID_HANDLE, "null pointer argument");
  }
  try {
    *out = aniso::power_mean({x, n}, aniso::Alpha(alpha));
    return ANISO_OK;
  } catch (...) {
    return current_exception_status();
  }
}

aniso_status aniso_aggregate(const double* x, size_t n, double alpha, double* out) {
  if (x == nullptr || out == nullptr) {
    return failure(ANISO_ERR_INVALID_HANDLE, "null pointer argument");
  }
  try {
    *out = aniso::aggregate({x, n}, aniso::Alpha(alpha));
    return ANISO_OK;
  } catch (...) {
    return current_exception_status();
  }
}

aniso_status aniso_renyi_divergence(const double* p, const double* q, size_t n, double alpha,
                                    double* out) {
  if (p == nullptr || q == nullptr || out == nullptr) {
    return failure(ANISO_ERR_INVALID_HANDLE, "null pointer argument");
  }
  try {
    *out = aniso::renyi_divergence({p, n}, {q, n}, aniso::Alpha(alpha));
    return ANISO_OK;
  } catch (...) {
    return current_exception_status();
  }
}

aniso_status aniso_auc_roc(const double* scores, const int32_t* labels, size_t n, double* out) {
  if (scores == nullptr || labels == nullptr || out == nullptr) {
    return failure(ANISO_ERR_INVALID_HANDLE, "null pointer argument");
  }
  try {
    std::vector<std::uint8_t> l(n);
    for (size_t i = 0; i < n; ++i) {
      if (labels[i] != 0 && labels[i] != 1) {
        aniso::fail(aniso::ErrorCode::label_not_binary, "labels must be 0/1");
      }
      l[i] = static_cast<std::uint8_t>(labels[i]);
    }
    *out = aniso::auc_roc({scores, n}, l);
    return ANISO_OK;
  } catch (...) {
    return current_exception_status();
  }
}

aniso_status aniso_gen_cube(size_t d, size_t n_inliers, double offset, uint64_t seed,
                            aniso_dataset** out) {
  if (out == nullptr) return failure(ANISO_ERR_INVALID_HANDLE, "null pointer argument");
  try {
    aniso::ExperimentSpec spec;
    spec.experiment = "cube";
    spec.d = d;
    spec.n_inliers = n_inliers;
    spec.offset = offset;
    spec.seed = seed;
    *out = new aniso_dataset{aniso::gen_experiment(spec, 0)};
    return ANISO_OK;
  } catch (...) {
    return current_exception_status();
  }
}

aniso_status aniso_gen_sphere(size_t d, size_t n_inliers, double noise_sigma, uint64_t seed,
                              aniso_dataset** out) {
  if (out == nullptr) return failure(ANISO_ERR_INVALID_HANDLE, "null pointer argument");
  try {
    aniso::ExperimentSpec spec;
    spec.experiment = "sphere";
    spec.d = d;
    spec.n_inliers = n_inliers;
    spec.noise_sigma = noise_sigma;
    spec.seed = seed;
    *out = new aniso_dataset{aniso::gen_experiment(spec, 0)};
    return ANISO_OK;
  } catch (...) {
    return current_exception_status();
  }
}

void aniso_experiment_init(aniso_experiment* spec) {
  if (spec == nullptr) return;
  spec->name = "cube";
  spec->d = 10;
  spec->n_inliers = 127;
  spec->offset = 1.05;
  spec->noise_sigma = 0.05;
  spec->seed = 0;
}

aniso_status aniso_run_trials(const aniso_experiment* spec, const aniso_config* configs,
                              size_t n_configs, size_t n_trials, char** json_out) {
  if (spec == nullptr || spec->name == nullptr || configs == nullptr || json_out == nullptr) {
    return failure(ANISO_ERR_INVALID_HANDLE, "null pointer argument");
  }
  try {
    aniso::ExperimentSpec cpp_spec;
    cpp_spec.experiment = spec->name;
    cpp_spec.d = spec->d;
    cpp_spec.n_inliers = spec->n_inliers;
    cpp_spec.offset = spec->offset;
    cpp_spec.noise_sigma = spec->noise_sigma;
    cpp_spec.seed = spec->seed;

    std::vector<aniso::DetectorConfig> cpp_configs;
    cpp_configs.reserve(n_configs);
    for (size_t i = 0; i < n_configs; ++i) cpp_configs.push_back(convert_config(configs[i]));

    const auto report = aniso::run_trials(cpp_spec, cpp_configs, n_trials);
    const std::string text = aniso::trial_report_json(report);
    char* buffer = new char[text.size() + 1];
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    *json_out = buffer;
    return ANISO_OK;
  } catch (...) {
    return current_exception_status();
  }
}

aniso_status aniso_rank_table(const double* aucs, size_t n_algos, size_t n_datasets,
                              double* avg_rank, double* mean_auc, uint32_t* n_ranked) {
  if (aucs == nullptr || avg_rank == nullptr || mean_auc == nullptr || n_ranked == nullptr) {
    return failure(ANISO_ERR_INVALID_HANDLE, "null pointer argument");
  }
  try {
    aniso::Matrix matrix(n_algos, n_datasets,
                         std::vector<double>(aucs, aucs + n_algos * n_datasets));
    const auto summary = aniso::rank_table(matrix);
    for (size_t a = 0; a < n_algos; ++a) {
      avg_rank[a] = summary.avg_rank[a];
      mean_auc[a] = summary.mean_auc[a];
      n_ranked[a] = summary.n_ranked[a];
    }
    return ANISO_OK;
  } catch (...) {
    return current_exception_status();
  }
}

aniso_status aniso_write_scores_csv(const char* path, const double* scores, size_t n) {
  if (path == nullptr || scores == nullptr) {
    return failure(ANISO_ERR_INVALID_HANDLE, "null pointer argument");
  }
  try {
    aniso::write_scores_csv(path, {scores, n});
    return ANISO_OK;
  } catch (...) {
    return current_exception_status();
  }
}

const char* aniso_last_error(void) { return t_last_error.c_str(); }

const char* aniso_version(void) { return "0.1.0"; }

void aniso_string_free(char* s) { delete[] s; }

}  // extern "C"
