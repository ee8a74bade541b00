/* aniso: isolation-forest anomaly detection with power-mean aggregation
 * and hypervolume scoring, behind a flat C interface.
 *
 * Conventions:
 *   - Functions returning aniso_status never throw across the boundary;
 *     nonzero means failure and aniso_last_error() describes it (the
 *     message is thread-local and valid until the next failing call on
 *     the same thread).
 *   - Objects come back through out-parameters as opaque handles owned by
 *     the caller; release them with the matching _destroy function.
 *   - Output buffers are caller-allocated; sizes come from the dataset
 *     accessors. Strings returned through char** are released with
 *     aniso_string_free.
 */
#ifndef ANISO_H
#define ANISO_H

#include <stddef.h>
#include <stdint.h>

#if defined(__GNUC__)
#define ANISO_API __attribute__((visibility("default")))
#else
#define ANISO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aniso_status {
  ANISO_OK = 0,
  ANISO_ERR_INVALID_ARGUMENT = 1,
  ANISO_ERR_DIMENSION_MISMATCH = 2,
  ANISO_ERR_EMPTY_INPUT = 3,
  ANISO_ERR_NON_FINITE_VALUE = 4,
  ANISO_ERR_PARSE = 5,
  ANISO_ERR_RAGGED_ROWS = 6,
  ANISO_ERR_LABEL_NOT_BINARY = 7,
  ANISO_ERR_DEGENERATE_LABELS = 8,
  ANISO_ERR_NOT_A_PROBABILITY = 9,
  ANISO_ERR_NEGATIVE_ENTRY = 10,
  ANISO_ERR_NO_THRESHOLD = 11,
  ANISO_ERR_IO = 12,
  ANISO_ERR_CORRUPT_FILE = 13,
  ANISO_ERR_VERSION_MISMATCH = 14,
  ANISO_ERR_INVALID_HANDLE = 15,
  ANISO_ERR_INTERNAL = 16
} aniso_status;

typedef enum aniso_scorer {
  ANISO_SCORER_DEPTH = 0,
  ANISO_SCORER_VOLUME = 1
} aniso_scorer;

typedef enum aniso_bounding {
  ANISO_BOUNDING_PER_TREE = 0,
  ANISO_BOUNDING_GLOBAL = 1,
  ANISO_BOUNDING_USER = 2
} aniso_bounding;

typedef struct aniso_dataset aniso_dataset;
typedef struct aniso_detector aniso_detector;

typedef struct aniso_config {
  uint32_t n_estimators;   /* default 100 */
  uint32_t subsample_size; /* default 256, clamped to the data size */
  aniso_scorer scorer;
  double alpha;            /* >= 0; INFINITY selects min-aggregation */
  int has_tau;
  double tau;
  int has_contamination;
  double contamination;    /* in (0, 0.5]; mutually exclusive with tau */
  uint64_t seed;
  int strict_paper_depth;  /* drop the multi-point leaf depth correction */
  aniso_bounding bounding; /* volume scorer only */
  const double* user_box_lower; /* user_box_dim values each, bounding USER */
  const double* user_box_upper;
  size_t user_box_dim;
} aniso_config;

/* Fills in the defaults above; call before overriding fields. */
ANISO_API void aniso_config_init(aniso_config* config);

/* --- datasets --------------------------------------------------------- */

/* values: rows x cols row-major, all finite. labels: rows entries of 0/1,
 * or NULL for unlabeled data. */
ANISO_API aniso_status aniso_dataset_create(const double* values, size_t rows, size_t cols,
                                            const int32_t* labels, aniso_dataset** out);

/* label_column: zero-based column of 0/1 labels, or -1 for none. */
ANISO_API aniso_status aniso_dataset_from_csv(const char* path, char delimiter, int has_header,
                                              int64_t label_column, aniso_dataset** out);

ANISO_API size_t aniso_dataset_rows(const aniso_dataset* data);
ANISO_API size_t aniso_dataset_dims(const aniso_dataset* data);
ANISO_API int aniso_dataset_has_labels(const aniso_dataset* data);
/* out: aniso_dataset_rows entries. */
ANISO_API aniso_status aniso_dataset_labels(const aniso_dataset* data, int32_t* out);
ANISO_API void aniso_dataset_destroy(aniso_dataset* data);

/* --- detectors -------------------------------------------------------- */

ANISO_API aniso_status aniso_fit(const aniso_dataset* data, const aniso_config* config,
                                 aniso_detector** out);

/* scores: one entry per row, in (0, 1], higher = more anomalous. */
ANISO_API aniso_status aniso_score_samples(const aniso_detector* detector,
                                           const aniso_dataset* data, double* scores);

/* flags: 1 where score >= threshold. Needs tau or a contamination fit. */
ANISO_API aniso_status aniso_predict(const aniso_detector* detector, const aniso_dataset* data,
                                     int32_t* flags);

/* Threshold estimated from contamination at fit time, if any. */
ANISO_API aniso_status aniso_fitted_tau(const aniso_detector* detector, int* has_tau,
                                        double* tau);

/* 1 when the forest was grown on single-point subsamples (all depth scores
 * collapse to 0); fitting warns rather than fails. */
ANISO_API int aniso_detector_degenerate(const aniso_detector* detector);

ANISO_API aniso_status aniso_save_model(const aniso_detector* detector, const char* path);
ANISO_API aniso_status aniso_load_model(const char* path, aniso_detector** out);
ANISO_API void aniso_detector_destroy(aniso_detector* detector);

/* --- score math ------------------------------------------------------- */

/* Power mean with exponent 1 - alpha (alpha 0 mean, 1 geometric,
 * 2 harmonic, INFINITY min). Entries must be >= 0. */
ANISO_API aniso_status aniso_power_mean(const double* x, size_t n, double alpha, double* out);

/* 2^(-power_mean), the aggregated anomaly score in (0, 1]. */
ANISO_API aniso_status aniso_aggregate(const double* x, size_t n, double alpha, double* out);

/* Renyi divergence R_alpha(p||q); p must sum to 1 (tolerance 1e-9).
 * May return +infinity. */
ANISO_API aniso_status aniso_renyi_divergence(const double* p, const double* q, size_t n,
                                              double alpha, double* out);

/* Rank-sum AUCROC with average ranks on ties; labels 0/1, both present. */
ANISO_API aniso_status aniso_auc_roc(const double* scores, const int32_t* labels, size_t n,
                                     double* out);

/* --- synthetic experiments -------------------------------------------- */

/* n_inliers uniform points in the unit cube plus one outlier at
 * (offset, 0.5, ..., 0.5), labeled 1, appended last. */
ANISO_API aniso_status aniso_gen_cube(size_t d, size_t n_inliers, double offset, uint64_t seed,
                                      aniso_dataset** out);

/* n_inliers points on the unit sphere (radius jittered by noise_sigma)
 * plus one outlier at the origin, labeled 1, appended last. */
ANISO_API aniso_status aniso_gen_sphere(size_t d, size_t n_inliers, double noise_sigma,
                                        uint64_t seed, aniso_dataset** out);

typedef struct aniso_experiment {
  const char* name; /* "cube" or "sphere" */
  size_t d;
  size_t n_inliers;
  double offset;      /* cube */
  double noise_sigma; /* sphere */
  uint64_t seed;
} aniso_experiment;

ANISO_API void aniso_experiment_init(aniso_experiment* spec);

/* Repeats: fresh dataset per trial, every config fitted and scored on it,
 * AUCROC recorded. json_out receives the report: experiment, d, trials,
 * and per config alpha/scorer/mean_auc/std_auc/per_trial. Free with
 * aniso_string_free. */
ANISO_API aniso_status aniso_run_trials(const aniso_experiment* spec,
                                        const aniso_config* configs, size_t n_configs,
                                        size_t n_trials, char** json_out);

/* aucs: n_algos x n_datasets row-major, NaN = not run (excluded pairwise).
 * Each output array has n_algos entries; rank 1 is best. */
ANISO_API aniso_status aniso_rank_table(const double* aucs, size_t n_algos, size_t n_datasets,
                                        double* avg_rank, double* mean_auc, uint32_t* n_ranked);

/* --- io ---------------------------------------------------------------- */

/* Writes "index,score" rows; scores rendered shortest-round-trip. */
ANISO_API aniso_status aniso_write_scores_csv(const char* path, const double* scores, size_t n);

/* --- diagnostics ------------------------------------------------------- */

/* Message for the last failure on this thread ("" if none). */
ANISO_API const char* aniso_last_error(void);
ANISO_API const char* aniso_version(void);
ANISO_API void aniso_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* ANISO_H */
