/*
 * qrel: C interface to the relevance-judgment Hilbert-space toolkit.
 *
 * Objects are opaque handles created by qrel_*_load / qrel_*_create style
 * functions and released with the matching qrel_*_free. Every fallible call
 * returns a qrel_status; on failure a message is available from
 * qrel_last_error() on the calling thread until the next failing call.
 * Strings returned through char** out-parameters are owned by the caller and
 * released with qrel_string_free.
 */
#ifndef QREL_QREL_H
#define QREL_QREL_H

#include <stddef.h>
#include <stdint.h>

#if defined(QREL_BUILDING_LIBRARY)
#define QREL_API __attribute__((visibility("default")))
#else
#define QREL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qrel_status {
  QREL_OK = 0,
  QREL_E_DOMAIN = 1,
  QREL_E_ZERO_PROBABILITY_COLLAPSE = 2,
  QREL_E_INVALID_SEQUENCE = 3,
  QREL_E_EMPTY_GROUP = 4,
  QREL_E_MISSING_PROBABILITY = 5,
  QREL_E_INFEASIBLE_MODEL = 6,
  QREL_E_PARSE = 7,
  QREL_E_DUPLICATE_RESPONDENT = 8,
  QREL_E_UNKNOWN_SEQUENCE_TAG = 9,
  QREL_E_SCHEMA = 10,
  QREL_E_IO = 11,
  QREL_E_INVALID_ARGUMENT = 12, /* null handle or bad enum value */
  QREL_E_INTERNAL = 13
} qrel_status;

typedef enum qrel_format { QREL_FORMAT_MARKDOWN = 0, QREL_FORMAT_JSON = 1 } qrel_format;

typedef enum qrel_dimension {
  QREL_TOPICALITY = 0,
  QREL_UNDERSTANDABILITY = 1,
  QREL_RELIABILITY = 2
} qrel_dimension;

typedef struct qrel_judgment {
  qrel_dimension dimension;
  int positive; /* nonzero = yes */
} qrel_judgment;

typedef struct qrel_params {
  double t;
  double u;
  double r;
  double theta_r; /* radians, [0, pi] */
} qrel_params;

typedef struct qrel_fit_summary {
  qrel_params params;
  double cos_theta_raw;
  int feasible;
  int degenerate_phase;
  int has_residual;
  double residual_tru_third_step;
} qrel_fit_summary;

typedef struct qrel_sim_options {
  uint64_t n_respondents;
  uint64_t seed;
  double tur_fraction; /* 0.5 for an even split */
  int exact_split;
  unsigned threads; /* 0 = hardware concurrency */
} qrel_sim_options;

typedef struct qrel_stage_counts {
  uint64_t positive;
  uint64_t negative;
  uint64_t passed;
} qrel_stage_counts;

typedef struct qrel_dataset qrel_dataset;
typedef struct qrel_probs qrel_probs;
typedef struct qrel_model qrel_model;

QREL_API const char* qrel_version(void);
QREL_API const char* qrel_rng_version(void);
QREL_API const char* qrel_last_error(void);
QREL_API const char* qrel_status_name(qrel_status status);
QREL_API void qrel_string_free(char* s);

/* Response datasets (CSV). */
QREL_API qrel_status qrel_dataset_load_csv(const char* path, qrel_dataset** out);
QREL_API qrel_status qrel_dataset_save_csv(const qrel_dataset* data, const char* path);
QREL_API qrel_status qrel_dataset_to_csv(const qrel_dataset* data, char** out);
QREL_API size_t qrel_dataset_size(const qrel_dataset* data);
QREL_API void qrel_dataset_free(qrel_dataset* data);

/* Aggregated sequential probabilities, one entry per query. */
QREL_API qrel_status qrel_probs_from_dataset(const qrel_dataset* data, qrel_probs** out);
/* Accepts a response CSV or a probability JSON document. */
QREL_API qrel_status qrel_probs_load(const char* path, qrel_probs** out);
QREL_API size_t qrel_probs_count(const qrel_probs* probs);
/* Borrowed pointer valid while probs lives; NULL when index is out of range. */
QREL_API const char* qrel_probs_query_id(const qrel_probs* probs, size_t index);
QREL_API void qrel_probs_free(qrel_probs* probs);

/* Models. */
QREL_API qrel_status qrel_model_create(const char* query_id, const qrel_params* params, qrel_model** out);
QREL_API qrel_status qrel_model_load(const char* path, qrel_model** out);
QREL_API qrel_status qrel_model_save(const qrel_model* model, const char* path);
QREL_API qrel_status qrel_model_to_json(const qrel_model* model, char** out);
QREL_API qrel_status qrel_model_params(const qrel_model* model, qrel_params* out);
QREL_API const char* qrel_model_query_id(const qrel_model* model);
QREL_API void qrel_model_free(qrel_model* model);

/* Fitting. query_id may be NULL when probs holds exactly one query. Infeasible
 * data still yields a model (summary->feasible == 0); rendered text, when
 * requested, goes to *report. Either output pointer may be NULL. */
QREL_API qrel_status qrel_fit(const qrel_probs* probs, const char* query_id, qrel_format fmt, qrel_model** model,
                              qrel_fit_summary* summary, char** report);

/* Model quantities. */
QREL_API qrel_status qrel_predict(const qrel_model* model, const qrel_judgment* seq, size_t len, double* out);
QREL_API qrel_status qrel_interference(const qrel_model* model, double* out);
QREL_API qrel_status qrel_commutator_norms(const qrel_model* model, double out[3]); /* [T,U], [T,R], [R,U] */
QREL_API qrel_status qrel_wigner(double t_squared, double w[4], int* has_negative, double* min_entry);
QREL_API qrel_status qrel_chi_square(uint64_t k1, uint64_t n1, uint64_t k2, uint64_t n2, double* statistic,
                                     double* p_value);

/* Rendered reports. */
QREL_API qrel_status qrel_render_report(const qrel_probs* probs, qrel_format fmt, char** out);
/* Wigner tables for each query of probs (after fitting) or, when probs is
 * NULL, for the single value t_squared. */
QREL_API qrel_status qrel_render_wigner(const qrel_probs* probs, double t_squared, qrel_format fmt, char** out);
QREL_API qrel_status qrel_render_operators(const qrel_model* model, qrel_format fmt, char** out);
/* LTP table for one query (or every query when query_id is NULL). With a
 * model the interference term comes from it; otherwise each query is fitted. */
QREL_API qrel_status qrel_render_ltp(const qrel_probs* probs, const char* query_id, const qrel_model* model,
                                     qrel_format fmt, char** out);
QREL_API qrel_status qrel_sweep_theta_csv(const qrel_model* model, size_t steps, char** out);

/* Simulation. */
QREL_API qrel_status qrel_simulate(const qrel_model* model, const qrel_sim_options* options, qrel_dataset** out);
QREL_API qrel_status qrel_render_simulation(const qrel_dataset* data, const qrel_model* model, qrel_format fmt,
                                            char** out);
/* setup is 'a', 'b' or 'c'; the source beam is |S_x+>. counts must hold 3
 * entries; *stages receives the number used. */
QREL_API qrel_status qrel_spin_cascade(char setup, uint64_t shots, uint64_t seed, qrel_stage_counts counts[3],
                                       size_t* stages);
QREL_API qrel_status qrel_render_spin_demo(char setup, uint64_t shots, uint64_t seed, qrel_format fmt, char** out);

#ifdef __cplusplus
}
#endif

#endif /* QREL_QREL_H */
