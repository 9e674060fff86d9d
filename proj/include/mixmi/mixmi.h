/*
 * C interface to libmixmi: bounds and estimators of the mutual information
 * between Gaussian-mixture data and its class labels.
 *
 * All quantities are in nats unless stated otherwise. Functions return a
 * mixmi_status; on failure mixmi_last_error() describes the problem (the
 * message is thread-local and valid until the next failing call on the same
 * thread). Handles are opaque and immutable once created, so they may be
 * shared between threads.
 */
#ifndef MIXMI_H
#define MIXMI_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MIXMI_BUILDING_LIBRARY)
#    define MIXMI_API __declspec(dllexport)
#  else
#    define MIXMI_API __declspec(dllimport)
#  endif
#else
#  define MIXMI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mixmi_status {
  MIXMI_OK = 0,
  MIXMI_ERR_INVALID_ARGUMENT = 1,
  MIXMI_ERR_VALIDATION = 2,
  MIXMI_ERR_PARSE = 3,
  MIXMI_ERR_IO = 4,
  MIXMI_ERR_UNSUPPORTED = 5,
  MIXMI_ERR_NUMERICAL = 6,
  MIXMI_ERR_INTERNAL = 7
} mixmi_status;

typedef struct mixmi_mixture mixmi_mixture;

MIXMI_API const char* mixmi_version(void);
MIXMI_API const char* mixmi_last_error(void);
MIXMI_API const char* mixmi_status_string(mixmi_status status);

/* ---- mixtures -------------------------------------------------------- */

/* JSON schema: {"num_classes": K, "components": [{"weight": w, "label": c,
 * "mean": [...], "cov": [[...], ...]}, ...]} with labels in [1, K]. */
MIXMI_API mixmi_status mixmi_mixture_from_json(const char* json_text, mixmi_mixture** out);
MIXMI_API mixmi_status mixmi_mixture_from_file(const char* path, mixmi_mixture** out);
/* Serializes to JSON; release the string with mixmi_string_free. */
MIXMI_API mixmi_status mixmi_mixture_to_json(const mixmi_mixture* mixture, char** out_json);
MIXMI_API void mixmi_mixture_free(mixmi_mixture* mixture);
MIXMI_API void mixmi_string_free(char* text);

MIXMI_API size_t mixmi_mixture_num_components(const mixmi_mixture* mixture);
MIXMI_API size_t mixmi_mixture_dimension(const mixmi_mixture* mixture);
MIXMI_API size_t mixmi_mixture_num_classes(const mixmi_mixture* mixture);
/* Writes P_c for c = 1..K into out[0..K-1]; len must be >= K. */
MIXMI_API mixmi_status mixmi_mixture_class_probs(const mixmi_mixture* mixture, double* out, size_t len);
/* ln pr(x), or ln pr(x, label) when label >= 1. x holds dimension values. */
MIXMI_API mixmi_status mixmi_mixture_log_density(const mixmi_mixture* mixture, const double* x, size_t len,
                                                 int label, double* out);

/* ---- scenarios ------------------------------------------------------- */

typedef enum mixmi_scenario_id {
  MIXMI_SCENARIO_UNIFORM_BOUNDARY = 1,
  MIXMI_SCENARIO_ONE_GROUP = 2,
  MIXMI_SCENARIO_MULTI_GROUP = 3
} mixmi_scenario_id;

typedef struct mixmi_scenario_spec {
  mixmi_scenario_id scenario;
  int components_per_class;
  double sigma;
  uint64_t seed;
  double boundary_length;
  double offset;
  int group_count;
  double one_group_spread;
  double group_spread;
} mixmi_scenario_spec;

MIXMI_API void mixmi_scenario_spec_default(mixmi_scenario_spec* spec);
/* Starts from the defaults and applies the keys present in the JSON object. */
MIXMI_API mixmi_status mixmi_scenario_spec_from_json(const char* json_text, mixmi_scenario_spec* spec);
MIXMI_API mixmi_status mixmi_scenario_generate(const mixmi_scenario_spec* spec, mixmi_mixture** out);
/* n log-spaced values on [lo, hi] written to out[0..n-1]. */
MIXMI_API mixmi_status mixmi_log_spaced(double lo, double hi, size_t n, double* out);

/* ---- reports --------------------------------------------------------- */

typedef enum mixmi_ub_mode { MIXMI_UB_AUTO = 0, MIXMI_UB_FULL = 1, MIXMI_UB_MATCHED = 2 } mixmi_ub_mode;
typedef enum mixmi_oracle { MIXMI_ORACLE_NONE = 0, MIXMI_ORACLE_MC = 1, MIXMI_ORACLE_QUADRATURE = 2 } mixmi_oracle;

typedef struct mixmi_options {
  double alpha;          /* Chernoff alpha, default 0.5 */
  int auto_lower_alpha;  /* nonzero: search alpha_c per class for the lower bound */
  mixmi_ub_mode ub_mode;
  double tol;            /* relative decrease stopping rule, default 1e-9 */
  int max_iter;          /* default 500 */
  mixmi_oracle oracle;
  uint64_t samples;      /* Monte Carlo draws, default 1e5 */
  uint64_t seed;
  int grid_points;       /* quadrature points per axis, default 401 */
} mixmi_options;

MIXMI_API void mixmi_options_default(mixmi_options* options);

typedef struct mixmi_report {
  double h_c;
  double i_lb_calpha;
  double i_ub_kl;
  double i_hat_kl;
  double i_hat_calpha;
  double i_hat_d;
  double i_lb_2h;
  double i_ub_2h;

  mixmi_ub_mode ub_mode_used; /* FULL or MATCHED */
  int ub_iterations;
  int ub_converged;

  int has_oracle;
  double oracle_value;
  double oracle_std_error;
  uint64_t oracle_samples; /* draws, or grid points for quadrature */

  int has_bayes_error;
  double bayes_error;

  /* Binary problems only: Fano at i_ub_kl and Hu at i_lb_calpha. */
  int has_pe;
  double pe_fano;
  double pe_hu;

  double time_divergences_ms;
  double time_estimators_ms;
  double time_lower_bound_ms;
  double time_upper_bound_ms;
  double time_oracle_ms;
} mixmi_report;

MIXMI_API mixmi_status mixmi_compute_report(const mixmi_mixture* mixture, const mixmi_options* options,
                                            mixmi_report* out);
/* Per-class alphas chosen for the lower bound; len must be >= num_classes. */
MIXMI_API mixmi_status mixmi_lower_bound_alphas(const mixmi_mixture* mixture, const mixmi_options* options,
                                                double* out, size_t len);
/* One report per sigma written to rows[0..count-1]; spec->sigma is ignored. */
MIXMI_API mixmi_status mixmi_sigma_sweep(const mixmi_scenario_spec* spec, const double* sigmas, size_t count,
                                         const mixmi_options* options, mixmi_report* rows);

/* ---- error-probability bounds (binary) ------------------------------ */

MIXMI_API mixmi_status mixmi_binary_entropy(double x, double* out_bits);
MIXMI_API mixmi_status mixmi_inverse_binary_entropy(double h_bits, double* out);
MIXMI_API mixmi_status mixmi_pe_fano_lower(double mi_nats, const double* class_probs, size_t num_classes,
                                           double* out);
MIXMI_API mixmi_status mixmi_pe_hu_upper(double mi_nats, const double* class_probs, size_t num_classes,
                                         double* out);

/* ---- debugging dumps -------------------------------------------------- */

/* Writes <prefix>kl.csv, <prefix>chernoff.csv and <prefix>combined.csv. */
MIXMI_API mixmi_status mixmi_write_divergence_csv(const mixmi_mixture* mixture, double alpha, const char* prefix);
/* Writes the optimized phi (batch,class,component,phi) and the objective trace
 * (iteration,objective) of the variational upper bound. */
MIXMI_API mixmi_status mixmi_write_upper_bound_csv(const mixmi_mixture* mixture, const mixmi_options* options,
                                                   const char* phi_path, const char* trace_path);

#ifdef __cplusplus
}
#endif

#endif /* MIXMI_H */
