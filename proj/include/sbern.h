/* C interface to the simplex Bernstein estimation library.
 *
 * Conventions:
 *   - every fallible call returns a sbern_status; on failure the thread-local
 *     message from sbern_last_error() describes the problem;
 *   - strings returned through char** out-parameters are heap-allocated and
 *     must be released with sbern_free_string();
 *   - objects returned through handle out-parameters must be released with
 *     their matching *_free() function; all handles are opaque.
 */
#ifndef SBERN_H
#define SBERN_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  SBERN_OK = 0,
  SBERN_EINVAL = 1,      /* precondition violation */
  SBERN_EIO = 2,         /* file or parse problem */
  SBERN_EDEGENERATE = 3, /* degenerate analytic outcome (no result fabricated) */
  SBERN_EVERIFY = 4,     /* verification sweep failure */
  SBERN_EINTERNAL = 5
} sbern_status;

/* Most recent failure message on the calling thread; never NULL. */
const char* sbern_last_error(void);

void sbern_free_string(char* s);

typedef struct sbern_dataset sbern_dataset;
typedef struct sbern_mixture sbern_mixture;
typedef struct sbern_cdf_model sbern_cdf_model;
typedef struct sbern_density_model sbern_density_model;

/* ---- datasets (rows on the closed unit simplex) ---- */
sbern_status sbern_dataset_from_csv(const char* text, sbern_dataset** out);
sbern_status sbern_dataset_from_file(const char* path, sbern_dataset** out);
sbern_status sbern_dataset_create(const double* flat, long n, int d, sbern_dataset** out);
int sbern_dataset_dim(const sbern_dataset* data);
long sbern_dataset_size(const sbern_dataset* data);
void sbern_dataset_free(sbern_dataset* data);

/* ---- Dirichlet mixture targets ---- */
sbern_status sbern_mixture_from_json(const char* text, sbern_mixture** out);
sbern_status sbern_mixture_to_json(const sbern_mixture* mix, char** out);
sbern_status sbern_mixture_uniform(int d, sbern_mixture** out);
int sbern_mixture_dim(const sbern_mixture* mix);
sbern_status sbern_mixture_pdf(const sbern_mixture* mix, const double* x, int d, double* out);
sbern_status sbern_mixture_cdf(const sbern_mixture* mix, const double* x, int d, double* out);
sbern_status sbern_mixture_sample(const sbern_mixture* mix, long n, uint64_t seed,
                                  sbern_dataset** out);
void sbern_mixture_free(sbern_mixture* mix);

/* ---- estimator fitting ---- */
sbern_status sbern_fit_cdf(const sbern_dataset* data, int m, sbern_cdf_model** out);
sbern_status sbern_fit_density(const sbern_dataset* data, int m, sbern_density_model** out);
int sbern_cdf_model_dim(const sbern_cdf_model* model);
int sbern_cdf_model_order(const sbern_cdf_model* model);
long sbern_cdf_model_size(const sbern_cdf_model* model);
int sbern_density_model_dim(const sbern_density_model* model);
int sbern_density_model_order(const sbern_density_model* model);
long sbern_density_model_size(const sbern_density_model* model);
void sbern_cdf_model_free(sbern_cdf_model* model);
void sbern_density_model_free(sbern_density_model* model);

/* ---- evaluation ---- */
sbern_status sbern_cdf_eval(const sbern_cdf_model* model, const double* x, int d, double* out);
sbern_status sbern_density_eval(const sbern_density_model* model, const double* x, int d,
                                double* out);
/* CSV table (x_1,..,x_d,value) over the interior midpoint grid at the given
 * resolution. */
sbern_status sbern_cdf_eval_grid_csv(const sbern_cdf_model* model, int resolution, int workers,
                                     char** out_csv);
sbern_status sbern_density_eval_grid_csv(const sbern_density_model* model, int resolution,
                                         int workers, char** out_csv);

/* ---- model (de)serialization ---- */
sbern_status sbern_cdf_model_to_json(const sbern_cdf_model* model, char** out);
sbern_status sbern_cdf_model_from_json(const char* text, sbern_cdf_model** out);
sbern_status sbern_density_model_to_json(const sbern_density_model* model, char** out);
sbern_status sbern_density_model_from_json(const char* text, sbern_density_model** out);
/* 0 = cdf dump, 1 = density dump */
sbern_status sbern_model_file_kind(const char* text, int* out_kind);

/* ---- bandwidth selection ---- */
/* method is "lscv" or "lcv"; grid may be NULL/0-length for the default grid;
 * result is the SelectionResult JSON {method, grid, scores, chosen_m}. */
sbern_status sbern_select_bandwidth(const sbern_dataset* data, const char* method,
                                    const long* grid, int grid_len, int workers, char** out_json);
/* Geometric candidate grid; m_min/m_max <= 0 pick data-driven defaults.
 * Writes at most capacity entries, returns the total count in out_len. */
sbern_status sbern_bandwidth_grid(long n, int d, long m_min, long m_max, int count, long* out,
                                  int capacity, int* out_len);

/* ---- verification sweep ---- */
/* JSON report of every lemma/identity check; all_pass set to 0/1. */
sbern_status sbern_verify_run(uint64_t seed, int workers, char** out_json, int* all_pass);

/* ---- Monte Carlo studies ---- */
/* config is the StudyConfig JSON; either output pointer may be NULL. */
sbern_status sbern_study_run(const char* config_json, int workers, char** out_json,
                             char** out_csv);

const char* sbern_version(void);

#ifdef __cplusplus
}
#endif

#endif /* SBERN_H */
