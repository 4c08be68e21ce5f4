/* C API for the stable-CARMA estimation library.
 *
 * Conventions:
 *   - every function returns a status code (SCARMA_OK on success);
 *   - scarma_last_error() describes the most recent failure on this thread;
 *   - strings returned through char** are heap allocated, release them with
 *     scarma_string_free();
 *   - a scarma_model is an opaque handle owning a validated family member.
 */
#ifndef SCARMA_H
#define SCARMA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined _WIN32
#define SCARMA_API __declspec(dllexport)
#else
#define SCARMA_API __attribute__((visibility("default")))
#endif

enum {
  SCARMA_OK = 0,
  SCARMA_EINVAL = 2,  /* invalid argument or configuration */
  SCARMA_ENUMERIC = 3 /* numerical failure */
};

typedef struct scarma_model scarma_model;

SCARMA_API const char* scarma_version(void);
SCARMA_API const char* scarma_last_error(void);
SCARMA_API void scarma_string_free(char* s);

/* --------------------------------------------------------------- models */

/* family: "ou" (dim 1), "carma20" (dim 1) or "carma21" (dim 3). */
SCARMA_API int scarma_model_create(const char* family, const double* theta,
                                   int dim, double delta, scarma_model** out);
SCARMA_API void scarma_model_free(scarma_model* model);

/* pass gets 0/1; report_json (optional) gets eigenvalues and per-check flags */
SCARMA_API int scarma_model_validate(const scarma_model* model, int* pass,
                                     char** report_json);

/* kernel g(t) at n time points */
SCARMA_API int scarma_model_kernel(const scarma_model* model, const double* t,
                                   int n, double* g_out);

/* ----------------------------------------------------------- simulation */

/* Simulates n equidistant observations of the model driven by a symmetric
 * alpha-stable Levy process; method 0 = Euler scheme, 1 = exact state
 * transition. y_out must hold n doubles. */
SCARMA_API int scarma_simulate(const scarma_model* model, double alpha,
                               double sigma, double step, double burn_in,
                               int method, int64_t n, uint64_t seed,
                               uint64_t stream_id, double* y_out);

/* ------------------------------------------------------------- spectral */

/* omega_out/i_out must hold 2n doubles: the Fourier frequencies pi j/n for
 * j = -n+1..n and the periodogram there. */
SCARMA_API int scarma_periodogram(const double* y, int64_t n,
                                  double* omega_out, double* i_out);

SCARMA_API int scarma_acvf(const double* y, int64_t n, int64_t lag,
                           double* gamma_out);

/* Sampled spectral density along omega[0..n_omega), both defining forms. */
SCARMA_API int scarma_spectrum(const scarma_model* model, double sigma_l2,
                               const double* omega, int n_omega,
                               double* f_integral, double* f_transfer);

/* ------------------------------------------------------------ estimators */

/* objective: 0 adjusted, 1 alpha-scaled, 2 classical.
 * result_json: {"theta":[...],"objective":..,"n":..,"converged":..,
 *               "starts_used":..,"failure":".."} */
SCARMA_API int scarma_whittle_fit(const char* family, double delta,
                                  int objective, double alpha, double sigma_l2,
                                  const double* y, int64_t n,
                                  char** result_json);

/* result_json: {"theta":[...],"lambda":[[re,im],..],"failed":..,
 *               "failure_stage":"none|arma_mle|log_root|ma_match"} */
SCARMA_API int scarma_garcia_fit(const char* family, double delta,
                                 const double* y, int64_t n,
                                 char** result_json);

/* ------------------------------------------------------ limit diagnostics */

SCARMA_API int scarma_beta_diag(const char* family, double delta,
                                const double* theta, const double* theta0,
                                int dim, double alpha, double* beta,
                                double* beta_plus, double* beta_minus,
                                double* sigma_scale);

/* CSV with header theta,beta,beta_plus,beta_minus */
SCARMA_API int scarma_beta_grid(const char* family, double delta,
                                const double* theta0, int dim, double alpha,
                                int coord, double lo, double hi, int points,
                                char** csv_out);

/* Draws of the limiting Whittle functional on a parameter grid
 * (grid = grid_len vectors of length dim, row major). CSV: one column per
 * grid point, one row per replication. */
SCARMA_API int scarma_limit_sim(const char* family, double delta,
                                const double* theta0, int dim,
                                const double* grid, int grid_len, double alpha,
                                double sigma, int reps, uint64_t seed,
                                char** csv_out);

SCARMA_API int scarma_acvf_limit(const char* family, double delta,
                                 const double* theta0, int dim, double alpha,
                                 double sigma, int lag, double* scale,
                                 double* skew);

/* ------------------------------------------------------------ experiments */

/* config_json holds an experiment configuration (see README). On success
 * report_json gets the full per-replication report and summary_csv the
 * summary table. */
SCARMA_API int scarma_experiment_run(const char* config_json,
                                     char** report_json, char** summary_csv);

#ifdef __cplusplus
}
#endif

#endif /* SCARMA_H */
