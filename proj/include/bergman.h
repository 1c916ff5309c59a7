/* bergman.h -- C interface to the collar/cusp Bergman-model library.
 *
 * Numerical values cross this boundary as bgm_xreal, a signed log-domain
 * scalar (sign in {-1, 0, +1}, natural log of the magnitude), so quantities
 * like e^{pi/epsilon} survive the trip.  All functions return BGM_OK on
 * success; on failure they return an error code and leave outputs untouched,
 * with a human-readable message available from bgm_last_error() (thread
 * local).  Opaque handles are immutable after creation and may be shared
 * across threads freely.
 */

#ifndef BERGMAN_H
#define BERGMAN_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bgm_status {
  BGM_OK = 0,
  BGM_ERR_ARGUMENT = 1,
  BGM_ERR_DOMAIN = 2,
  BGM_ERR_DIVIDE_BY_ZERO = 3,
  BGM_ERR_NO_CONVERGENCE = 4,
  BGM_ERR_NOT_BRACKETED = 5,
  BGM_ERR_NOT_CONCAVE = 6,
  BGM_ERR_NO_DECAYING_TAIL = 7,
  BGM_ERR_TAIL_NOT_CERTIFIED = 8,
  BGM_ERR_EMPTY_REGION = 9,
  BGM_ERR_INTERNAL = 10
} bgm_status;

typedef struct bgm_xreal {
  int sign;      /* -1, 0, +1; 0 means exact zero */
  double logmag; /* natural log of |value|; ignored when sign == 0 */
} bgm_xreal;

const char* bgm_status_name(bgm_status s);
const char* bgm_last_error(void);

/* ---- extended-range scalar arithmetic ---------------------------------- */

bgm_xreal bgm_xr_from_double(double x);
double bgm_xr_to_double(bgm_xreal x); /* saturates outside double range */
bgm_xreal bgm_xr_add(bgm_xreal x, bgm_xreal y);
bgm_xreal bgm_xr_sub(bgm_xreal x, bgm_xreal y);
bgm_xreal bgm_xr_mul(bgm_xreal x, bgm_xreal y);
bgm_status bgm_xr_div(bgm_xreal x, bgm_xreal y, bgm_xreal* out);
bgm_status bgm_xr_pow_int(bgm_xreal x, long n, bgm_xreal* out);
/* "+exp(L)" form, or a plain decimal when |logmag| < 700.  Returns the
 * number of characters written (excluding NUL), or -1 if cap is too small. */
int bgm_xr_format(bgm_xreal x, char* buf, size_t cap);

bgm_status bgm_log_factorial(long n, double* out);

/* ---- punctured-disk model ----------------------------------------------- */

typedef struct bgm_laplace_result {
  double t_star;
  double g_star;
  double g2_star;
  double window_halfwidth;
  bgm_xreal estimate;
  bgm_xreal left_tail;
  bgm_xreal right_tail;
} bgm_laplace_result;

bgm_status bgm_punctured_norm_exact(int k, int a, bgm_xreal* out);
bgm_status bgm_punctured_norm_quad(int k, int a, double rel_tol, bgm_xreal* out);
bgm_status bgm_punctured_norm_laplace(int k, int a, bgm_laplace_result* out);
bgm_status bgm_punctured_default_cutoff(int k, double tau, int* out);
bgm_status bgm_punctured_density(int k, double tau, int cutoff_a, bgm_xreal* out);
/* Writes up to cap (index, weight) pairs; *n_out gets the full count. */
bgm_status bgm_punctured_term_weights(int k, double tau, int cutoff_a, int* a_out,
                                      double* w_out, int cap, int* n_out);
/* Mass fraction of the norm integrand outside |tau - k/a| <= halfwidth. */
bgm_status bgm_punctured_mass_outside(int k, int a, double halfwidth, double rel_tol,
                                      double* out);

/* ---- collar model ------------------------------------------------------- */

/* Stateless coordinate maps. */
bgm_status bgm_collar_t_of_u(double epsilon, double u, double* out);
bgm_status bgm_collar_u_of_t(double epsilon, double t, double* out);
bgm_status bgm_collar_tau_of_u(double epsilon, double u, double* out);
bgm_status bgm_collar_u_of_tau(double epsilon, double tau, double* out);
bgm_status bgm_collar_log_f(double epsilon, double t, double* out);
bgm_status bgm_collar_cusp_comparison(double epsilon, double u, double* tau_out,
                                      double* distortion_out);

/* Opaque handle caching the section norms I_a, |a| <= cutoff, for one
 * (epsilon, k).  cutoff_a <= 0 selects the default max(4k, 8). */
typedef struct bgm_collar bgm_collar;

bgm_status bgm_collar_create(double epsilon, int k, int cutoff_a, double rel_tol,
                             bgm_collar** out);
void bgm_collar_destroy(bgm_collar* c);
double bgm_collar_epsilon(const bgm_collar* c);
int bgm_collar_k(const bgm_collar* c);
int bgm_collar_cutoff(const bgm_collar* c);
double bgm_collar_half_period(const bgm_collar* c);

bgm_status bgm_collar_norm(const bgm_collar* c, int a, bgm_xreal* out);
bgm_status bgm_collar_norm_laplace(const bgm_collar* c, int a, bgm_laplace_result* out);
bgm_status bgm_collar_maximizer_t(const bgm_collar* c, int a, double* out);
bgm_status bgm_collar_density(const bgm_collar* c, double t, bgm_xreal* out);
bgm_status bgm_collar_mass_outside(const bgm_collar* c, int a, double halfwidth,
                                   double rel_tol, double* out);

typedef struct bgm_cut_tail_report {
  double u_lo, u_hi;
  bgm_xreal density_sup;
  bgm_xreal bound;
  int pass;
} bgm_cut_tail_report;

bgm_status bgm_collar_cut_tail(const bgm_collar* c, bgm_cut_tail_report* out);

/* ---- projective embedding ---------------------------------------------- */

bgm_status bgm_collar_weights_at(const bgm_collar* c, double t, int* a_out,
                                 bgm_xreal* w_out, int cap, int* n_out);
bgm_status bgm_collar_circle_length(const bgm_collar* c, double t, bgm_xreal* out);
bgm_status bgm_collar_reduced_map(const bgm_collar* c, bgm_xreal* c_numeric,
                                  bgm_xreal* c_paper);

typedef struct bgm_profile_row {
  double t;
  int top_a[3];
  double top_w[3];
  bgm_xreal circle_length;
  bgm_xreal reduced_coordinate;
  double line_distance;
} bgm_profile_row;

double bgm_collar_bubble_t0(const bgm_collar* c);
/* rows must hold n_samples entries. */
bgm_status bgm_collar_bubble_profile(const bgm_collar* c, int n_samples,
                                     bgm_profile_row* rows);

/* ---- built-in verification suite ---------------------------------------- */

typedef struct bgm_audit bgm_audit;

int bgm_audit_criteria_count(void);
const char* bgm_audit_criterion_name(int index); /* 1-based; NULL if bad */
bgm_status bgm_audit_run(int index, double rel_tol, bgm_audit** out);
void bgm_audit_destroy(bgm_audit* a);
int bgm_audit_pass(const bgm_audit* a);
int bgm_audit_row_count(const bgm_audit* a);
const char* bgm_audit_row_id(const bgm_audit* a, int row);
int bgm_audit_row_pass(const bgm_audit* a, int row);
const char* bgm_audit_row_note(const bgm_audit* a, int row);
int bgm_audit_row_value_count(const bgm_audit* a, int row);
const char* bgm_audit_row_value_key(const bgm_audit* a, int row, int value);
bgm_xreal bgm_audit_row_value(const bgm_audit* a, int row, int value);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BERGMAN_H */
