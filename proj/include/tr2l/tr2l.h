/*
 * C interface to the tr2l library: time-rescaled shortcuts to adiabaticity
 * for a driven two-level system.
 *
 * Every fallible call returns a tr2l_status. On failure the output arguments
 * are left untouched and tr2l_last_error() returns a message describing the
 * failure (per thread, valid until the next failing call on that thread).
 *
 * Objects with variable size are opaque handles created by a *_create or
 * *_run call and released with the matching *_destroy call. Destroying NULL
 * is a no-op. All other data crosses the boundary as plain structs.
 *
 * Units: hbar = 1; times in units of t0, frequencies in units of 1/t0.
 * Matrices are 2x2, row-major, split into real and imaginary parts.
 */
#ifndef TR2L_TR2L_H
#define TR2L_TR2L_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(TR2L_BUILDING_LIBRARY)
#    define TR2L_API __declspec(dllexport)
#  else
#    define TR2L_API __declspec(dllimport)
#  endif
#else
#  define TR2L_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tr2l_status {
  TR2L_OK = 0,
  TR2L_ERR_INVALID_ARGUMENT = 1,
  TR2L_ERR_DOMAIN = 2,
  TR2L_ERR_CONVERGENCE = 3,
  TR2L_ERR_DEGENERATE = 4,
  TR2L_ERR_NON_UNITARY = 5,
  TR2L_ERR_INTERNAL = 6
} tr2l_status;

TR2L_API const char *tr2l_version(void);
TR2L_API const char *tr2l_status_string(tr2l_status status);
TR2L_API const char *tr2l_last_error(void);

/* ---- plain data ------------------------------------------------------- */

typedef struct tr2l_ae_params {
  double omega0;     /* peak Rabi frequency */
  double beta_chirp; /* chirp constant; detuning amplitude 2 beta^2 t0 / pi */
  double t0;         /* timescale; the reference window is [0, 8 t0] */
} tr2l_ae_params;

/* Omega0 = 2, beta = sqrt(2), t0 = 1. */
TR2L_API void tr2l_ae_params_default(tr2l_ae_params *out);

typedef struct tr2l_grid_policy {
  size_t reference_steps; /* steps over [0, t_f] */
  size_t rescaled_steps;  /* steps over [0, t_f / a] for a != 1 */
} tr2l_grid_policy;

/* 20000 steps for both windows. */
TR2L_API void tr2l_grid_policy_default(tr2l_grid_policy *out);

typedef struct tr2l_matrix2 {
  double re[4];
  double im[4];
} tr2l_matrix2;

typedef struct tr2l_propagator {
  tr2l_matrix2 u;
  double t_start;
  double t_end;
  size_t steps;
} tr2l_propagator;

typedef struct tr2l_state {
  double c1_re, c1_im;
  double c2_re, c2_im;
} tr2l_state;

typedef struct tr2l_drive_sample {
  double rabi;
  double detuning;
  double phase;
} tr2l_drive_sample;

/* ---- time-rescaling map f(tau) ------------------------------------------ */

TR2L_API tr2l_status tr2l_rescale_eval(double a, double t_f, double tau, double *out);
TR2L_API tr2l_status tr2l_rescale_derivative(double a, double t_f, double tau, double *out);
TR2L_API tr2l_status tr2l_rescale_inverse(double a, double t_f, double t, double *out);

typedef enum tr2l_speed {
  TR2L_SPEED_FASTER = 0,
  TR2L_SPEED_SAME = 1,
  TR2L_SPEED_SLOWER = 2
} tr2l_speed;

typedef struct tr2l_rescale_report {
  double a;
  double t_f;
  double initial_time_residual; /* |f^-1(0)| */
  double final_time;            /* f^-1(t_f) */
  double initial_rate_residual; /* |f'(f^-1(0)) - 1| */
  double final_rate_residual;   /* |f'(f^-1(t_f)) - 1| */
  double min_rate;
  double max_rate;
  int same_start;
  int same_initial_hamiltonian;
  int same_final_hamiltonian;
  int rate_bound;
  tr2l_speed speed;
  int passed;
  int is_shortcut;
} tr2l_rescale_report;

TR2L_API tr2l_status tr2l_rescale_validate(double a, double t_f, double tol,
                                           tr2l_rescale_report *out);

/* ---- drives -------------------------------------------------------------- */

typedef struct tr2l_drive tr2l_drive;

/* Allen-Eberly pulse on [0, 8 t0]. */
TR2L_API tr2l_status tr2l_drive_create_reference(const tr2l_ae_params *params,
                                                 tr2l_drive **out);
/* Rescaled pulse on [0, 8 t0 / a] built from Omega0 (1 + eps) and
 * beta^2 (1 + delta). a = 1 with zero errors is the reference pulse. */
TR2L_API tr2l_status tr2l_drive_create_rescaled(const tr2l_ae_params *params,
                                                double a, double eps,
                                                double delta, tr2l_drive **out);
TR2L_API tr2l_status tr2l_drive_create_constant(const tr2l_drive_sample *sample,
                                                double t_start, double t_end,
                                                tr2l_drive **out);
TR2L_API void tr2l_drive_destroy(tr2l_drive *drive);

TR2L_API tr2l_status tr2l_drive_window(const tr2l_drive *drive, double *t_start,
                                       double *t_end);
TR2L_API tr2l_status tr2l_drive_sample_at(const tr2l_drive *drive, double t,
                                          tr2l_drive_sample *out);
TR2L_API tr2l_status tr2l_adiabaticity_metric(const tr2l_drive *drive, double t,
                                              double *out);

TR2L_API tr2l_status tr2l_hamiltonian(const tr2l_drive_sample *sample,
                                      tr2l_matrix2 *out);

typedef struct tr2l_eigensystem {
  double theta;
  double omega_gen;
  double e_plus;
  double e_minus;
  tr2l_state n_plus;
  tr2l_state n_minus;
} tr2l_eigensystem;

TR2L_API tr2l_status tr2l_eigensystem_of(const tr2l_drive_sample *sample,
                                         tr2l_eigensystem *out);
TR2L_API tr2l_status tr2l_adiabatic_populations(const tr2l_ae_params *params,
                                                double t, double *p1, double *p2);

/* ---- propagation ----------------------------------------------------------- */

TR2L_API tr2l_status tr2l_step_propagator(const tr2l_drive_sample *sample,
                                          double dt, tr2l_propagator *out);
/* Midpoint product over the drive's whole window. */
TR2L_API tr2l_status tr2l_evolve(const tr2l_drive *drive, size_t steps,
                                 tr2l_propagator *out);
/* Phase-insensitive Frobenius distance; `phase` (may be NULL) receives the
 * minimizing global phase. */
TR2L_API tr2l_status tr2l_propagator_distance(const tr2l_matrix2 *u1,
                                              const tr2l_matrix2 *u2,
                                              double *distance, double *phase);

typedef struct tr2l_trajectory tr2l_trajectory;

typedef struct tr2l_trajectory_point {
  double time;
  double p1;
  double p2;
  double rabi;
  double detuning;
  tr2l_state state;
} tr2l_trajectory_point;

/* psi0 == NULL starts from |1>. steps == 0 is allowed only for a drive with a
 * zero-length window and yields the single point psi0. */
TR2L_API tr2l_status tr2l_trajectory_create(const tr2l_drive *drive, size_t steps,
                                            const tr2l_state *psi0,
                                            tr2l_trajectory **out);
TR2L_API void tr2l_trajectory_destroy(tr2l_trajectory *trajectory);
TR2L_API size_t tr2l_trajectory_size(const tr2l_trajectory *trajectory);
TR2L_API tr2l_status tr2l_trajectory_point_at(const tr2l_trajectory *trajectory,
                                              size_t index,
                                              tr2l_trajectory_point *out);

/* ---- protocol validation --------------------------------------------------- */

typedef struct tr2l_protocol_check {
  double a;
  tr2l_rescale_report map;
  double composition_rabi;
  double composition_detuning;
  double boundary_rabi;
  double boundary_detuning;
  int peak_checked;
  double peak_rabi;
  double peak_expected;
  double peak_time;
  size_t reference_steps;
  size_t rescaled_steps;
  double propagator_distance;
  double phase_difference;
  double reference_p2;
  double rescaled_p2;
  int map_ok;
  int composition_ok;
  int boundary_ok;
  int peak_ok;
  int equality_ok;
  int passed;
} tr2l_protocol_check;

/* policy == NULL uses the default grid policy. */
TR2L_API tr2l_status tr2l_check_protocol(const tr2l_ae_params *params, double a,
                                         const tr2l_grid_policy *policy,
                                         tr2l_protocol_check *out);

/* ---- robustness ------------------------------------------------------------ */

typedef enum tr2l_error_kind {
  TR2L_ERROR_RABI = 0,
  TR2L_ERROR_DETUNING = 1
} tr2l_error_kind;

TR2L_API tr2l_status tr2l_fidelity(const tr2l_ae_params *params, double a,
                                   double eps, double delta,
                                   const tr2l_grid_policy *policy, double *out);
TR2L_API double tr2l_pi_pulse_fidelity(double eps);

typedef struct tr2l_sweep tr2l_sweep;

typedef struct tr2l_sweep_row {
  double a;
  double error;
  double fidelity; /* NaN when the point failed */
  int ok;
} tr2l_sweep_row;

/* Rows are ordered by a (outer) then error value (inner). Per-point failures
 * do not fail the call; they are listed by tr2l_sweep_failure_at. */
TR2L_API tr2l_status tr2l_sweep_run(const tr2l_ae_params *params,
                                    tr2l_error_kind kind, const double *values,
                                    size_t n_values, const double *a_values,
                                    size_t n_a, const tr2l_grid_policy *policy,
                                    tr2l_sweep **out);
TR2L_API void tr2l_sweep_destroy(tr2l_sweep *sweep);
TR2L_API size_t tr2l_sweep_size(const tr2l_sweep *sweep);
TR2L_API tr2l_status tr2l_sweep_row_at(const tr2l_sweep *sweep, size_t index,
                                       tr2l_sweep_row *out);
TR2L_API size_t tr2l_sweep_failure_count(const tr2l_sweep *sweep);
/* `message` stays valid until the sweep is destroyed. */
TR2L_API tr2l_status tr2l_sweep_failure_at(const tr2l_sweep *sweep, size_t i,
                                           size_t *row_index,
                                           const char **message);

/* ---- work statistics ------------------------------------------------------- */

typedef struct tr2l_work_atom {
  int initial; /* 0 = upper (+), 1 = lower (-) level of H_i */
  int final;   /* same labels for H_f */
  double work;
  double probability;
} tr2l_work_atom;

typedef struct tr2l_work_moments {
  double mean;
  double second;
  double variance;
  double fluctuation;
} tr2l_work_moments;

/* probabilities[0] and energies[0] refer to the upper level. */
TR2L_API tr2l_status tr2l_gibbs_probabilities(const tr2l_matrix2 *h_i,
                                              double beta_thermal,
                                              double probabilities[2],
                                              double energies[2]);
/* out[2 n + m] = |<m|U|n>|^2. */
TR2L_API tr2l_status tr2l_transition_matrix(const tr2l_matrix2 *u,
                                            const tr2l_matrix2 *h_i,
                                            const tr2l_matrix2 *h_f,
                                            double out[4]);
TR2L_API tr2l_status tr2l_work_distribution(const tr2l_matrix2 *u,
                                            const tr2l_matrix2 *h_i,
                                            const tr2l_matrix2 *h_f,
                                            double beta_thermal,
                                            tr2l_work_atom out[4]);
TR2L_API tr2l_status tr2l_work_moments_of(const tr2l_matrix2 *u,
                                          const tr2l_matrix2 *h_i,
                                          const tr2l_matrix2 *h_f,
                                          double beta_thermal,
                                          tr2l_work_moments *out);
TR2L_API tr2l_status tr2l_work_characteristic(double r, const tr2l_matrix2 *u,
                                              const tr2l_matrix2 *h_i,
                                              const tr2l_matrix2 *h_f,
                                              double beta_thermal, double *re,
                                              double *im);
/* Work atoms of the (rescaled, for a != 1) Allen-Eberly protocol. */
TR2L_API tr2l_status tr2l_protocol_work_atoms(const tr2l_ae_params *params,
                                              double a, double beta_thermal,
                                              const tr2l_grid_policy *policy,
                                              tr2l_work_atom out[4]);

typedef struct tr2l_work_report tr2l_work_report;

typedef struct tr2l_work_row {
  double a;
  double beta_thermal;
  double mean_ref;
  double mean_tr;
  double fluct_ref;
  double fluct_tr;
  double mean_gap;
  double fluct_gap;
  double propagator_distance;
  int within_tolerance;
} tr2l_work_row;

/* Rows ordered by a (outer) then beta (inner). Requires a >= 1, beta >= 0. */
TR2L_API tr2l_status tr2l_work_compare(const tr2l_ae_params *params,
                                       const double *a_values, size_t n_a,
                                       const double *betas, size_t n_beta,
                                       const tr2l_grid_policy *policy,
                                       tr2l_work_report **out);
TR2L_API void tr2l_work_report_destroy(tr2l_work_report *report);
TR2L_API size_t tr2l_work_report_size(const tr2l_work_report *report);
TR2L_API tr2l_status tr2l_work_report_row_at(const tr2l_work_report *report,
                                             size_t index, tr2l_work_row *out);
TR2L_API double tr2l_work_equality_tolerance(void);

#ifdef __cplusplus
}
#endif

#endif /* TR2L_TR2L_H */
