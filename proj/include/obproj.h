/* obproj -- recursive oblique projectors for signal discrimination.
 *
 * C interface to the obproj shared library. All objects are opaque handles
 * created and destroyed through these functions; every fallible call returns
 * an obproj_status and reports results through out-parameters. The last
 * failure message of the calling thread is available from
 * obproj_last_error_message().
 *
 * Conventions:
 *   - signals are complex; value arrays are passed as separate real and
 *     imaginary parts (the imaginary pointer may be NULL for real data),
 *   - atom indices handed to downdate/replace are 1-based, matching the
 *     library's model-order language,
 *   - every *_create / *_clone / *_load function transfers ownership of the
 *     returned handle to the caller, to be released with the matching free
 *     function; obproj_*_free(NULL) is a no-op.
 */

#ifndef OBPROJ_H
#define OBPROJ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define OBPROJ_API __declspec(dllexport)
#else
#define OBPROJ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct obproj_space obproj_space;
typedef struct obproj_signal obproj_signal;
typedef struct obproj_state obproj_state;

typedef enum obproj_status {
  OBPROJ_OK = 0,
  OBPROJ_ERR_INVALID_ARG = 1,
  OBPROJ_ERR_SPACE_MISMATCH = 2,
  OBPROJ_ERR_INDEX = 3,
  OBPROJ_ERR_DIRECT_SUM = 4,    /* atom lies in the null subspace */
  OBPROJ_ERR_DEGENERATE = 5,    /* numerically singular correction */
  OBPROJ_ERR_PARSE = 6,
  OBPROJ_ERR_IO = 7,
  OBPROJ_ERR_INTERNAL = 8
} obproj_status;

OBPROJ_API const char* obproj_version(void);
OBPROJ_API const char* obproj_status_name(obproj_status status);

/* Message describing the most recent failure on this thread; never NULL. */
OBPROJ_API const char* obproj_last_error_message(void);

/* ---- spaces ---- */

OBPROJ_API obproj_status obproj_space_euclidean(int dim, obproj_space** out);

/* Uniform grid on [a, b] with composite trapezoid quadrature weights. */
OBPROJ_API obproj_status obproj_space_grid(double a, double b, int n_points,
                                           obproj_space** out);

OBPROJ_API int obproj_space_dim(const obproj_space* space);

/* Copies the grid nodes into `nodes` (length n_points); fails for
 * Euclidean spaces. */
OBPROJ_API obproj_status obproj_space_nodes(const obproj_space* space,
                                            double* nodes);

OBPROJ_API void obproj_space_free(obproj_space* space);

/* ---- signals ---- */

OBPROJ_API obproj_status obproj_signal_create(const obproj_space* space,
                                              const double* re,
                                              const double* im, size_t len,
                                              obproj_signal** out);

OBPROJ_API size_t obproj_signal_len(const obproj_signal* sig);

/* Copies values out; either destination may be NULL to skip it. */
OBPROJ_API obproj_status obproj_signal_values(const obproj_signal* sig,
                                              double* re, double* im);

OBPROJ_API obproj_status obproj_signal_load_json(const obproj_space* space,
                                                 const char* path,
                                                 obproj_signal** out);
OBPROJ_API obproj_status obproj_signal_save_json(const obproj_signal* sig,
                                                 const char* path);
OBPROJ_API void obproj_signal_free(obproj_signal* sig);

/* <f, g>: conjugate-linear in f, linear in g, quadrature-weighted on grids */
OBPROJ_API obproj_status obproj_inner_product(const obproj_signal* f,
                                              const obproj_signal* g,
                                              double* out_re, double* out_im);

/* ---- recursive projector state ---- */

typedef struct obproj_update_report {
  int independent;       /* nonzero if the atom opened a new direction */
  double residual_ratio; /* ||q|| / ||u||, the independence measure */
  double q_norm;
  double u_norm;
} obproj_update_report;

typedef struct obproj_downdate_report {
  int removed_independent; /* nonzero if the operator loses a direction */
  double s;                /* the case-detection inner product */
  int rank_before;
  int rank_after;
} obproj_downdate_report;

/* Starts a projector along span{wperp[0..n_wperp-1]} (may be empty, which
 * yields orthogonal projectors). dep_tol is the relative linear-dependence
 * tolerance used by all case detection. */
OBPROJ_API obproj_status obproj_state_init(const obproj_space* space,
                                           const obproj_signal* const* wperp,
                                           size_t n_wperp, double dep_tol,
                                           obproj_state** out);

/* Appends one atom. y_choice (may be NULL = zero signal) is only consulted
 * when the atom is linearly dependent on the current model. `report` may be
 * NULL. */
OBPROJ_API obproj_status obproj_state_update(obproj_state* state,
                                             const obproj_signal* atom,
                                             const obproj_signal* y_choice,
                                             obproj_update_report* report);

/* Removes atom j (1-based). */
OBPROJ_API obproj_status obproj_state_downdate(obproj_state* state, int j,
                                               obproj_downdate_report* report);

/* Removes atom j, then appends the replacement at the end. The state is
 * unchanged if either half fails. */
OBPROJ_API obproj_status obproj_state_replace(
    obproj_state* state, int j, const obproj_signal* atom,
    obproj_downdate_report* down_report, obproj_update_report* up_report);

/* The oblique projection of f onto the model span along the null space. */
OBPROJ_API obproj_status obproj_state_apply(const obproj_state* state,
                                            const obproj_signal* f,
                                            obproj_signal** out);

/* The orthogonal projection of f onto span of the atoms' W-components. */
OBPROJ_API obproj_status obproj_state_apply_pw(const obproj_state* state,
                                               const obproj_signal* f,
                                               obproj_signal** out);

OBPROJ_API int obproj_state_size(const obproj_state* state);
OBPROJ_API int obproj_state_rank(const obproj_state* state);

/* min ||q||/||u|| over the independent updates performed so far; 1.0 when no
 * update has happened. Small values flag an ill-conditioned split. */
OBPROJ_API double obproj_state_conditioning(const obproj_state* state);

OBPROJ_API obproj_status obproj_state_clone(const obproj_state* state,
                                            obproj_state** out);

OBPROJ_API obproj_status obproj_state_save_json(const obproj_state* state,
                                                const char* path);
OBPROJ_API obproj_status obproj_state_load_json(const char* path,
                                                obproj_state** out);

/* Borrowed reference to the state's space; valid while the state lives. */
OBPROJ_API const obproj_space* obproj_state_space(const obproj_state* state);

OBPROJ_API void obproj_state_free(obproj_state* state);

/* Max relative deviation, over `probes` seeded random signals, between the
 * recursive operator and the one-shot Gram pseudo-inverse construction on
 * the same atoms and null space (dense Frobenius distance in Euclidean
 * spaces). */
OBPROJ_API obproj_status obproj_state_oracle_distance(
    const obproj_state* state, int probes, uint64_t seed, double* out);

/* ---- experiment presets ---- */

typedef struct obproj_run_config {
  int grid_points;    /* >= 64; 0 selects the default 2048 */
  int k;              /* model order; 0 selects the experiment preset */
  int sweep_lo;       /* set both > 0 to enlarge to hi then downdate to lo */
  int sweep_hi;
  uint64_t seed;
  int pulse_count;    /* oscillators: number of noise sparks, 0..400 */
  double dep_tol;     /* 0 selects the default 1e-10 */
  const char* output_dir; /* NULL: compute only, write no files */
  int oracle_check;   /* nonzero: cross-check against the direct build */
  int incremental_qbasis; /* nonzero: one-pass residual-basis downdating */
} obproj_run_config;

OBPROJ_API void obproj_run_config_defaults(obproj_run_config* cfg);

/* Run a named experiment ("diffraction" or "oscillators") or a custom model
 * document. On success *report_json receives a JSON summary (errors per
 * visited order, conditioning, output paths) to be released with
 * obproj_string_free. report_json may be NULL. */
OBPROJ_API obproj_status obproj_run_demo(const char* experiment,
                                         const obproj_run_config* cfg,
                                         char** report_json);
OBPROJ_API obproj_status obproj_run_custom(const char* model_path,
                                           const obproj_run_config* cfg,
                                           char** report_json);

OBPROJ_API void obproj_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* OBPROJ_H */
