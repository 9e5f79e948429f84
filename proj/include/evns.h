/* evns: eddy-viscosity Navier-Stokes toolkit.
 *
 * C interface to the solver library: closed-form Oseen kernel evaluation,
 * nonlinear Volterra bracketing, and the regularized spectral solver with
 * its verification suites. Handles are opaque; every fallible call returns
 * an evns_status and leaves a message in evns_last_error() on failure.
 */
#ifndef EVNS_H
#define EVNS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef EVNS_API
#define EVNS_API __attribute__((visibility("default")))
#endif

typedef enum evns_status {
  EVNS_OK = 0,
  EVNS_ERR_INVALID_ARGUMENT = 1,
  EVNS_ERR_NO_CONVERGENCE = 2,
  EVNS_ERR_IO = 3,
  EVNS_ERR_INTERNAL = 4
} evns_status;

EVNS_API const char* evns_status_name(evns_status s);
/* Thread-local message describing the most recent failure. */
EVNS_API const char* evns_last_error(void);

/* ----------------------------------------------------------------------
 * Oseen kernel: stateless closed forms. t must be positive.
 * -------------------------------------------------------------------- */
EVNS_API evns_status evns_oseen_potential(double nu, double t,
                                          const double x[3], double* out);
EVNS_API evns_status evns_oseen_gradient(double nu, double t,
                                         const double x[3], double out[3]);
EVNS_API evns_status evns_oseen_hessian(double nu, double t, const double x[3],
                                        double out[9]);
EVNS_API evns_status evns_oseen_tensor(double nu, double t, const double x[3],
                                       double out[9]);
EVNS_API evns_status evns_heat_kernel(double nu, double t, const double x[3],
                                      double* out);
/* Normalized bound sup (|x|^2 + nu t)^{(m+3)/2} |D^m T| / sqrt(nu) scanned
 * over y = |x|/(2 sqrt(nu t)) in [0, y_max]; also reports the far value. */
EVNS_API evns_status evns_oseen_constant_scan(double nu, int m, double t,
                                              double y_max, int samples,
                                              double* out_constant,
                                              double* out_tail);
EVNS_API evns_status evns_oseen_grad_tensor_l1(double nu, double t,
                                               double* out_value,
                                               double* out_law_constant);

/* ----------------------------------------------------------------------
 * Nonlinear Volterra equations f = a + int K(t-t') P(f(t')) dt' on a
 * uniform grid of `intervals` cells over [0, horizon].
 * -------------------------------------------------------------------- */
typedef struct evns_volterra evns_volterra;

typedef enum evns_kernel_kind {
  EVNS_KERNEL_CONSTANT = 0,      /* K = coeff */
  EVNS_KERNEL_INVERSE_SQRT = 1,  /* K = coeff / sqrt(kernel_nu t) */
  EVNS_KERNEL_TABULATED = 2      /* samples on the grid nodes */
} evns_kernel_kind;

typedef enum evns_p_kind {
  EVNS_P_LINEAR = 0, /* alpha1 + alpha2 z */
  EVNS_P_SQUARE = 1, /* z^2 */
  EVNS_P_SQRT = 2,   /* sqrt(max(z, 0)) */
  EVNS_P_CUSTOM = 3  /* user callback */
} evns_p_kind;

typedef double (*evns_p_fn)(double z, void* ctx);

/* kernel_samples: intervals+1 values, only for EVNS_KERNEL_TABULATED.
 * p_lipschitz/p_monotone describe the custom callback; the built-in kinds
 * carry their own declarations and ignore those two arguments. */
EVNS_API evns_volterra* evns_volterra_create(
    double offset, double horizon, size_t intervals,
    evns_kernel_kind kernel_kind, double kernel_coeff, double kernel_nu,
    const double* kernel_samples, evns_p_kind p_kind, double p_alpha1,
    double p_alpha2, evns_p_fn p_fn, void* p_ctx, double p_lipschitz,
    int p_monotone, evns_status* status);
EVNS_API void evns_volterra_destroy(evns_volterra* v);
/* Number of grid nodes (= intervals + 1) expected in every array below. */
EVNS_API size_t evns_volterra_nodes(const evns_volterra* v);

EVNS_API evns_status evns_volterra_apply_s(const evns_volterra* v,
                                           const double* f, double* out);
EVNS_API evns_status evns_volterra_picard(const evns_volterra* v,
                                          const double* start,
                                          int from_supersolution, int max_iter,
                                          double tol, double* out,
                                          int* iterations, double* residual);
EVNS_API evns_status evns_volterra_is_subsolution(const evns_volterra* v,
                                                  const double* f, int* out);
EVNS_API evns_status evns_volterra_is_supersolution(const evns_volterra* v,
                                                    const double* g, int* out);
/* out_holds = 1 when the subsolution stays below the supersolution.
 * Precondition failures come back as EVNS_ERR_INVALID_ARGUMENT with a
 * message naming the side that failed. */
EVNS_API evns_status evns_volterra_vmax(const evns_volterra* v,
                                        const double* f_sub,
                                        const double* g_super, int* out_holds);
/* Largest grid time tau with a + P(barrier) int_0^tau K <= barrier. */
EVNS_API evns_status evns_volterra_constant_barrier_horizon(
    const evns_volterra* v, double barrier, double* out_tau);
/* First index exceeding the threshold (or non-finite); -1 when none. */
EVNS_API evns_status evns_volterra_detect_blowup(const double* f, size_t count,
                                                 double threshold,
                                                 ptrdiff_t* out_index);

/* ----------------------------------------------------------------------
 * Regularized solver runs. The configuration uses the documented
 * key=value text format; creating the handle executes the solve.
 * -------------------------------------------------------------------- */
typedef struct evns_run evns_run;

EVNS_API evns_run* evns_run_config_text(const char* text, evns_status* status);
EVNS_API evns_run* evns_run_config_file(const char* path, evns_status* status);
EVNS_API void evns_run_destroy(evns_run* r);
EVNS_API size_t evns_run_rows(const evns_run* r);
/* out: t, W, J, K_Aeps, V, balance_residual, tail_R2 */
EVNS_API evns_status evns_run_diagnostics(const evns_run* r, size_t row,
                                          double out[7]);
EVNS_API evns_status evns_run_scalars(const evns_run* r, double* w_raw0,
                                      double* w_eps0,
                                      double* median_contraction,
                                      double* max_divergence);
/* diagnostics.csv, hm.csv, snapshots, summary.json under out_dir. */
EVNS_API evns_status evns_run_write_outputs(const evns_run* r,
                                            const char* out_dir);

/* ----------------------------------------------------------------------
 * Command-level entry shared with the CLI. command is one of:
 * volterra-demo, oseen-verify, mollifier-verify, nse-run, nse-sweep,
 * all-checks. seed = UINT64_MAX keeps the config/default seed. Returns
 * the exit-code contract: 0 pass, 1 numerical failure, 2 usage error.
 * -------------------------------------------------------------------- */
EVNS_API int evns_command(const char* command, const char* config_path,
                          const char* out_dir, uint64_t seed, int quiet);

#ifdef __cplusplus
}
#endif

#endif /* EVNS_H */
