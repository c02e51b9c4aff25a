/* paracalc -- desk-scale paradifferential toolkit for the semi-linear
 * Dirichlet model problem -u'' + u u' = f on (0, 1).
 *
 * C interface of the shared library. All objects are opaque handles created
 * and destroyed through these functions; every fallible call returns a
 * pc_status and leaves a human-readable message in pc_last_error() on
 * failure. Out-parameters are written only on PC_OK. Handles are immutable
 * once created and may be shared across threads.
 */

#ifndef PARACALC_H
#define PARACALC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pc_status {
    PC_OK = 0,
    PC_ERR_INVALID_ARGUMENT = 1, /* malformed input or violated precondition */
    PC_ERR_GRID_MISMATCH = 2,    /* operands live on different grids */
    PC_ERR_INDEX_RANGE = 3,      /* block or path index out of range */
    PC_ERR_ESTIMATION = 4,       /* too few usable blocks for a regression */
    PC_ERR_BUFFER_TOO_SMALL = 5, /* caller buffer cannot hold the result */
    PC_ERR_INTERNAL = 6
} pc_status;

/* Message describing the most recent failure on the calling thread. */
const char* pc_last_error(void);

const char* pc_version(void);

/* ------------------------------------------------------------------ */
/* Opaque handles                                                      */

typedef struct pc_grid pc_grid;           /* periodic grid on [-1, 1)   */
typedef struct pc_partition pc_partition; /* dyadic frequency partition */
typedef struct pc_gridfn pc_gridfn;       /* real function on the torus */
typedef struct pc_domainfn pc_domainfn;   /* real function on [0, 1]    */
typedef struct pc_paralin pc_paralin;     /* frozen linearization L_u   */
typedef struct pc_problem pc_problem;     /* (f, boundary, reference)   */

/* ------------------------------------------------------------------ */
/* Grids and partitions                                                */

/* Uniform periodic grid with 2^level points; 4 <= level <= 16. */
pc_status pc_grid_create(int level, pc_grid** out);
void pc_grid_destroy(pc_grid* grid);
int pc_grid_level(const pc_grid* grid);
size_t pc_grid_size(const pc_grid* grid);        /* 2^level             */
size_t pc_grid_domain_size(const pc_grid* grid); /* 2^{level-1} + 1     */

/* Littlewood-Paley partition; transition in (0, 1] shapes the block
 * crossfade (1.0 is the default full-band raised cosine). */
pc_status pc_partition_create(const pc_grid* grid, double transition,
                              pc_partition** out);
void pc_partition_destroy(pc_partition* partition);
int pc_partition_top_block(const pc_partition* partition); /* J_max */

/* ------------------------------------------------------------------ */
/* Torus functions                                                     */

pc_status pc_gridfn_create(const pc_grid* grid, const double* values, size_t len,
                           pc_gridfn** out);
void pc_gridfn_destroy(pc_gridfn* fn);
size_t pc_gridfn_size(const pc_gridfn* fn);
pc_status pc_gridfn_values(const pc_gridfn* fn, double* out, size_t cap);
pc_status pc_gridfn_sup_norm(const pc_gridfn* fn, double* out);
pc_status pc_gridfn_derivative(const pc_gridfn* fn, pc_gridfn** out);
pc_status pc_gridfn_multiply(const pc_gridfn* a, const pc_gridfn* b, pc_gridfn** out);

/* Test signal with |coefficient(xi)| = (1+|xi|)^{-sigma-1/2} and seeded
 * random phases; deterministic given (sigma, seed, grid). */
pc_status pc_synthesize_rough(const pc_grid* grid, double sigma, uint64_t seed,
                              pc_gridfn** out);

pc_status pc_apply_block(const pc_partition* partition, int block, const pc_gridfn* fn,
                         pc_gridfn** out);
pc_status pc_low_pass(const pc_partition* partition, int block, const pc_gridfn* fn,
                      pc_gridfn** out);

/* Per-block L^p norms, blocks 0..J_max. Pass HUGE_VAL for the sup norm. */
pc_status pc_block_norms(const pc_partition* partition, const pc_gridfn* fn, double p,
                         double* out, size_t cap, size_t* out_len);

/* Negated regression slope of log2 b_j over blocks 2..J_max-1. `norms` is a
 * full profile as returned by pc_block_norms. */
pc_status pc_estimate_smoothness(const double* norms, size_t len, double* out);

pc_status pc_sobolev_norm(const pc_gridfn* fn, double s, double p, double* out);

/* ------------------------------------------------------------------ */
/* Domain functions, extension, restriction                            */

pc_status pc_domainfn_create(const pc_grid* grid, const double* values, size_t len,
                             pc_domainfn** out);
void pc_domainfn_destroy(pc_domainfn* fn);
size_t pc_domainfn_size(const pc_domainfn* fn);
pc_status pc_domainfn_values(const pc_domainfn* fn, double* out, size_t cap);
pc_status pc_domainfn_sup_norm(const pc_domainfn* fn, double* out);
pc_status pc_domainfn_axpy(double alpha, const pc_domainfn* x, const pc_domainfn* y,
                           pc_domainfn** out); /* alpha*x + y */

pc_status pc_trace(const pc_domainfn* u, double* phi0, double* phi1);

/* Reflection extension of order 2, 3 or 4; restriction is its exact left
 * inverse on the [0, 1] nodes. */
pc_status pc_extend(const pc_domainfn* u, int order, pc_gridfn** out);
pc_status pc_restrict(const pc_gridfn* fn, pc_domainfn** out);

/* ------------------------------------------------------------------ */
/* Paraproducts and the paralinearization                              */

/* kind 1, 2 or 3; pi_1 + pi_2 + pi_3 = g*h exactly on the grid. */
pc_status pc_paraproduct(const pc_partition* partition, int kind, const pc_gridfn* g,
                         const pc_gridfn* h, pc_gridfn** out);

pc_status pc_paralin_create(const pc_domainfn* base, const pc_partition* partition,
                            int order, pc_paralin** out);
void pc_paralin_destroy(pc_paralin* lin);
pc_status pc_paralin_apply(const pc_paralin* lin, const pc_domainfn* v,
                           pc_domainfn** out);

/* ------------------------------------------------------------------ */
/* Green operator of the linear Dirichlet problem                      */

pc_status pc_solve_dirichlet(const pc_domainfn* f, pc_domainfn** out);
pc_status pc_poisson_part(const pc_grid* grid, double phi0, double phi1,
                          pc_domainfn** out);
pc_status pc_apply_a(const pc_domainfn* u, int order, pc_domainfn** out);

/* Manufactured instance from sine modes and affine boundary data; f is
 * evaluated from the closed form. */
pc_status pc_manufacture(const pc_grid* grid, const int* wavenumbers,
                         const double* amplitudes, size_t nmodes, double phi0,
                         double phi1, pc_problem** out);
void pc_problem_destroy(pc_problem* problem);
/* Views owned by the problem; valid until pc_problem_destroy, do not free. */
const pc_domainfn* pc_problem_f(const pc_problem* problem);
const pc_domainfn* pc_problem_reference(const pc_problem* problem);
pc_status pc_problem_boundary(const pc_problem* problem, double* phi0, double* phi1);

/* ------------------------------------------------------------------ */
/* Finite Neumann-series parametrix                                    */

pc_status pc_apply_rl(const pc_paralin* lin, const pc_domainfn* v, pc_domainfn** out);

/* sum_{k=0}^{series_len-1} (R L_u)^k w; series_len = 0 gives zero,
 * series_len = 1 the identity. series_len <= 64. */
pc_status pc_apply_parametrix(const pc_paralin* lin, int series_len,
                              const pc_domainfn* w, pc_domainfn** out);

pc_status pc_parametrix_residual(const pc_problem* problem, const pc_domainfn* u,
                                 const pc_partition* partition, int series_len,
                                 int order, pc_domainfn** out_residual,
                                 double* out_sup);

/* Block-decay exponents sigma_k of (R L_u)^k u for k = 0..series_len,
 * measured at integrability p. out_defined[k] = 0 marks saturated slots whose
 * sigma could not be estimated (entry set to 0). */
pc_status pc_smoothing_profile(const pc_domainfn* u, const pc_partition* partition,
                               int series_len, int order, double p, double* out_sigma,
                               uint8_t* out_defined, size_t cap, size_t* out_len);

/* ------------------------------------------------------------------ */
/* Regularity calculus over the (s, p) plane                           */

pc_status pc_in_domain_a(double s, double p, int n, int* out);
pc_status pc_in_domain_n(double s, double p, int n, int* out);
pc_status pc_in_domain_lu(double s, double p, double s0, double p0, int n, int* out);
pc_status pc_order_omega(double s0, double p0, int n, double epsilon, double* out);
pc_status pc_embeds(double s_src, double p_src, double s_dst, double p_dst, int n,
                    int* out);

typedef struct pc_path_step {
    double s;
    double p;
    int move; /* 0 start, 1 gain, 2 embed */
} pc_path_step;

/* Minimal N such that N gain steps of 2 - omega from (s0, p0), staying in
 * D_u, embed into (t, r). out_n = -1 when unreachable within max_n; the
 * witness path is written when reachable. out_bootstrap_n is the same search
 * confined to D(A) cap D(N) (-1 when no such path exists). */
pc_status pc_minimal_n(double s0, double p0, double t, double r, int n, double epsilon,
                       int max_n, int* out_n, pc_path_step* path, size_t cap,
                       size_t* out_path_len, int* out_bootstrap_n);

enum {
    PC_REGION_A = 1,
    PC_REGION_N = 2,
    PC_REGION_LU = 4,
    PC_REGION_DU = 8
};

/* Membership bit-flags over an (1/p, s) window, row-major with the s rows
 * bottom-up, resolution x resolution pixels sampled at centres. */
pc_status pc_rasterize_domains(double s0, double p0, int n, double s_min, double s_max,
                               double invp_min, double invp_max, int resolution,
                               uint8_t* out, size_t cap);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PARACALC_H */
