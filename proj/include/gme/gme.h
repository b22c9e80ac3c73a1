/*
 * C API of the GME estimation library: geometric measure of entanglement
 * of pure multi-qubit states by variational optimization (VDGE and the
 * local-warm-up iVDGE variant), with exact classical oracles, a
 * sampling-level noise model, and property-check suites.
 *
 * All objects are opaque handles created and destroyed through this
 * interface; every fallible call returns a gme_status. Amplitudes cross
 * the boundary as interleaved (re, im) doubles. Basis convention: bit j
 * of an amplitude index is the outcome of qubit j, least significant bit
 * first.
 */
#ifndef GME_GME_H
#define GME_GME_H

#include <stdint.h>

#if defined(_WIN32)
#define GME_API __declspec(dllexport)
#else
#define GME_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gme_status {
    GME_OK = 0,
    GME_ERR_INVALID_ARGUMENT = 1,
    GME_ERR_DIMENSION_MISMATCH = 2,
    GME_ERR_DEGENERATE_PARAMS = 3,
    GME_ERR_SINGULAR_CONFUSION = 4,
    GME_ERR_UNKNOWN_NAME = 5,
    GME_ERR_INTERNAL = 6
} gme_status;

typedef struct gme_state gme_state;
typedef struct gme_params gme_params;
typedef struct gme_noise_model gme_noise_model;
typedef struct gme_trace gme_trace;
typedef struct gme_estimate gme_estimate;

/* Gain schedule a_k = a/(k+1+A)^s, c_k = b/(k+1)^r. */
typedef struct gme_gains {
    double a;
    double b;
    double A;
    double s;
    double r;
} gme_gains;

typedef struct gme_run_config {
    int iters_local;
    int iters_global;
    long long shots_local;
    long long shots_global;
    gme_gains gains_local;
    gme_gains gains_global;
    int repetitions;
    uint64_t seed;
    uint64_t stream;
    double bp_threshold;
    int mitigate_final;          /* nonzero: mitigate the final noisy estimate */
    int global_counter_continues; /* nonzero: second stage continues the k counter */
    int jobs;
} gme_run_config;

typedef struct gme_trace_row {
    int iteration;
    int stage; /* 0 local, 1 global */
    double cost_sampled;
    double infidelity_exact;
    long long cum_shots;
} gme_trace_row;

typedef struct gme_check_report {
    int pass;
    double margin1;
    double margin2;
    char detail[160];
} gme_check_report;

GME_API const char* gme_status_message(gme_status status);

/* Defaults: benchmark shot budgets, asymptotic gains, 5 repetitions. */
GME_API void gme_run_config_defaults(gme_run_config* config);
GME_API gme_status gme_preset_gains(const char* name, gme_gains* out);

/* ---- states ---------------------------------------------------------- */
/* family: GHZ | W | Wtilde | GHZW | WWtilde; s is the superposition
 * weight, ignored for the first three. */
GME_API gme_status gme_state_named(const char* family, int n, double s,
                                   gme_state** out);
GME_API gme_status gme_state_haar(int n, uint64_t seed, uint64_t stream,
                                  gme_state** out);
GME_API gme_status gme_state_from_amplitudes(int n, const double* re_im,
                                             gme_state** out);
GME_API int gme_state_qubits(const gme_state* state);
GME_API gme_status gme_state_amplitudes(const gme_state* state, double* re_im);
GME_API void gme_state_free(gme_state* state);

/* ---- ansatz parameters ----------------------------------------------- */
GME_API gme_status gme_params_identity(int n, gme_params** out);
GME_API gme_status gme_params_random(int n, uint64_t seed, uint64_t stream,
                                     gme_params** out);
/* 4n doubles: (re z0_0, im z0_0, re z1_0, im z1_0, re z0_1, ...). */
GME_API gme_status gme_params_from_components(int n, const double* re_im,
                                              gme_params** out);
GME_API void gme_params_free(gme_params* params);

/* ---- costs, bounds, spectrum ----------------------------------------- */
GME_API gme_status gme_fidelity(const gme_state* state,
                                const gme_params* params, double* out);
GME_API gme_status gme_global_infidelity(const gme_state* state,
                                         const gme_params* params,
                                         double* out);
GME_API gme_status gme_local_infidelity(const gme_state* state,
                                        const gme_params* params, int i, int j,
                                        double* out);
GME_API gme_status gme_expected_hl(const gme_state* state,
                                   const gme_params* params, double* out);
/* out[0..3] = <H_L>, lower, upper, exact global infidelity. */
GME_API gme_status gme_bounds(const gme_state* state, const gme_params* params,
                              double out[4]);
GME_API gme_status gme_interpolated_cost(const gme_state* state,
                                         const gme_params* params,
                                         double lambda, double* out);
/* Arrays of n+1 entries indexed by Hamming weight. */
GME_API gme_status gme_hl_spectrum(int n, double* eigenvalues,
                                   double* multiplicities);
GME_API gme_status gme_xg_mse_bound(int n, double hl_value, double* out);

/* ---- noise ------------------------------------------------------------ */
GME_API gme_status gme_noise_create(int n, double depolarizing,
                                    const double* p01, const double* p10,
                                    gme_noise_model** out);
GME_API void gme_noise_free(gme_noise_model* model);
/* probs_in/probs_out: dense length-2^n distributions. */
GME_API gme_status gme_noise_corrupt(const gme_noise_model* model, int n,
                                     const double* probs_in, double* probs_out);
GME_API gme_status gme_noise_mitigate(const gme_noise_model* model, int n,
                                      const double* probs_in, double* raw_out,
                                      double* clipped_out);

/* ---- optimization runs ------------------------------------------------ */
/* noise may be NULL. The returned trace is owned by the caller. */
GME_API gme_status gme_run_vdge(const gme_state* state,
                                const gme_run_config* config,
                                const gme_noise_model* noise, gme_trace** out);
GME_API gme_status gme_run_ivdge(const gme_state* state,
                                 const gme_run_config* config,
                                 const gme_noise_model* noise, gme_trace** out);
GME_API int gme_trace_length(const gme_trace* trace);
GME_API gme_status gme_trace_row_at(const gme_trace* trace, int index,
                                    gme_trace_row* out);
GME_API double gme_trace_final_estimate(const gme_trace* trace);
GME_API void gme_trace_free(gme_trace* trace);

/* Best-of-repetitions: minimum final estimate over config->repetitions
 * independent runs with derived rng streams; deterministic regardless of
 * config->jobs. use_ivdge selects the algorithm. */
GME_API gme_status gme_best_of(const gme_state* state, int use_ivdge,
                               const gme_run_config* config,
                               const gme_noise_model* noise,
                               gme_estimate** out);
GME_API double gme_estimate_value(const gme_estimate* estimate);
GME_API int gme_estimate_best_rep(const gme_estimate* estimate);
GME_API int gme_estimate_bp_flag(const gme_estimate* estimate);
GME_API int gme_estimate_rep_count(const gme_estimate* estimate);
GME_API const gme_trace* gme_estimate_trace(const gme_estimate* estimate,
                                            int rep);
GME_API void gme_estimate_free(gme_estimate* estimate);

GME_API gme_status gme_classify_bp(double estimate, double threshold,
                                   int* trapped);

/* ---- exact oracles ----------------------------------------------------- */
GME_API gme_status gme_exact_product(const gme_state* state, int restarts,
                                     int hops, uint64_t seed, double* out);
/* family: GHZW | WWtilde. */
GME_API gme_status gme_exact_symmetric(const char* family, int n, double s,
                                       int restarts, uint64_t seed,
                                       double* out);

/* ---- property suites --------------------------------------------------- */
GME_API gme_status gme_check_bounds(int n, int samples, uint64_t seed,
                                    gme_check_report* out);
GME_API gme_status gme_check_estimator(int n, int instances, uint64_t seed,
                                       gme_check_report* out);
GME_API gme_status gme_check_spectrum(int n, gme_check_report* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GME_GME_H */
