#ifndef NETRES_NETRES_H
#define NETRES_NETRES_H

/*
 * C interface to the netres library: resonance vulnerability of networks
 * under second-order Laplacian dynamics and its reduction by edge
 * re-weighting or an attached damping network.
 *
 * Conventions
 *   - Every fallible call returns netres_status; NETRES_OK is zero.
 *     netres_last_error() returns a thread-local message for the most
 *     recent failure on the calling thread.
 *   - Objects are opaque handles released with their *_free function.
 *     Passing NULL to a *_free function is a no-op.
 *   - Vertex ids are 0-based here; text files use 1-based ids.
 *   - Strings returned through char** are heap-allocated and must be
 *     released with netres_string_free.
 *   - Array getters copy into caller storage of the documented length.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NETRES_API __declspec(dllexport)
#else
#define NETRES_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum netres_status {
    NETRES_OK = 0,
    NETRES_ERR_INVALID_ARGUMENT = 1,
    NETRES_ERR_PARSE = 2,
    NETRES_ERR_INFEASIBLE = 3,
    NETRES_ERR_NOT_CONVERGED = 4,
    NETRES_ERR_NUMERICAL = 5,
    NETRES_ERR_IO = 6,
    NETRES_ERR_INTERNAL = 7
} netres_status;

typedef struct netres_graph netres_graph;
typedef struct netres_ago_problem netres_ago_problem;
typedef struct netres_opt_result netres_opt_result;
typedef struct netres_mc_result netres_mc_result;
typedef struct netres_trace netres_trace;

NETRES_API const char* netres_version(void);
NETRES_API const char* netres_last_error(void);
NETRES_API const char* netres_status_name(netres_status status);
NETRES_API void netres_string_free(char* s);

/* ---- graphs ---------------------------------------------------------- */

NETRES_API netres_status netres_graph_create(int n, size_t m, const int* u, const int* v, const double* weights,
                                             netres_graph** out);
NETRES_API netres_status netres_graph_rcg(int n, double weight_perturbation, uint64_t seed, netres_graph** out);
NETRES_API netres_status netres_graph_rig(int n, int edge_count, double weight_perturbation, uint64_t seed,
                                          netres_graph** out);
NETRES_API netres_status netres_graph_parse(const char* text, netres_graph** out);
NETRES_API netres_status netres_graph_load(const char* path, netres_graph** out);
/* Induced subgraph within `radius` hops of `center`. `ids_out`, if not
 * NULL, receives the original id of each new vertex (length = new n). */
NETRES_API netres_status netres_graph_ego(const netres_graph* g, int center, int radius, netres_graph** out,
                                          int* ids_out, size_t ids_capacity);
NETRES_API netres_status netres_graph_with_weights(const netres_graph* g, const double* weights, size_t m,
                                                   netres_graph** out);
NETRES_API void netres_graph_free(netres_graph* g);

NETRES_API int netres_graph_vertex_count(const netres_graph* g);
NETRES_API size_t netres_graph_edge_count(const netres_graph* g);
NETRES_API netres_status netres_graph_edges(const netres_graph* g, int* u, int* v, double* weights);
NETRES_API double netres_graph_total_weight(const netres_graph* g);
NETRES_API int netres_graph_is_connected(const netres_graph* g);
NETRES_API netres_status netres_graph_save(const netres_graph* g, const char* path);
NETRES_API netres_status netres_graph_to_edge_list(const netres_graph* g, char** out);
/* `ids` (0-based, may be NULL) is recorded as 1-based "vertex_ids". */
NETRES_API netres_status netres_graph_to_json(const netres_graph* g, const int* ids, size_t id_count, char** out);

/* ---- spectra and objectives ----------------------------------------- */

typedef struct netres_dynamics {
    double epsilon; /* stiffness offset, > 0 */
    double gamma;   /* damping multiplier, > 0 */
    double h;       /* Cauchy half-width of the attack frequency, > 0 */
} netres_dynamics;

NETRES_API netres_dynamics netres_dynamics_default(void);

/* Ascending natural frequencies sqrt(lambda_k + epsilon); n entries. */
NETRES_API netres_status netres_natural_frequencies(const netres_graph* g, double epsilon, double* out);
/* Ascending Laplacian eigenvalues; n entries. */
NETRES_API netres_status netres_laplacian_spectrum(const netres_graph* g, double* out);
/* CSV bin_left,bin_right,count of an equal-width histogram. */
NETRES_API netres_status netres_histogram_csv(const double* values, size_t count, int bins, char** out);

NETRES_API netres_status netres_g_closed(double omega_k, double omega_j, double gamma, double h, double* out);
NETRES_API netres_status netres_g_quadrature(double omega_k, double omega_j, double gamma, double h,
                                             double rel_tol, double* value, double* error, int* converged);
/* Expected squared steady-state amplitude of the main graph alone. */
NETRES_API netres_status netres_ngo_objective(const netres_graph* g, netres_dynamics d, double* out);

/* ---- auxiliary-graph problems --------------------------------------- */

typedef enum netres_aux_topology { NETRES_AUX_MIRRORED = 0, NETRES_AUX_COMPLETE = 1 } netres_aux_topology;

/* Starting point: mirrored aux weights copy the main weights, complete
 * aux weights are uniform w_tot / m~; c = w_tot / n; scaled down to the
 * budget r_m * w_tot when necessary. */
NETRES_API netres_status netres_ago_problem_create(const netres_graph* main, netres_dynamics d,
                                                   netres_aux_topology topology, double gamma_aux, double r_m,
                                                   netres_ago_problem** out);
NETRES_API void netres_ago_problem_free(netres_ago_problem* p);
NETRES_API size_t netres_ago_problem_aux_edge_count(const netres_ago_problem* p);
NETRES_API netres_status netres_ago_problem_set(netres_ago_problem* p, const double* aux_weights, size_t m,
                                                double c);
NETRES_API netres_status netres_ago_problem_get(const netres_ago_problem* p, double* aux_weights, double* c);
NETRES_API netres_status netres_ago_problem_set_gamma_aux(netres_ago_problem* p, double gamma_aux);
NETRES_API double netres_ago_problem_budget(const netres_ago_problem* p);
/* J~ by residues. `degenerate_pairs` (may be NULL) counts perturbed pairs. */
NETRES_API netres_status netres_ago_objective(const netres_ago_problem* p, double* out, int* degenerate_pairs);
/* CSV gamma_tilde,J_tilde,method_flag. */
NETRES_API netres_status netres_damping_sweep(const netres_ago_problem* p, const double* grid, size_t count,
                                              char** csv);

/* ---- Monte Carlo ----------------------------------------------------- */

typedef struct netres_mc_options {
    int64_t samples;
    uint64_t seed;
    int64_t batch_size;
    int threads; /* 0: hardware concurrency */
} netres_mc_options;

NETRES_API netres_mc_options netres_mc_options_default(void);
NETRES_API netres_status netres_mc_main(const netres_graph* g, netres_dynamics d, netres_mc_options o,
                                        netres_mc_result** out);
/* Uses the full 2n x 2n system, no diagonalizability assumption. */
NETRES_API netres_status netres_mc_combined(const netres_ago_problem* p, netres_mc_options o,
                                            netres_mc_result** out);
NETRES_API void netres_mc_result_free(netres_mc_result* r);
NETRES_API double netres_mc_mean(const netres_mc_result* r);
NETRES_API double netres_mc_standard_error(const netres_mc_result* r);
NETRES_API int64_t netres_mc_samples(const netres_mc_result* r);
/* CSV samples,running_mean,reference; one row per batch. */
NETRES_API netres_status netres_mc_running_csv(const netres_mc_result* r, double reference, char** out);

/* ---- optimization ---------------------------------------------------- */

typedef struct netres_opt_options {
    double tol;     /* <= 0: 1e-8 * max(1, |J|) */
    int max_iter;
    int starts;
    uint64_t seed;
    int threads;
    int ago_spectral_gradient; /* nonzero: eigenvalue-chain gradient, checked against differences */
} netres_opt_options;

NETRES_API netres_opt_options netres_opt_options_default(void);
/* w_tot <= 0 keeps the graph's current total. */
NETRES_API netres_status netres_optimize_ngo(const netres_graph* g, netres_dynamics d, double w_tot, double w_min,
                                             netres_opt_options o, netres_opt_result** out);
NETRES_API netres_status netres_optimize_ago(const netres_ago_problem* p, netres_opt_options o,
                                             netres_opt_result** out);
NETRES_API void netres_opt_result_free(netres_opt_result* r);
NETRES_API double netres_opt_j0(const netres_opt_result* r);
NETRES_API double netres_opt_j_star(const netres_opt_result* r);
NETRES_API double netres_opt_j_main(const netres_opt_result* r);
NETRES_API double netres_opt_c_star(const netres_opt_result* r);
NETRES_API double netres_opt_percent_decrease(const netres_opt_result* r);
NETRES_API int netres_opt_converged(const netres_opt_result* r);
NETRES_API int netres_opt_iterations(const netres_opt_result* r);
NETRES_API double netres_opt_max_residual(const netres_opt_result* r);
NETRES_API size_t netres_opt_variable_count(const netres_opt_result* r);
NETRES_API netres_status netres_opt_w_star(const netres_opt_result* r, double* out);
NETRES_API size_t netres_opt_trajectory_length(const netres_opt_result* r);
NETRES_API netres_status netres_opt_trajectory(const netres_opt_result* r, double* out);
NETRES_API netres_status netres_opt_to_json(const netres_opt_result* r, char** out);
NETRES_API netres_status netres_percent_decrease(double j0, double j_star, double* out);

typedef struct netres_study_base {
    const char* method; /* "ngo" | "ago" */
    const char* graph;  /* "rcg" | "rig" */
    int n;
    int edges;
    double weight_perturbation;
    netres_dynamics dynamics;
    double w_min;
    double gamma_aux;
    double r_m;
    netres_aux_topology topology;
    uint64_t seed;
    netres_opt_options options;
} netres_study_base;

NETRES_API netres_study_base netres_study_base_default(void);
/* CSV param,value,percent_decrease,converged. */
NETRES_API netres_status netres_param_study(const netres_study_base* base, const char* param,
                                            const double* values, size_t count, int threads, char** csv);

/* ---- attacks and time-domain simulation ------------------------------ */

/* Draw one attack (unit forcing vector, frequency from the Cauchy
 * mixture over the graph's natural frequencies). f_out has n entries. */
NETRES_API netres_status netres_sample_attack(const netres_graph* g, netres_dynamics d, uint64_t seed,
                                              uint64_t index, double* f_out, double* nu_out);

typedef struct netres_sim_options {
    double dt;    /* 0: automatic */
    double t_end; /* 0: automatic */
    double settle_tol;
    int refine_dt;
    double refine_tol;
    int records_per_period;
} netres_sim_options;

NETRES_API netres_sim_options netres_sim_options_default(void);
NETRES_API netres_status netres_simulate_main(const netres_graph* g, netres_dynamics d, const double* f, double nu,
                                              netres_sim_options o, netres_trace** out);
NETRES_API netres_status netres_simulate_combined(const netres_ago_problem* p, const double* f, double nu,
                                                  netres_sim_options o, netres_trace** out);
NETRES_API void netres_trace_free(netres_trace* t);
NETRES_API double netres_trace_reference(const netres_trace* t);
NETRES_API double netres_trace_final_envelope_ratio(const netres_trace* t);
NETRES_API double netres_trace_final_envelope(const netres_trace* t);
NETRES_API int netres_trace_settled(const netres_trace* t);
NETRES_API double netres_trace_dt(const netres_trace* t);
NETRES_API int64_t netres_trace_steps(const netres_trace* t);
/* CSV t,squared_norm,envelope,ratio,envelope_ratio. */
NETRES_API netres_status netres_trace_csv(const netres_trace* t, char** out);

#ifdef __cplusplus
}
#endif

#endif /* NETRES_NETRES_H */
