#include "netres/netres.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "core/ago.hpp"
#include "core/attack.hpp"
#include "core/error.hpp"
#include "core/export.hpp"
#include "core/ngo.hpp"
#include "core/optimize.hpp"
#include "core/response.hpp"
#include "core/spectral.hpp"

struct netres_graph {
    netres::WeightedGraph g;
};

struct netres_ago_problem {
    netres::AgoProblem p;
};

struct netres_opt_result {
    netres::OptResult r;
    std::vector<netres::Edge> edges;
};

struct netres_mc_result {
    netres::MonteCarloResult r;
};

struct netres_trace {
    netres::AmplitudeTrace t;
};

namespace {

thread_local std::string last_error;

netres_status to_status(netres::Errc c) {
    switch (c) {
    case netres::Errc::invalid_argument:
        return NETRES_ERR_INVALID_ARGUMENT;
    case netres::Errc::parse_error:
        return NETRES_ERR_PARSE;
    case netres::Errc::infeasible:
        return NETRES_ERR_INFEASIBLE;
    case netres::Errc::not_converged:
        return NETRES_ERR_NOT_CONVERGED;
    case netres::Errc::numerical:
        return NETRES_ERR_NUMERICAL;
    case netres::Errc::io:
        return NETRES_ERR_IO;
    }
    return NETRES_ERR_INTERNAL;
}

template <typename F>
netres_status guard(F&& body) {
    try {
        body();
        last_error.clear();
        return NETRES_OK;
    } catch (const netres::Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return NETRES_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return NETRES_ERR_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    netres::require(p != nullptr, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

netres::DynamicsParams params_of(netres_dynamics d) {
    netres::DynamicsParams p{d.epsilon, d.gamma};
    p.validate();
    netres::require(d.h > 0.0, "h must be > 0");
    return p;
}

netres::OptOptions options_of(netres_opt_options o) {
    netres::OptOptions out;
    out.tol = o.tol;
    out.max_iter = o.max_iter;
    out.starts = o.starts;
    out.seed = o.seed;
    out.threads = o.threads;
    out.ago_gradient = o.ago_spectral_gradient ? netres::AgoGradient::spectral : netres::AgoGradient::finite_difference;
    netres::require(out.max_iter >= 0, "max_iter must be >= 0");
    netres::require(out.starts >= 1, "starts must be >= 1");
    return out;
}

netres::MonteCarloOptions mc_options_of(netres_mc_options o) {
    netres::MonteCarloOptions out;
    out.samples = o.samples;
    out.seed = o.seed;
    out.batch_size = o.batch_size;
    out.threads = o.threads;
    return out;
}

netres::SimulationOptions sim_options_of(netres_sim_options o) {
    netres::SimulationOptions out;
    out.dt = o.dt;
    out.t_end = o.t_end;
    out.settle_tol = o.settle_tol;
    out.refine_dt = o.refine_dt != 0;
    out.refine_tol = o.refine_tol;
    out.records_per_period = o.records_per_period;
    return out;
}

netres::Vector copy_vector(const double* p, std::size_t n) {
    netres::Vector v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        v[static_cast<Eigen::Index>(i)] = p[i];
    }
    return v;
}

void write_vector(const netres::Vector& v, double* out) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out[i] = v[i];
    }
}

}  // namespace

extern "C" {

const char* netres_version(void) { return "0.1.0"; }

const char* netres_last_error(void) { return last_error.c_str(); }

const char* netres_status_name(netres_status status) {
    switch (status) {
    case NETRES_OK:
        return "ok";
    case NETRES_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case NETRES_ERR_PARSE:
        return "parse error";
    case NETRES_ERR_INFEASIBLE:
        return "infeasible";
    case NETRES_ERR_NOT_CONVERGED:
        return "not converged";
    case NETRES_ERR_NUMERICAL:
        return "numerical failure";
    case NETRES_ERR_IO:
        return "i/o error";
    case NETRES_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

void netres_string_free(char* s) { std::free(s); }

// ---- graphs ---------------------------------------------------------------

netres_status netres_graph_create(int n, size_t m, const int* u, const int* v, const double* weights,
                                  netres_graph** out) {
    return guard([&] {
        need(out, "out");
        if (m > 0) {
            need(u, "u");
            need(v, "v");
            need(weights, "weights");
        }
        std::vector<netres::Edge> edges(m);
        std::vector<double> w(weights, weights + m);
        for (std::size_t i = 0; i < m; ++i) {
            edges[i] = {u[i], v[i]};
        }
        *out = new netres_graph{netres::WeightedGraph::from_edges(n, std::move(edges), std::move(w))};
    });
}

netres_status netres_graph_rcg(int n, double weight_perturbation, uint64_t seed, netres_graph** out) {
    return guard([&] {
        need(out, "out");
        *out = new netres_graph{netres::gen_rcg(n, weight_perturbation, seed)};
    });
}

netres_status netres_graph_rig(int n, int edge_count, double weight_perturbation, uint64_t seed,
                               netres_graph** out) {
    return guard([&] {
        need(out, "out");
        *out = new netres_graph{netres::gen_rig(n, edge_count, weight_perturbation, seed)};
    });
}

netres_status netres_graph_parse(const char* text, netres_graph** out) {
    return guard([&] {
        need(text, "text");
        need(out, "out");
        *out = new netres_graph{netres::load_edge_list(text)};
    });
}

netres_status netres_graph_load(const char* path, netres_graph** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        *out = new netres_graph{netres::load_edge_list_file(path)};
    });
}

netres_status netres_graph_ego(const netres_graph* g, int center, int radius, netres_graph** out, int* ids_out,
                               size_t ids_capacity) {
    return guard([&] {
        need(g, "graph");
        need(out, "out");
        auto ego = netres::ego_subgraph(g->g, center, radius);
        if (ids_out) {
            netres::require(ids_capacity >= ego.new_to_old.size(), "ids buffer is too small");
            std::copy(ego.new_to_old.begin(), ego.new_to_old.end(), ids_out);
        }
        *out = new netres_graph{std::move(ego.graph)};
    });
}

netres_status netres_graph_with_weights(const netres_graph* g, const double* weights, size_t m,
                                        netres_graph** out) {
    return guard([&] {
        need(g, "graph");
        need(out, "out");
        netres::require(m == static_cast<std::size_t>(g->g.edge_count()), "weight count must equal the edge count");
        need(weights, "weights");
        *out = new netres_graph{g->g.with_weights(copy_vector(weights, m))};
    });
}

void netres_graph_free(netres_graph* g) { delete g; }

int netres_graph_vertex_count(const netres_graph* g) { return g ? g->g.vertex_count() : 0; }

size_t netres_graph_edge_count(const netres_graph* g) {
    return g ? static_cast<std::size_t>(g->g.edge_count()) : 0;
}

netres_status netres_graph_edges(const netres_graph* g, int* u, int* v, double* weights) {
    return guard([&] {
        need(g, "graph");
        const auto& e = g->g.edges();
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (u) u[i] = e[i].u;
            if (v) v[i] = e[i].v;
            if (weights) weights[i] = g->g.weights()[static_cast<Eigen::Index>(i)];
        }
    });
}

double netres_graph_total_weight(const netres_graph* g) { return g ? g->g.total_weight() : 0.0; }

int netres_graph_is_connected(const netres_graph* g) { return g && g->g.is_connected() ? 1 : 0; }

netres_status netres_graph_save(const netres_graph* g, const char* path) {
    return guard([&] {
        need(g, "graph");
        need(path, "path");
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            netres::fail(netres::Errc::io, std::string("cannot open '") + path + "' for writing");
        }
        f << netres::to_edge_list(g->g);
        if (!f) {
            netres::fail(netres::Errc::io, std::string("write to '") + path + "' failed");
        }
    });
}

netres_status netres_graph_to_edge_list(const netres_graph* g, char** out) {
    return guard([&] {
        need(g, "graph");
        need(out, "out");
        *out = dup_string(netres::to_edge_list(g->g));
    });
}

netres_status netres_graph_to_json(const netres_graph* g, const int* ids, size_t id_count, char** out) {
    return guard([&] {
        need(g, "graph");
        need(out, "out");
        std::vector<int> v;
        if (ids) {
            v.assign(ids, ids + id_count);
        }
        *out = dup_string(netres::graph_to_json(g->g, v));
    });
}

// ---- spectra and objectives -------------------------------------------------

netres_dynamics netres_dynamics_default(void) { return {10.0, 1e-6, 0.1}; }

netres_status netres_natural_frequencies(const netres_graph* g, double epsilon, double* out) {
    return guard([&] {
        need(g, "graph");
        need(out, "out");
        write_vector(netres::natural_frequencies(g->g, {epsilon, 1.0}), out);
    });
}

netres_status netres_laplacian_spectrum(const netres_graph* g, double* out) {
    return guard([&] {
        need(g, "graph");
        need(out, "out");
        netres::JacobiOptions o;
        o.compute_vectors = false;
        write_vector(netres::sym_eig(netres::laplacian(g->g), o).values, out);
    });
}

netres_status netres_histogram_csv(const double* values, size_t count, int bins, char** out) {
    return guard([&] {
        need(values, "values");
        need(out, "out");
        *out = dup_string(netres::to_csv(netres::spectrum_histogram(copy_vector(values, count), bins)));
    });
}

netres_status netres_g_closed(double omega_k, double omega_j, double gamma, double h, double* out) {
    return guard([&] {
        need(out, "out");
        *out = netres::g_closed(omega_k, omega_j, gamma, h);
    });
}

netres_status netres_g_quadrature(double omega_k, double omega_j, double gamma, double h, double rel_tol,
                                  double* value, double* error, int* converged) {
    return guard([&] {
        need(value, "value");
        const auto q = netres::g_quadrature(omega_k, omega_j, gamma, h, rel_tol);
        *value = q.value;
        if (error) *error = q.error;
        if (converged) *converged = q.converged ? 1 : 0;
    });
}

netres_status netres_ngo_objective(const netres_graph* g, netres_dynamics d, double* out) {
    return guard([&] {
        need(g, "graph");
        need(out, "out");
        netres::NgoProblem p;
        p.graph = g->g;
        p.params = params_of(d);
        p.h = d.h;
        *out = netres::ngo_objective(p);
    });
}

// ---- auxiliary-graph problems -----------------------------------------------

netres_status netres_ago_problem_create(const netres_graph* main, netres_dynamics d, netres_aux_topology topology,
                                        double gamma_aux, double r_m, netres_ago_problem** out) {
    return guard([&] {
        need(main, "graph");
        need(out, "out");
        netres::require(topology == NETRES_AUX_MIRRORED || topology == NETRES_AUX_COMPLETE, "unknown aux topology");
        const auto t = topology == NETRES_AUX_MIRRORED ? netres::AuxTopology::mirrored : netres::AuxTopology::complete;
        auto p = netres::default_ago_problem(main->g, params_of(d), t, gamma_aux, d.h, r_m);
        p.validate();
        *out = new netres_ago_problem{std::move(p)};
    });
}

void netres_ago_problem_free(netres_ago_problem* p) { delete p; }

size_t netres_ago_problem_aux_edge_count(const netres_ago_problem* p) {
    return p ? static_cast<std::size_t>(p->p.aux_weights.size()) : 0;
}

netres_status netres_ago_problem_set(netres_ago_problem* p, const double* aux_weights, size_t m, double c) {
    return guard([&] {
        need(p, "problem");
        need(aux_weights, "aux_weights");
        netres::require(m == static_cast<std::size_t>(p->p.aux_weights.size()), "aux weight count mismatch");
        auto q = p->p;
        q.aux_weights = copy_vector(aux_weights, m);
        q.c = c;
        q.validate();
        p->p = std::move(q);
    });
}

netres_status netres_ago_problem_get(const netres_ago_problem* p, double* aux_weights, double* c) {
    return guard([&] {
        need(p, "problem");
        if (aux_weights) write_vector(p->p.aux_weights, aux_weights);
        if (c) *c = p->p.c;
    });
}

netres_status netres_ago_problem_set_gamma_aux(netres_ago_problem* p, double gamma_aux) {
    return guard([&] {
        need(p, "problem");
        netres::require(gamma_aux > 0.0, "gamma_aux must be > 0");
        p->p.gamma_aux = gamma_aux;
    });
}

double netres_ago_problem_budget(const netres_ago_problem* p) { return p ? p->p.budget() : 0.0; }

netres_status netres_ago_objective(const netres_ago_problem* p, double* out, int* degenerate_pairs) {
    return guard([&] {
        need(p, "problem");
        need(out, "out");
        const auto v = netres::ago_objective(p->p);
        *out = v.value;
        if (degenerate_pairs) *degenerate_pairs = v.degenerate_pairs;
    });
}

netres_status netres_damping_sweep(const netres_ago_problem* p, const double* grid, size_t count, char** csv) {
    return guard([&] {
        need(p, "problem");
        need(grid, "grid");
        need(csv, "csv");
        *csv = dup_string(netres::to_csv(netres::damping_sweep(p->p, std::vector<double>(grid, grid + count))));
    });
}

// ---- Monte Carlo --------------------------------------------------------------

netres_mc_options netres_mc_options_default(void) { return {1'000'000, 1, 100'000, 0}; }

netres_status netres_mc_main(const netres_graph* g, netres_dynamics d, netres_mc_options o, netres_mc_result** out) {
    return guard([&] {
        need(g, "graph");
        need(out, "out");
        const netres::MainResponse model(g->g, params_of(d));
        const netres::AttackModel attack{d.h, model.omegas()};
        *out = new netres_mc_result{netres::monte_carlo_vulnerability(model, attack, mc_options_of(o))};
    });
}

netres_status netres_mc_combined(const netres_ago_problem* p, netres_mc_options o, netres_mc_result** out) {
    return guard([&] {
        need(p, "problem");
        need(out, "out");
        const netres::CombinedResponse model(p->p.combined());
        const netres::AttackModel attack{p->p.h, netres::natural_frequencies(p->p.main, p->p.params)};
        *out = new netres_mc_result{netres::monte_carlo_vulnerability(model, attack, mc_options_of(o))};
    });
}

void netres_mc_result_free(netres_mc_result* r) { delete r; }

double netres_mc_mean(const netres_mc_result* r) { return r ? r->r.mean : 0.0; }

double netres_mc_standard_error(const netres_mc_result* r) { return r ? r->r.standard_error : 0.0; }

int64_t netres_mc_samples(const netres_mc_result* r) { return r ? r->r.samples : 0; }

netres_status netres_mc_running_csv(const netres_mc_result* r, double reference, char** out) {
    return guard([&] {
        need(r, "result");
        need(out, "out");
        *out = dup_string(netres::running_average_csv(r->r, reference));
    });
}

// ---- optimization -------------------------------------------------------------

netres_opt_options netres_opt_options_default(void) { return {0.0, 2000, 1, 1, 0, 1}; }

netres_status netres_optimize_ngo(const netres_graph* g, netres_dynamics d, double w_tot, double w_min,
                                  netres_opt_options o, netres_opt_result** out) {
    return guard([&] {
        need(g, "graph");
        need(out, "out");
        netres::NgoProblem p;
        p.graph = g->g;
        p.params = params_of(d);
        p.h = d.h;
        p.w_tot = w_tot;
        p.w_min = w_min;
        *out = new netres_opt_result{netres::optimize_ngo(p, options_of(o)), g->g.edges()};
    });
}

netres_status netres_optimize_ago(const netres_ago_problem* p, netres_opt_options o, netres_opt_result** out) {
    return guard([&] {
        need(p, "problem");
        need(out, "out");
        *out = new netres_opt_result{netres::optimize_ago(p->p, options_of(o)), p->p.aux_edges()};
    });
}

void netres_opt_result_free(netres_opt_result* r) { delete r; }

double netres_opt_j0(const netres_opt_result* r) { return r ? r->r.j0 : 0.0; }

double netres_opt_j_star(const netres_opt_result* r) { return r ? r->r.j_star : 0.0; }

double netres_opt_j_main(const netres_opt_result* r) { return r ? r->r.j_main : 0.0; }

double netres_opt_c_star(const netres_opt_result* r) { return r ? r->r.c_star : 0.0; }

double netres_opt_percent_decrease(const netres_opt_result* r) { return r ? r->r.percent_decrease : 0.0; }

int netres_opt_converged(const netres_opt_result* r) { return r && r->r.converged ? 1 : 0; }

int netres_opt_iterations(const netres_opt_result* r) { return r ? r->r.iterations : 0; }

double netres_opt_max_residual(const netres_opt_result* r) { return r ? r->r.residuals.max() : 0.0; }

size_t netres_opt_variable_count(const netres_opt_result* r) {
    return r ? static_cast<std::size_t>(r->r.w_star.size()) : 0;
}

netres_status netres_opt_w_star(const netres_opt_result* r, double* out) {
    return guard([&] {
        need(r, "result");
        need(out, "out");
        write_vector(r->r.w_star, out);
    });
}

size_t netres_opt_trajectory_length(const netres_opt_result* r) { return r ? r->r.iterates.size() : 0; }

netres_status netres_opt_trajectory(const netres_opt_result* r, double* out) {
    return guard([&] {
        need(r, "result");
        need(out, "out");
        std::copy(r->r.iterates.begin(), r->r.iterates.end(), out);
    });
}

netres_status netres_opt_to_json(const netres_opt_result* r, char** out) {
    return guard([&] {
        need(r, "result");
        need(out, "out");
        *out = dup_string(netres::to_json(r->r, r->edges));
    });
}

netres_status netres_percent_decrease(double j0, double j_star, double* out) {
    return guard([&] {
        need(out, "out");
        *out = netres::percent_decrease(j0, j_star);
    });
}

netres_study_base netres_study_base_default(void) {
    netres_study_base b;
    b.method = "ngo";
    b.graph = "rcg";
    b.n = 10;
    b.edges = 0;
    b.weight_perturbation = 0.3;
    b.dynamics = netres_dynamics_default();
    b.w_min = 1e-3;
    b.gamma_aux = 1e-6;
    b.r_m = 5.0;
    b.topology = NETRES_AUX_COMPLETE;
    b.seed = 1;
    b.options = netres_opt_options_default();
    return b;
}

netres_status netres_param_study(const netres_study_base* base, const char* param, const double* values,
                                 size_t count, int threads, char** csv) {
    return guard([&] {
        need(base, "base");
        need(param, "param");
        need(values, "values");
        need(csv, "csv");
        netres::StudyBase b;
        b.method = base->method ? base->method : "ngo";
        b.graph = base->graph ? base->graph : "rcg";
        b.n = base->n;
        b.edges = base->edges;
        b.weight_perturbation = base->weight_perturbation;
        b.params = params_of(base->dynamics);
        b.h = base->dynamics.h;
        b.w_min = base->w_min;
        b.gamma_aux = base->gamma_aux;
        b.r_m = base->r_m;
        b.topology = base->topology == NETRES_AUX_MIRRORED ? netres::AuxTopology::mirrored
                                                           : netres::AuxTopology::complete;
        b.seed = base->seed;
        b.options = options_of(base->options);
        const auto rows = netres::param_study(b, param, std::vector<double>(values, values + count), threads);
        *csv = dup_string(netres::to_csv(rows));
    });
}

// ---- attacks and simulation -----------------------------------------------------

netres_status netres_sample_attack(const netres_graph* g, netres_dynamics d, uint64_t seed, uint64_t index,
                                   double* f_out, double* nu_out) {
    return guard([&] {
        need(g, "graph");
        need(f_out, "f_out");
        need(nu_out, "nu_out");
        const netres::AttackModel attack{d.h, netres::natural_frequencies(g->g, params_of(d))};
        netres::Rng rng = netres::Rng(seed, 0x41545441).split(index);
        const auto s = netres::sample_attack(attack, g->g.vertex_count(), rng);
        write_vector(s.f, f_out);
        *nu_out = s.nu;
    });
}

netres_sim_options netres_sim_options_default(void) { return {0.0, 0.0, 1e-3, 1, 1e-4, 8}; }

netres_status netres_simulate_main(const netres_graph* g, netres_dynamics d, const double* f, double nu,
                                   netres_sim_options o, netres_trace** out) {
    return guard([&] {
        need(g, "graph");
        need(f, "f");
        need(out, "out");
        const auto sys = netres::make_system(g->g, params_of(d));
        const auto fv = copy_vector(f, static_cast<std::size_t>(g->g.vertex_count()));
        *out = new netres_trace{netres::simulate_dynamics(sys, fv, nu, sim_options_of(o))};
    });
}

netres_status netres_simulate_combined(const netres_ago_problem* p, const double* f, double nu,
                                       netres_sim_options o, netres_trace** out) {
    return guard([&] {
        need(p, "problem");
        need(f, "f");
        need(out, "out");
        const auto sys = netres::make_system(p->p.combined());
        const auto fv = copy_vector(f, static_cast<std::size_t>(p->p.n()));
        *out = new netres_trace{netres::simulate_dynamics(sys, fv, nu, sim_options_of(o))};
    });
}

void netres_trace_free(netres_trace* t) { delete t; }

double netres_trace_reference(const netres_trace* t) { return t ? t->t.reference : 0.0; }

double netres_trace_final_envelope_ratio(const netres_trace* t) { return t ? t->t.final_envelope_ratio : 0.0; }

double netres_trace_final_envelope(const netres_trace* t) {
    return t && !t->t.envelope.empty() ? t->t.envelope.back() : 0.0;
}

int netres_trace_settled(const netres_trace* t) { return t && t->t.settled ? 1 : 0; }

double netres_trace_dt(const netres_trace* t) { return t ? t->t.dt : 0.0; }

int64_t netres_trace_steps(const netres_trace* t) { return t ? t->t.steps : 0; }

netres_status netres_trace_csv(const netres_trace* t, char** out) {
    return guard([&] {
        need(t, "trace");
        need(out, "out");
        *out = dup_string(netres::to_csv(t->t));
    });
}

}  // extern "C"
