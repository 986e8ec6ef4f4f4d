// netres-cli: batch front end over the netres C library.
//
//   netres-cli <generate|analyze|optimize|validate|simulate|sweep>
//              [--config FILE] [--seed N] [--out DIR] [--graph FILE]
//
// The config is a JSON object; see README.md for the recognised keys.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "netres/netres.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode {
    exit_ok = 0,
    exit_internal = 1,
    exit_usage = 2,
    exit_ingestion = 3,
    exit_infeasible = 4,
    exit_not_converged = 5,
    exit_numerical = 6,
};

struct CliError : std::runtime_error {
    int code;
    CliError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

int exit_code_for(netres_status s) {
    switch (s) {
    case NETRES_OK:
        return exit_ok;
    case NETRES_ERR_INVALID_ARGUMENT:
        return exit_usage;
    case NETRES_ERR_PARSE:
    case NETRES_ERR_IO:
        return exit_ingestion;
    case NETRES_ERR_INFEASIBLE:
        return exit_infeasible;
    case NETRES_ERR_NOT_CONVERGED:
        return exit_not_converged;
    case NETRES_ERR_NUMERICAL:
        return exit_numerical;
    case NETRES_ERR_INTERNAL:
        return exit_internal;
    }
    return exit_internal;
}

void check(netres_status s, const std::string& what) {
    if (s != NETRES_OK) {
        throw CliError(exit_code_for(s), what + ": " + netres_status_name(s) + ": " + netres_last_error());
    }
}

struct GraphDeleter {
    void operator()(netres_graph* g) const { netres_graph_free(g); }
};
struct AgoDeleter {
    void operator()(netres_ago_problem* p) const { netres_ago_problem_free(p); }
};
struct OptDeleter {
    void operator()(netres_opt_result* r) const { netres_opt_result_free(r); }
};
struct McDeleter {
    void operator()(netres_mc_result* r) const { netres_mc_result_free(r); }
};
struct TraceDeleter {
    void operator()(netres_trace* t) const { netres_trace_free(t); }
};
using Graph = std::unique_ptr<netres_graph, GraphDeleter>;
using Ago = std::unique_ptr<netres_ago_problem, AgoDeleter>;
using Opt = std::unique_ptr<netres_opt_result, OptDeleter>;
using Mc = std::unique_ptr<netres_mc_result, McDeleter>;
using Trace = std::unique_ptr<netres_trace, TraceDeleter>;

std::string take(char* s) {
    std::string out = s ? s : "";
    netres_string_free(s);
    return out;
}

// ---------------------------------------------------------------------------
// Config

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"", {"seed", "graph", "dynamics", "ngo", "ago", "optimizer", "monte_carlo", "simulation", "sweep", "analyze"}},
        {"graph", {"source", "n", "edges", "weight_perturbation", "seed", "path", "center", "radius"}},
        {"dynamics", {"epsilon", "gamma", "h"}},
        {"ngo", {"w_tot", "w_min"}},
        {"ago", {"topology", "gamma_aux", "r_m", "c", "alpha", "aux_weights"}},
        {"optimizer", {"method", "tol", "max_iter", "starts", "seed", "threads", "spectral_gradient"}},
        {"monte_carlo", {"system", "samples", "batch_size", "seed", "threads"}},
        {"simulation",
         {"system", "trajectories", "seed", "compare_optimized", "dt", "t_end", "settle_tol", "refine_dt", "refine_tol",
          "records_per_period"}},
        {"sweep",
         {"kind", "param", "values", "grid", "method", "graph", "n", "edges", "weight_perturbation", "topology",
          "optimize_first", "threads"}},
        {"sweep.grid", {"min", "max", "points", "log"}},
        {"analyze", {"bins", "system"}},
    };
    return s;
}

void validate_keys(const json& j, const std::string& path) {
    if (!j.is_object()) {
        throw CliError(exit_usage, "config: '" + (path.empty() ? std::string("<root>") : path) + "' must be an object");
    }
    const auto& allowed = schema().at(path);
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) {
            throw CliError(exit_usage, "config: unknown key '" + (path.empty() ? key : path + "." + key) + "'");
        }
        const std::string child = path.empty() ? key : path + "." + key;
        if (schema().count(child)) {
            validate_keys(value, child);
        }
    }
}

class Config {
public:
    explicit Config(json root) : root_(std::move(root)) { validate_keys(root_, ""); }

    [[nodiscard]] const json& section(const std::string& name) const {
        static const json empty = json::object();
        auto it = root_.find(name);
        return it == root_.end() ? empty : *it;
    }

    template <typename T>
    [[nodiscard]] T get(const std::string& sec, const std::string& key, T fallback) const {
        const json& s = section(sec);
        auto it = s.find(key);
        if (it == s.end()) {
            return fallback;
        }
        try {
            return it->get<T>();
        } catch (const json::exception&) {
            throw CliError(exit_usage, "config: '" + sec + "." + key + "' has the wrong type");
        }
    }

    [[nodiscard]] bool has(const std::string& sec, const std::string& key) const { return section(sec).contains(key); }

    // Per-section seed, then the top-level seed, then the --seed flag.
    [[nodiscard]] std::uint64_t seed(const std::string& sec) const {
        if (seed_override_) {
            return *seed_override_;
        }
        if (has(sec, "seed")) {
            return get<std::uint64_t>(sec, "seed", 1);
        }
        auto it = root_.find("seed");
        return it == root_.end() ? 1 : it->get<std::uint64_t>();
    }

    void override_seed(std::uint64_t s) { seed_override_ = s; }
    void override_graph_path(const std::string& p) {
        root_["graph"]["source"] = "file";
        root_["graph"]["path"] = p;
    }

private:
    json root_;
    std::optional<std::uint64_t> seed_override_;
};

Config load_config(const std::string& path) {
    if (path.empty()) {
        return Config(json::object());
    }
    std::ifstream f(path);
    if (!f) {
        throw CliError(exit_ingestion, "cannot open config '" + path + "'");
    }
    try {
        return Config(json::parse(f, nullptr, true, true));
    } catch (const json::parse_error& e) {
        throw CliError(exit_ingestion, "config '" + path + "': " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Builders

netres_dynamics dynamics_of(const Config& c) {
    netres_dynamics d = netres_dynamics_default();
    d.epsilon = c.get("dynamics", "epsilon", d.epsilon);
    d.gamma = c.get("dynamics", "gamma", d.gamma);
    d.h = c.get("dynamics", "h", d.h);
    return d;
}

struct LoadedGraph {
    Graph graph;
    std::vector<int> ids;  // original ids for ego subgraphs
};

LoadedGraph build_graph(const Config& c) {
    const auto source = c.get<std::string>("graph", "source", "rcg");
    const int n = c.get("graph", "n", 10);
    const double wp = c.get("graph", "weight_perturbation", 0.3);
    const auto seed = c.seed("graph");
    LoadedGraph out;
    netres_graph* g = nullptr;
    if (source == "rcg") {
        check(netres_graph_rcg(n, wp, seed, &g), "generate rcg");
    } else if (source == "rig") {
        const int m = c.get("graph", "edges", n * (n - 1) / 4);
        check(netres_graph_rig(n, m, wp, seed, &g), "generate rig");
    } else if (source == "file" || source == "ego") {
        const auto path = c.get<std::string>("graph", "path", "");
        if (path.empty()) {
            throw CliError(exit_usage, "config: graph.path is required for source '" + source + "'");
        }
        check(netres_graph_load(path.c_str(), &g), "load graph '" + path + "'");
        if (source == "ego") {
            Graph base(g);
            const int center = c.get("graph", "center", 1) - 1;
            const int radius = c.get("graph", "radius", 2);
            std::vector<int> ids(static_cast<std::size_t>(netres_graph_vertex_count(base.get())));
            netres_graph* sub = nullptr;
            check(netres_graph_ego(base.get(), center, radius, &sub, ids.data(), ids.size()), "ego subgraph");
            g = sub;
            ids.resize(static_cast<std::size_t>(netres_graph_vertex_count(sub)));
            out.ids = std::move(ids);
        }
    } else {
        throw CliError(exit_usage, "config: graph.source must be rcg, rig, file or ego");
    }
    out.graph.reset(g);
    return out;
}

netres_aux_topology topology_of(const std::string& s) {
    if (s == "mirrored") {
        return NETRES_AUX_MIRRORED;
    }
    if (s == "complete") {
        return NETRES_AUX_COMPLETE;
    }
    throw CliError(exit_usage, "config: aux topology must be mirrored or complete");
}

Ago build_ago(const Config& c, const netres_graph* main) {
    const auto d = dynamics_of(c);
    const auto topo = topology_of(c.get<std::string>("ago", "topology", "complete"));
    netres_ago_problem* p = nullptr;
    check(netres_ago_problem_create(main, d, topo, c.get("ago", "gamma_aux", 1e-6), c.get("ago", "r_m", 5.0), &p),
          "build aux problem");
    Ago ago(p);
    const auto m = netres_ago_problem_aux_edge_count(p);
    std::vector<double> w(m);
    double coupling = 0.0;
    check(netres_ago_problem_get(p, w.data(), &coupling), "read aux problem");
    bool changed = false;
    if (c.has("ago", "alpha")) {
        if (topo != NETRES_AUX_MIRRORED) {
            throw CliError(exit_usage, "config: ago.alpha needs the mirrored topology");
        }
        const double alpha = c.get("ago", "alpha", 1.0);
        std::vector<double> main_w(m);
        check(netres_graph_edges(main, nullptr, nullptr, main_w.data()), "read main weights");
        for (std::size_t i = 0; i < m; ++i) {
            w[i] = alpha * main_w[i];
        }
        changed = true;
    }
    if (c.has("ago", "aux_weights")) {
        w = c.get<std::vector<double>>("ago", "aux_weights", {});
        changed = true;
    }
    if (c.has("ago", "c")) {
        coupling = c.get("ago", "c", coupling);
        changed = true;
    }
    if (changed) {
        check(netres_ago_problem_set(p, w.data(), w.size(), coupling), "set aux weights");
    }
    return ago;
}

netres_opt_options opt_options_of(const Config& c) {
    auto o = netres_opt_options_default();
    o.tol = c.get("optimizer", "tol", o.tol);
    o.max_iter = c.get("optimizer", "max_iter", o.max_iter);
    o.starts = c.get("optimizer", "starts", o.starts);
    o.seed = c.seed("optimizer");
    o.threads = c.get("optimizer", "threads", o.threads);
    o.ago_spectral_gradient = c.get("optimizer", "spectral_gradient", true) ? 1 : 0;
    return o;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) {
        throw CliError(exit_ingestion, "cannot write '" + p.string() + "'");
    }
    f << content;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_generate(const Config& c, const fs::path& out) {
    auto lg = build_graph(c);
    check(netres_graph_save(lg.graph.get(), (out / "graph.txt").c_str()), "write graph");
    char* js = nullptr;
    check(netres_graph_to_json(lg.graph.get(), lg.ids.empty() ? nullptr : lg.ids.data(), lg.ids.size(), &js),
          "graph json");
    write_file(out / "graph.json", take(js));
    std::cout << "wrote " << (out / "graph.txt").string() << " (n=" << netres_graph_vertex_count(lg.graph.get())
              << ", m=" << netres_graph_edge_count(lg.graph.get()) << ")\n";
    return exit_ok;
}

int cmd_analyze(const Config& c, const fs::path& out) {
    auto lg = build_graph(c);
    const auto* g = lg.graph.get();
    const auto d = dynamics_of(c);
    const int n = netres_graph_vertex_count(g);
    std::vector<double> lambda(static_cast<std::size_t>(n));
    std::vector<double> omega(static_cast<std::size_t>(n));
    check(netres_laplacian_spectrum(g, lambda.data()), "spectrum");
    check(netres_natural_frequencies(g, d.epsilon, omega.data()), "natural frequencies");
    double j = 0.0;
    check(netres_ngo_objective(g, d, &j), "objective");

    json report;
    report["n"] = n;
    report["m"] = netres_graph_edge_count(g);
    report["connected"] = netres_graph_is_connected(g) == 1;
    report["total_weight"] = netres_graph_total_weight(g);
    report["J"] = j;
    report["laplacian_eigenvalues"] = lambda;
    report["natural_frequencies"] = omega;
    if (c.get<std::string>("analyze", "system", "main") == "combined") {
        auto ago = build_ago(c, g);
        double jt = 0.0;
        int degenerate = 0;
        check(netres_ago_objective(ago.get(), &jt, &degenerate), "aux objective");
        report["J_tilde"] = jt;
        report["degenerate_pairs"] = degenerate;
    }
    char* csv = nullptr;
    check(netres_histogram_csv(lambda.data(), lambda.size(), c.get("analyze", "bins", 20), &csv), "histogram");
    write_file(out / "spectrum.csv", take(csv));
    write_file(out / "report.json", report.dump(2));
    std::cout << "J = " << fmt(j) << "\n";
    return exit_ok;
}

struct Optimized {
    Opt result;
    Graph graph;  // NGO: main graph with optimized weights
    Ago ago;      // AGO: problem at the optimized point
};

Optimized run_optimize(const Config& c, const netres_graph* g) {
    const auto method = c.get<std::string>("optimizer", "method", "ngo");
    const auto d = dynamics_of(c);
    const auto o = opt_options_of(c);
    Optimized out;
    netres_opt_result* r = nullptr;
    if (method == "ngo") {
        check(netres_optimize_ngo(g, d, c.get("ngo", "w_tot", 0.0), c.get("ngo", "w_min", 1e-3), o, &r), "optimize");
        out.result.reset(r);
        std::vector<double> w(netres_opt_variable_count(r));
        check(netres_opt_w_star(r, w.data()), "read optimum");
        netres_graph* og = nullptr;
        check(netres_graph_with_weights(g, w.data(), w.size(), &og), "optimized graph");
        out.graph.reset(og);
    } else if (method == "ago") {
        out.ago = build_ago(c, g);
        check(netres_optimize_ago(out.ago.get(), o, &r), "optimize");
        out.result.reset(r);
        std::vector<double> w(netres_opt_variable_count(r));
        check(netres_opt_w_star(r, w.data()), "read optimum");
        check(netres_ago_problem_set(out.ago.get(), w.data(), w.size(), netres_opt_c_star(r)), "apply optimum");
    } else {
        throw CliError(exit_usage, "config: optimizer.method must be ngo or ago");
    }
    return out;
}

int cmd_optimize(const Config& c, const fs::path& out) {
    auto lg = build_graph(c);
    auto opt = run_optimize(c, lg.graph.get());
    char* js = nullptr;
    check(netres_opt_to_json(opt.result.get(), &js), "result json");
    write_file(out / "result.json", take(js));
    if (opt.graph) {
        check(netres_graph_save(opt.graph.get(), (out / "optimized_graph.txt").c_str()), "write optimized graph");
    }
    const auto* r = opt.result.get();
    std::cout << "J0 = " << fmt(netres_opt_j0(r)) << ", J* = " << fmt(netres_opt_j_star(r)) << ", decrease "
              << netres_opt_percent_decrease(r) << "%, " << (netres_opt_converged(r) ? "converged" : "NOT converged")
              << " after " << netres_opt_iterations(r) << " iterations\n";
    return netres_opt_converged(r) ? exit_ok : exit_not_converged;
}

netres_mc_options mc_options_of(const Config& c) {
    auto o = netres_mc_options_default();
    o.samples = c.get<std::int64_t>("monte_carlo", "samples", o.samples);
    o.batch_size = c.get<std::int64_t>("monte_carlo", "batch_size", o.batch_size);
    o.threads = c.get("monte_carlo", "threads", o.threads);
    o.seed = c.seed("monte_carlo");
    return o;
}

int cmd_validate(const Config& c, const fs::path& out) {
    auto lg = build_graph(c);
    const auto* g = lg.graph.get();
    const auto d = dynamics_of(c);
    const auto o = mc_options_of(c);
    const auto system = c.get<std::string>("monte_carlo", "system", "main");
    double reference = 0.0;
    netres_mc_result* r = nullptr;
    if (system == "main") {
        check(netres_ngo_objective(g, d, &reference), "objective");
        check(netres_mc_main(g, d, o, &r), "monte carlo");
    } else if (system == "combined") {
        auto ago = build_ago(c, g);
        check(netres_ago_objective(ago.get(), &reference, nullptr), "aux objective");
        check(netres_mc_combined(ago.get(), o, &r), "monte carlo");
    } else {
        throw CliError(exit_usage, "config: monte_carlo.system must be main or combined");
    }
    Mc mc(r);
    char* csv = nullptr;
    check(netres_mc_running_csv(r, reference, &csv), "running csv");
    write_file(out / "running_average.csv", take(csv));
    const json summary{{"system", system},
                       {"samples", netres_mc_samples(r)},
                       {"mean", netres_mc_mean(r)},
                       {"standard_error", netres_mc_standard_error(r)},
                       {"reference", reference}};
    write_file(out / "validate.json", summary.dump(2));
    std::cout << "MC mean = " << fmt(netres_mc_mean(r)) << " +- " << fmt(netres_mc_standard_error(r))
              << ", closed form = " << fmt(reference) << "\n";
    return exit_ok;
}

netres_sim_options sim_options_of(const Config& c) {
    auto o = netres_sim_options_default();
    o.dt = c.get("simulation", "dt", o.dt);
    o.t_end = c.get("simulation", "t_end", o.t_end);
    o.settle_tol = c.get("simulation", "settle_tol", o.settle_tol);
    o.refine_dt = c.get("simulation", "refine_dt", true) ? 1 : 0;
    o.refine_tol = c.get("simulation", "refine_tol", o.refine_tol);
    o.records_per_period = c.get("simulation", "records_per_period", o.records_per_period);
    return o;
}

struct SimSummary {
    double mean_amplitude = 0.0;
    double mean_deviation = 0.0;
    int settled = 0;
};

// K trajectories with attacks drawn from the main graph's spectrum.
SimSummary simulate_set(const Config& c, const netres_graph* g, const netres_ago_problem* ago,
                        const netres_graph* attack_graph, const fs::path& dir, const std::string& label) {
    const auto d = dynamics_of(c);
    const auto o = sim_options_of(c);
    const int k = c.get("simulation", "trajectories", 20);
    const auto seed = c.seed("simulation");
    const int n = netres_graph_vertex_count(g);
    SimSummary s;
    std::vector<double> f(static_cast<std::size_t>(n));
    for (int i = 0; i < k; ++i) {
        double nu = 0.0;
        check(netres_sample_attack(attack_graph, d, seed, static_cast<std::uint64_t>(i), f.data(), &nu), "attack");
        netres_trace* t = nullptr;
        if (ago) {
            check(netres_simulate_combined(ago, f.data(), nu, o, &t), "simulate");
        } else {
            check(netres_simulate_main(g, d, f.data(), nu, o, &t), "simulate");
        }
        Trace trace(t);
        char* csv = nullptr;
        check(netres_trace_csv(t, &csv), "trace csv");
        char name[64];
        std::snprintf(name, sizeof name, "%s_%03d.csv", label.c_str(), i);
        write_file(dir / name, take(csv));
        s.mean_amplitude += netres_trace_final_envelope(t) / k;
        s.mean_deviation += std::abs(netres_trace_final_envelope_ratio(t) - 1.0) / k;
        s.settled += netres_trace_settled(t);
    }
    return s;
}

int cmd_simulate(const Config& c, const fs::path& out) {
    auto lg = build_graph(c);
    const auto* g = lg.graph.get();
    const fs::path dir = out / "traces";
    fs::create_directories(dir);
    json summary;
    const auto system = c.get<std::string>("simulation", "system", "main");
    if (system == "combined") {
        auto ago = build_ago(c, g);
        const auto s = simulate_set(c, g, ago.get(), g, dir, "combined");
        summary["combined"] = {{"mean_steady_amplitude", s.mean_amplitude},
                               {"mean_envelope_deviation", s.mean_deviation},
                               {"settled", s.settled}};
    } else if (system == "main") {
        const auto s = simulate_set(c, g, nullptr, g, dir, "initial");
        summary["initial"] = {{"mean_steady_amplitude", s.mean_amplitude},
                              {"mean_envelope_deviation", s.mean_deviation},
                              {"settled", s.settled}};
        if (c.get("simulation", "compare_optimized", false)) {
            auto opt = run_optimize(c, g);
            if (!opt.graph) {
                throw CliError(exit_usage, "config: compare_optimized needs optimizer.method = ngo");
            }
            // Same seeds; the adversary targets each graph's own spectrum.
            const auto so = simulate_set(c, opt.graph.get(), nullptr, opt.graph.get(), dir, "optimized");
            summary["optimized"] = {{"mean_steady_amplitude", so.mean_amplitude},
                                    {"mean_envelope_deviation", so.mean_deviation},
                                    {"settled", so.settled}};
            summary["amplitude_ratio"] = so.mean_amplitude / s.mean_amplitude;
        }
    } else {
        throw CliError(exit_usage, "config: simulation.system must be main or combined");
    }
    write_file(out / "simulate.json", summary.dump(2));
    std::cout << summary.dump(2) << "\n";
    return exit_ok;
}

std::vector<double> sweep_values(const Config& c) {
    if (c.has("sweep", "values")) {
        return c.get<std::vector<double>>("sweep", "values", {});
    }
    const json& grid = c.section("sweep").value("grid", json::object());
    const double lo = grid.value("min", 1e-6);
    const double hi = grid.value("max", 1e5);
    const int points = grid.value("points", 45);
    const bool log = grid.value("log", true);
    if (points < 1 || !(hi >= lo) || (log && lo <= 0.0)) {
        throw CliError(exit_usage, "config: sweep.grid needs points >= 1, max >= min (and min > 0 for log grids)");
    }
    std::vector<double> v;
    for (int i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        v.push_back(log ? std::pow(10.0, std::log10(lo) + t * (std::log10(hi) - std::log10(lo))) : lo + t * (hi - lo));
    }
    return v;
}

int cmd_sweep(const Config& c, const fs::path& out) {
    const auto kind = c.get<std::string>("sweep", "kind", "param");
    const auto values = sweep_values(c);
    if (kind == "damping") {
        auto lg = build_graph(c);
        Ago ago;
        if (c.get("sweep", "optimize_first", true)) {
            auto opt = run_optimize(c, lg.graph.get());
            if (!opt.ago) {
                throw CliError(exit_usage, "config: a damping sweep optimizes with optimizer.method = ago");
            }
            ago = std::move(opt.ago);
        } else {
            ago = build_ago(c, lg.graph.get());
        }
        char* csv = nullptr;
        check(netres_damping_sweep(ago.get(), values.data(), values.size(), &csv), "damping sweep");
        write_file(out / "damping_sweep.csv", take(csv));
    } else if (kind == "param") {
        auto base = netres_study_base_default();
        const auto method = c.get<std::string>("sweep", "method", "ngo");
        const auto graph = c.get<std::string>("sweep", "graph", "rcg");
        base.method = method.c_str();
        base.graph = graph.c_str();
        base.n = c.get("sweep", "n", base.n);
        base.edges = c.get("sweep", "edges", base.n * (base.n - 1) / 4);
        base.weight_perturbation = c.get("sweep", "weight_perturbation", base.weight_perturbation);
        base.dynamics = dynamics_of(c);
        base.w_min = c.get("ngo", "w_min", base.w_min);
        base.gamma_aux = c.get("ago", "gamma_aux", base.gamma_aux);
        base.r_m = c.get("ago", "r_m", base.r_m);
        base.topology = topology_of(c.get<std::string>("sweep", "topology", "complete"));
        base.seed = c.seed("sweep");
        base.options = opt_options_of(c);
        const auto param = c.get<std::string>("sweep", "param", "n");
        char* csv = nullptr;
        check(netres_param_study(&base, param.c_str(), values.data(), values.size(), c.get("sweep", "threads", 0),
                                 &csv),
              "parameter study");
        write_file(out / "param_study.csv", take(csv));
    } else {
        throw CliError(exit_usage, "config: sweep.kind must be param or damping");
    }
    std::cout << "swept " << values.size() << " points\n";
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"netres: resonance vulnerability analysis and spectrum optimization"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir = ".";
    std::string graph_path;
    std::optional<std::uint64_t> seed;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"generate", "write an edge-list graph (rcg, rig, ego subgraph)"},
        {"analyze", "objective value and spectrum histogram"},
        {"optimize", "NGO or AGO optimization"},
        {"validate", "Monte Carlo running average against the closed form"},
        {"simulate", "time-domain trajectories under sampled attacks"},
        {"sweep", "parameter study or auxiliary damping sweep"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--seed", seed, "override every seed in the config");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--graph", graph_path, "edge-list file (overrides graph.source)");
    }
    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg = load_config(config_path);
        if (seed) {
            cfg.override_seed(*seed);
        }
        if (!graph_path.empty()) {
            cfg.override_graph_path(graph_path);
        }
        const fs::path out(out_dir);
        fs::create_directories(out);
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "generate") return cmd_generate(cfg, out);
        if (cmd == "analyze") return cmd_analyze(cfg, out);
        if (cmd == "optimize") return cmd_optimize(cfg, out);
        if (cmd == "validate") return cmd_validate(cfg, out);
        if (cmd == "simulate") return cmd_simulate(cfg, out);
        if (cmd == "sweep") return cmd_sweep(cfg, out);
        return exit_usage;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_internal;
    }
}
