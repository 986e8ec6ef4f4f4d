#include "core/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/spectral.hpp"

namespace netres {

namespace {

struct PgdProblem {
    std::function<double(const Vector&)> objective;
    std::function<Vector(const Vector&)> gradient;
    std::function<Vector(const Vector&)> project;
};

struct PgdRun {
    Vector x;
    double fx = 0.0;
    double f0 = 0.0;
    std::vector<double> iterates;
    int iterations = 0;
    bool converged = false;
    std::string stop_reason;
};

double safe_eval(const PgdProblem& p, const Vector& x) {
    try {
        const double v = p.objective(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
    }
}

PgdRun run_pgd(const PgdProblem& p, const Vector& start, const OptOptions& opts) {
    PgdRun r;
    r.x = p.project(start);
    r.fx = p.objective(r.x);
    r.f0 = r.fx;
    r.iterates.push_back(r.fx);
    Vector g = p.gradient(r.x);

    const double x_scale = std::max(1.0, r.x.cwiseAbs().maxCoeff());
    const double g_scale = g.cwiseAbs().maxCoeff();
    double step = g_scale > 0.0 ? x_scale / g_scale : 1.0;

    Vector x_prev;
    Vector g_prev;
    for (; r.iterations < opts.max_iter; ++r.iterations) {
        const double tol = opts.tol > 0.0 ? opts.tol : 1e-8 * std::max(1.0, std::abs(r.fx));
        const double pg = (r.x - p.project(r.x - g)).norm();
        if (pg <= tol) {
            r.converged = true;
            r.stop_reason = "projected gradient below tolerance";
            return r;
        }
        if (x_prev.size()) {
            const Vector s = r.x - x_prev;
            const Vector y = g - g_prev;
            const double sy = s.dot(y);
            step = sy > 0.0 ? s.squaredNorm() / sy : 2.0 * step;
            step = std::clamp(step, 1e-30, 1e30);
        }

        Vector trial;
        double ft = 0.0;
        bool accepted = false;
        double alpha = step;
        while (alpha >= opts.min_step) {
            trial = p.project(r.x - alpha * g);
            const double decrease = g.dot(trial - r.x);
            ft = safe_eval(p, trial);
            if (ft <= r.fx + opts.armijo * decrease) {
                accepted = true;
                break;
            }
            alpha *= opts.shrink;
        }
        if (!accepted || ft > r.fx) {
            r.converged = true;
            r.stop_reason = "line-search step below floor";
            return r;
        }
        if (trial == r.x) {
            r.converged = true;
            r.stop_reason = "projection fixed point";
            return r;
        }
        x_prev = std::move(r.x);
        g_prev = std::move(g);
        r.x = std::move(trial);
        r.fx = ft;
        r.iterates.push_back(ft);
        g = p.gradient(r.x);
        step = alpha;
    }
    r.stop_reason = "iteration cap";
    return r;
}

std::vector<Vector> start_points(const Vector& x0, const OptOptions& opts,
                                 const std::function<Vector(const Vector&)>& project) {
    require(opts.starts >= 1, "need at least one start");
    std::vector<Vector> out{x0};
    const Rng root(opts.seed, 0x53544152);
    for (int s = 1; s < opts.starts; ++s) {
        Rng rng = root.split(static_cast<std::uint64_t>(s));
        Vector x = x0;
        const double mean = x0.size() ? std::max(x0.cwiseAbs().mean(), 1e-3) : 1.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            x[i] = std::max(0.0, x[i] + mean * (rng.uniform() - 0.5));
        }
        out.push_back(project(x));
    }
    return out;
}

std::vector<PgdRun> run_starts(const PgdProblem& p, const std::vector<Vector>& starts, const OptOptions& opts) {
    std::vector<PgdRun> runs(starts.size());
    std::vector<std::exception_ptr> errors(starts.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < starts.size(); i = next++) {
            try {
                runs[i] = run_pgd(p, starts[i], opts);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    int threads = opts.threads > 0 ? opts.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, static_cast<int>(starts.size()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (errors.front()) {
        std::rethrow_exception(errors.front());
    }
    return runs;
}

void fill_result(OptResult& out, std::vector<PgdRun>& runs, const std::vector<bool>& failed) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        StartLog log;
        if (failed[i]) {
            log.stop_reason = "failed";
            log.j0 = log.j_star = std::numeric_limits<double>::quiet_NaN();
        } else {
            log = {runs[i].f0, runs[i].fx, runs[i].iterations, runs[i].converged, runs[i].stop_reason};
            if (runs[i].fx < runs[best].fx) {
                best = i;
            }
        }
        out.starts.push_back(log);
    }
    auto& b = runs[best];
    out.j0 = runs.front().f0;
    out.j_star = b.fx;
    out.iterates = std::move(b.iterates);
    out.iterations = b.iterations;
    out.converged = b.converged;
    out.stop_reason = b.stop_reason;
    out.percent_decrease = percent_decrease(out.j0, out.j_star);
}

double central_or_forward(const std::function<double(const Vector&)>& f, Vector& x, Eigen::Index i, double fx) {
    const double xi = x[i];
    const double step = 1e-6 * std::max(1.0, std::abs(xi));
    if (xi - step < 0.0) {
        x[i] = xi + step;
        const double up = f(x);
        x[i] = xi;
        return (up - fx) / step;
    }
    x[i] = xi + step;
    const double up = f(x);
    x[i] = xi - step;
    const double down = f(x);
    x[i] = xi;
    return (up - down) / (2.0 * step);
}

}  // namespace

double ConstraintResiduals::max() const { return std::max({equality, bound, budget}); }

Vector project_ngo(const Vector& w_raw, double w_tot, double w_min) {
    const auto m = w_raw.size();
    require(m >= 1, "projection needs at least one edge");
    require(w_raw.allFinite(), "projection input must be finite");
    const double mass = w_tot - static_cast<double>(m) * w_min;
    if (mass < -1e-12 * std::max(1.0, std::abs(w_tot))) {
        fail(Errc::infeasible, "weight budget w_tot is below m * w_min");
    }
    const Vector u = w_raw.array() - w_min;
    std::vector<double> sorted(u.data(), u.data() + m);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cum = 0.0;
    double theta = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
        cum += sorted[static_cast<std::size_t>(k)];
        const double t = (cum - std::max(mass, 0.0)) / static_cast<double>(k + 1);
        if (sorted[static_cast<std::size_t>(k)] - t > 0.0 || k == 0) {
            theta = t;
        }
    }
    Vector w = (u.array() - theta).max(0.0) + w_min;
    // Push the rounding residual onto the largest entry.
    Eigen::Index top = 0;
    w.maxCoeff(&top);
    w[top] += w_tot - w.sum();
    return w;
}

std::pair<Vector, double> project_ago(const Vector& w_raw, double c_raw, double budget, int n) {
    require(budget >= 0.0 && std::isfinite(budget), "budget must be >= 0");
    require(n >= 1, "n must be >= 1");
    require(w_raw.allFinite() && std::isfinite(c_raw), "projection input must be finite");
    const auto m = w_raw.size();
    Vector y(m + 1);
    y << w_raw, c_raw;
    Vector a = Vector::Ones(m + 1);
    a[m] = n;
    Vector x = y.cwiseMax(0.0);
    if (a.dot(x) <= budget) {
        return {x.head(m), x[m]};
    }
    // x(lambda) = max(y - lambda a, 0); find lambda with a'x = budget.
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i <= m; ++i) {
        if (y[i] > 0.0) {
            idx.push_back(i);
        }
    }
    std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return y[i] / a[i] > y[j] / a[j]; });
    double say = 0.0;
    double saa = 0.0;
    double lambda = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto i = idx[k];
        say += a[i] * y[i];
        saa += a[i] * a[i];
        const double l = (say - budget) / saa;
        const double next = k + 1 < idx.size() ? y[idx[k + 1]] / a[idx[k + 1]] : 0.0;
        if (l >= next) {
            lambda = l;
            break;
        }
    }
    x = (y - lambda * a).cwiseMax(0.0);
    // Clean up rounding so the budget holds exactly.
    const double used = a.dot(x);
    if (used > budget && used > 0.0) {
        x *= budget / used;
    }
    return {x.head(m), x[m]};
}

double percent_decrease(double j0, double j_star) {
    require(std::isfinite(j0) && j0 > 0.0, "J0 must be > 0");
    return std::abs(j0 - j_star) / j0 * 100.0;
}

OptResult optimize_ngo(const NgoProblem& problem, const OptOptions& options) {
    problem.validate();
    const double w_tot = problem.budget();
    const double w_min = problem.w_min;
    PgdProblem p;
    p.objective = [&](const Vector& w) { return ngo_objective(problem, w); };
    p.gradient = [&](const Vector& w) { return ngo_gradient(problem, w).gradient; };
    p.project = [=](const Vector& w) { return project_ngo(w, w_tot, w_min); };

    const auto starts = start_points(problem.graph.weights(), options, p.project);
    auto runs = run_starts(p, starts, options);
    std::vector<bool> failed(runs.size(), false);
    for (std::size_t i = 0; i < runs.size(); ++i) {
        failed[i] = runs[i].x.size() == 0;
    }

    OptResult out;
    fill_result(out, runs, failed);
    std::size_t best = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (!failed[i] && runs[i].fx == out.j_star) {
            best = i;
            break;
        }
    }
    out.w_star = runs[best].x;
    out.residuals.equality = std::abs(out.w_star.sum() - w_tot);
    out.residuals.bound = std::max(0.0, w_min - out.w_star.minCoeff());
    out.gradient = "analytic";
    return out;
}

Vector ago_gradient(const AgoProblem& problem, const Vector& w, double c, AgoGradient mode) {
    const int n = problem.n();
    const auto edges = problem.aux_edges();
    const auto m = static_cast<Eigen::Index>(edges.size());
    require(w.size() == m, "aux weight vector has the wrong length");
    const auto main_omegas = natural_frequencies(problem.main, problem.params);
    const double gamma = problem.params.gamma;
    const double gt = problem.gamma_aux;
    const double h = problem.h;
    const double eps = problem.params.epsilon;

    auto full = [&](const Vector& x) {
        const auto aux = natural_frequencies(n, edges, x.head(m), eps);
        return ago_objective_from_frequencies(main_omegas, aux, x[m], gamma, gt, h).value;
    };
    Vector x(m + 1);
    x << w, c;
    Vector g(m + 1);

    if (mode == AgoGradient::spectral) {
        const auto eig = sym_eig(laplacian(n, edges, w));
        double gap = std::numeric_limits<double>::infinity();
        for (int k = 1; k < n; ++k) {
            gap = std::min(gap, eig.values[k] - eig.values[k - 1]);
        }
        if (gap >= 1e-8) {
            const Vector aux = (eig.values.array() + eps).sqrt();
            Vector dx(n);
            for (int k = 0; k < n; ++k) {
                const double xt = aux[k] * aux[k];
                const double step = 1e-6 * std::max(1.0, xt);
                const double up = ago_mode_term(main_omegas, k, std::sqrt(xt + step), c, gamma, gt, h);
                const double down = ago_mode_term(main_omegas, k, std::sqrt(xt - step), c, gamma, gt, h);
                dx[k] = (up - down) / (2.0 * step);
            }
            for (Eigen::Index l = 0; l < m; ++l) {
                const auto [u, v] = edges[static_cast<std::size_t>(l)];
                g[l] = ((eig.vectors.row(u) - eig.vectors.row(v)).array().square().transpose() * dx.array()).sum();
            }
            auto by_c = [&](const Vector& cx) {
                return ago_objective_from_frequencies(main_omegas, aux, cx[0], gamma, gt, h).value;
            };
            Vector cv(1);
            cv[0] = c;
            g[m] = central_or_forward(by_c, cv, 0, by_c(cv));
            return g;
        }
    }
    const double fx = full(x);
    for (Eigen::Index i = 0; i <= m; ++i) {
        g[i] = central_or_forward(full, x, i, fx);
    }
    return g;
}

OptResult optimize_ago(const AgoProblem& problem, const OptOptions& options) {
    problem.validate();
    const int n = problem.n();
    const auto edges = problem.aux_edges();
    const auto m = static_cast<Eigen::Index>(edges.size());
    const double budget = problem.budget();
    const auto main_omegas = natural_frequencies(problem.main, problem.params);

    auto split = [m](const Vector& x) { return std::pair<Vector, double>{x.head(m), x[m]}; };
    PgdProblem p;
    p.objective = [&](const Vector& x) {
        const auto aux = natural_frequencies(n, edges, x.head(m), problem.params.epsilon);
        return ago_objective_from_frequencies(main_omegas, aux, x[m], problem.params.gamma, problem.gamma_aux,
                                              problem.h)
            .value;
    };
    p.project = [=](const Vector& x) {
        auto [w, c] = project_ago(x.head(m), x[m], budget, n);
        Vector y(m + 1);
        y << w, c;
        return y;
    };

    Vector x0(m + 1);
    x0 << problem.aux_weights, problem.c;
    x0 = p.project(x0);

    AgoGradient mode = options.ago_gradient;
    std::string mode_name = mode == AgoGradient::spectral ? "spectral" : "finite_difference";
    if (mode == AgoGradient::spectral) {
        const auto [w0, c0] = split(x0);
        const Vector fast = ago_gradient(problem, w0, c0, AgoGradient::spectral);
        const Vector slow = ago_gradient(problem, w0, c0, AgoGradient::finite_difference);
        const double scale = std::max(slow.cwiseAbs().maxCoeff(), 1e-300);
        if ((fast - slow).cwiseAbs().maxCoeff() > 1e-4 * scale) {
            mode = AgoGradient::finite_difference;
            mode_name = "finite_difference (spectral check failed)";
        }
    }
    p.gradient = [&, mode](const Vector& x) {
        const auto [w, c] = split(x);
        return ago_gradient(problem, w, c, mode);
    };

    const auto starts = start_points(x0, options, p.project);
    auto runs = run_starts(p, starts, options);
    std::vector<bool> failed(runs.size(), false);
    for (std::size_t i = 0; i < runs.size(); ++i) {
        failed[i] = runs[i].x.size() == 0;
    }

    OptResult out;
    out.ago = true;
    fill_result(out, runs, failed);
    std::size_t best = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (!failed[i] && runs[i].fx == out.j_star) {
            best = i;
            break;
        }
    }
    const auto [w_star, c_star] = split(runs[best].x);
    out.w_star = w_star;
    out.c_star = c_star;
    out.j_main = ago_objective_from_frequencies(main_omegas, main_omegas, 0.0, problem.params.gamma,
                                                problem.gamma_aux, problem.h)
                     .value;
    out.residuals.bound = std::max(0.0, -std::min(w_star.size() ? w_star.minCoeff() : 0.0, c_star));
    out.residuals.budget = std::max(0.0, w_star.sum() + n * c_star - budget);
    out.gradient = mode_name;
    return out;
}

std::vector<StudyRow> param_study(const StudyBase& base, const std::string& param, const std::vector<double>& values,
                                  int threads) {
    static const std::vector<std::string> known{"n",     "edges", "weight_perturbation", "epsilon", "gamma",
                                                "h",     "w_min", "gamma_aux",           "r_m"};
    require(std::find(known.begin(), known.end(), param) != known.end(), "unknown study parameter '" + param + "'");
    require(!values.empty(), "study grid is empty");
    require(base.method == "ngo" || base.method == "ago", "study method must be ngo or ago");
    require(base.graph == "rcg" || base.graph == "rig", "study graph must be rcg or rig");

    std::vector<StudyRow> rows(values.size());
    const Rng root(base.seed, 0x50415241);
    auto run_point = [&](std::size_t i) {
        StudyBase b = base;
        const double v = values[i];
        if (param == "n") b.n = static_cast<int>(std::lround(v));
        if (param == "edges") b.edges = static_cast<int>(std::lround(v));
        if (param == "weight_perturbation") b.weight_perturbation = v;
        if (param == "epsilon") b.params.epsilon = v;
        if (param == "gamma") b.params.gamma = v;
        if (param == "h") b.h = v;
        if (param == "w_min") b.w_min = v;
        if (param == "gamma_aux") b.gamma_aux = v;
        if (param == "r_m") b.r_m = v;
        b.options.threads = 1;

        StudyRow row{param, v, 0.0, false};
        try {
            const std::uint64_t seed = root.split(i).key();
            const WeightedGraph g = b.graph == "rcg" ? gen_rcg(b.n, b.weight_perturbation, seed)
                                                     : gen_rig(b.n, b.edges, b.weight_perturbation, seed);
            OptResult r;
            if (b.method == "ngo") {
                NgoProblem pr;
                pr.graph = g;
                pr.params = b.params;
                pr.h = b.h;
                pr.w_min = b.w_min;
                r = optimize_ngo(pr, b.options);
            } else {
                r = optimize_ago(default_ago_problem(g, b.params, b.topology, b.gamma_aux, b.h, b.r_m), b.options);
            }
            row.converged = r.converged;
            row.percent_decrease = r.converged ? r.percent_decrease : 0.0;
        } catch (const std::exception&) {
            row.converged = false;
            row.percent_decrease = 0.0;
        }
        rows[i] = row;
    };

    int t = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    t = std::clamp(t, 1, static_cast<int>(values.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            run_point(i);
        }
    };
    if (t == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < t; ++k) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    return rows;
}

std::string to_csv(const std::vector<StudyRow>& rows) {
    std::string out = "param,value,percent_decrease,converged\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%s\n", r.param.c_str(), r.value, r.percent_decrease,
                      r.converged ? "true" : "false");
        out += buf;
    }
    return out;
}

}  // namespace netres
