#pragma once

// Randomized property suites shared by the unit tests and the acceptance
// runner. Each returns the worst observed violation and a short note.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "core/ago.hpp"
#include "core/attack.hpp"
#include "core/graph.hpp"
#include "core/ngo.hpp"
#include "core/optimize.hpp"
#include "core/response.hpp"
#include "core/rng.hpp"
#include "core/spectral.hpp"

namespace netres::props {

struct Outcome {
    bool ok = true;
    double worst = 0.0;
    std::string note;

    void record(double violation, double limit, const std::string& what) {
        worst = std::max(worst, violation);
        if (!(violation <= limit) && ok) {
            ok = false;
            note = what;
        }
    }
};

inline Vector random_vector(Eigen::Index n, Rng& rng, double scale = 1.0) {
    Vector v(n);
    for (auto& x : v) {
        x = scale * rng.normal();
    }
    return v;
}

// Row sums vanish, symmetric, PSD with a zero eigenvalue per component.
inline Outcome laplacian_invariants(int trials = 40) {
    Outcome out;
    Rng rng(101);
    for (int t = 0; t < trials; ++t) {
        const int n = 2 + static_cast<int>(rng.below(14));
        const int max_e = n * (n - 1) / 2;
        const int m = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_e))) + 1;
        const auto g = gen_rig(n, m, 0.3, rng.next_u64());
        const Matrix l = laplacian(g);
        const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
        out.record(l.rowwise().sum().cwiseAbs().maxCoeff() / scale, 1e-12, "row sum");
        out.record((l - l.transpose()).cwiseAbs().maxCoeff(), 0.0, "symmetry");
        const auto eig = sym_eig(l);
        out.record(std::max(0.0, -eig.values.minCoeff()) / scale, 1e-10, "negative eigenvalue");
        const auto k = stiffness(g, DynamicsParams{});
        out.record(std::max(0.0, 10.0 - sym_eig(k).values.minCoeff()) / scale, 1e-10, "stiffness below epsilon");
    }
    return out;
}

// Exact solution of min |x - y|^2 s.t. sum x = w_tot, x >= w_min by active-set enumeration.
inline Vector brute_force_ngo(const Vector& y, double w_tot, double w_min) {
    const auto m = y.size();
    double best = std::numeric_limits<double>::infinity();
    Vector best_x;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        // mask bit set: pinned at the lower bound
        double free_sum = 0.0;
        int free_count = 0;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (!(mask >> i & 1u)) {
                free_sum += y[i];
                ++free_count;
            }
        }
        if (free_count == 0) {
            continue;
        }
        const double pinned = static_cast<double>(m - free_count) * w_min;
        const double shift = (w_tot - pinned - free_sum) / free_count;
        Vector x(m);
        bool feasible = true;
        for (Eigen::Index i = 0; i < m; ++i) {
            x[i] = (mask >> i & 1u) ? w_min : y[i] + shift;
            feasible &= x[i] >= w_min - 1e-12;
        }
        const double d = (x - y).squaredNorm();
        if (feasible && d < best) {
            best = d;
            best_x = x;
        }
    }
    return best_x;
}

// Exact solution of min |x - y|^2 s.t. x >= 0, a'x <= budget.
inline Vector brute_force_ago(const Vector& y, const Vector& a, double budget) {
    const auto m = y.size();
    double best = std::numeric_limits<double>::infinity();
    Vector best_x;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        for (int tight = 0; tight < 2; ++tight) {
            Vector x = Vector::Zero(m);
            double saa = 0.0;
            double say = 0.0;
            for (Eigen::Index i = 0; i < m; ++i) {
                if (!(mask >> i & 1u)) {
                    saa += a[i] * a[i];
                    say += a[i] * y[i];
                }
            }
            const double lambda = tight && saa > 0.0 ? (say - budget) / saa : 0.0;
            if (tight && (saa == 0.0 || lambda < 0.0)) {
                continue;
            }
            for (Eigen::Index i = 0; i < m; ++i) {
                if (!(mask >> i & 1u)) {
                    x[i] = y[i] - lambda * a[i];
                }
            }
            const bool feasible = x.minCoeff() >= -1e-12 && a.dot(x) <= budget * (1.0 + 1e-12) + 1e-12;
            const double d = (x - y).squaredNorm();
            if (feasible && d < best) {
                best = d;
                best_x = x;
            }
        }
    }
    return best_x;
}

// Idempotence, non-expansiveness and agreement with brute-force QP (dims <= 6).
inline Outcome projection_properties(int trials = 300) {
    Outcome out;
    Rng rng(202);
    for (int t = 0; t < trials; ++t) {
        const int m = 1 + static_cast<int>(rng.below(6));
        const double w_min = 0.05 * rng.uniform();
        const double w_tot = m * w_min + 3.0 * rng.uniform();
        const Vector y1 = random_vector(m, rng, 2.0);
        const Vector y2 = random_vector(m, rng, 2.0);
        const Vector p1 = project_ngo(y1, w_tot, w_min);
        const Vector p2 = project_ngo(y2, w_tot, w_min);
        out.record((project_ngo(p1, w_tot, w_min) - p1).norm(), 1e-12, "ngo idempotence");
        out.record((p1 - p2).norm() - (y1 - y2).norm(), 1e-12, "ngo non-expansive");
        out.record((p1 - brute_force_ngo(y1, w_tot, w_min)).norm(), 1e-10, "ngo brute force");

        // AGO: last coordinate is c with weight n.
        const int n = 1 + static_cast<int>(rng.below(5));
        const int k = std::max(1, m - 1);
        const double budget = 4.0 * rng.uniform();
        const Vector z1 = random_vector(k + 1, rng, 2.0);
        const Vector z2 = random_vector(k + 1, rng, 2.0);
        Vector a = Vector::Ones(k + 1);
        a[k] = n;
        auto proj = [&](const Vector& z) {
            const auto [w, c] = project_ago(z.head(k), z[k], budget, n);
            Vector x(k + 1);
            x << w, c;
            return x;
        };
        const Vector q1 = proj(z1);
        const Vector q2 = proj(z2);
        out.record((proj(q1) - q1).norm(), 1e-12, "ago idempotence");
        out.record((q1 - q2).norm() - (z1 - z2).norm(), 1e-12, "ago non-expansive");
        out.record((q1 - brute_force_ago(z1, a, budget)).norm(), 1e-10, "ago brute force");
    }
    return out;
}

inline double relative_gap(const Vector& a, const Vector& b) {
    return (a - b).norm() / std::max(b.norm(), 1e-300);
}

// Analytic NGO gradient and the spectral AGO gradient against central
// differences on well-separated spectra.
inline Outcome gradient_properties(int trials = 6) {
    Outcome out;
    Rng rng(303);
    for (int t = 0; t < trials; ++t) {
        const int n = 4 + static_cast<int>(rng.below(4));
        const auto g = gen_rig(n, std::min(n + 3, n * (n - 1) / 2), 0.3, rng.next_u64());
        NgoProblem p;
        p.graph = g;
        const auto ng = ngo_gradient(p, g.weights());
        if (ng.min_gap < 1e-3) {
            continue;
        }
        Vector fd(g.edge_count());
        Vector w = g.weights();
        for (int l = 0; l < g.edge_count(); ++l) {
            const double s = 1e-5 * std::max(1.0, std::abs(w[l]));
            w[l] += s;
            const double up = ngo_objective(p, w);
            w[l] -= 2.0 * s;
            const double dn = ngo_objective(p, w);
            w[l] += s;
            fd[l] = (up - dn) / (2.0 * s);
        }
        out.record(relative_gap(ng.gradient, fd), 1e-5, "ngo gradient");

        auto pr = default_ago_problem(g, p.params, AuxTopology::complete, 1e-6, 0.1, 5.0);
        Vector aw = pr.aux_weights;
        for (auto& x : aw) {
            x *= 0.5 + rng.uniform();
        }
        const double c = pr.c * (0.5 + rng.uniform());
        const Vector spec = ago_gradient(pr, aw, c, AgoGradient::spectral);
        const Vector full = ago_gradient(pr, aw, c, AgoGradient::finite_difference);
        out.record(relative_gap(spec, full), 1e-5, "ago spectral gradient");
    }
    return out;
}

// Residue sums over all poles vanish for the pair integrands.
inline Outcome residue_sum_properties() {
    Outcome out;
    for (double wk : {1.0, 2.0, 4.0}) {
        for (double wt : {1.5, 3.0}) {
            for (double c : {0.5, 2.0}) {
                const auto pr = pair_roots(wk, wt, c, 1e-4, 1e-4);
                const double b = pr.omega_tilde * pr.omega_tilde + c;
                const double beta = 2e-4 * pr.omega_tilde * pr.omega_tilde;
                CVector num(5);
                num << b * b, 0.0, beta * beta - 2.0 * b, 0.0, 1.0;
                std::vector<complex> poles;
                for (const auto& r : pr.roots) {
                    poles.push_back(r);
                    poles.push_back(std::conj(r));
                }
                poles.emplace_back(2.5, 0.1);
                poles.emplace_back(2.5, -0.1);
                const RationalIntegrand f(num, poles, 0.1 / std::numbers::pi);
                double scale = 0.0;
                for (std::size_t i = 0; i < poles.size(); ++i) {
                    scale = std::max(scale, std::abs(f.residue(i)));
                }
                out.record(std::abs(f.residue_sum()) / scale, 1e-9, "residue sum");
            }
        }
    }
    return out;
}

// Every seeded path reproduces bit-for-bit.
inline Outcome determinism_properties() {
    Outcome out;
    auto same = [&](bool eq, const std::string& what) { out.record(eq ? 0.0 : 1.0, 0.0, what); };
    same(to_edge_list(gen_rcg(9, 0.3, 5)) == to_edge_list(gen_rcg(9, 0.3, 5)), "rcg");
    same(to_edge_list(gen_rig(9, 15, 0.3, 5)) == to_edge_list(gen_rig(9, 15, 0.3, 5)), "rig");

    const auto g = gen_rcg(5, 0.3, 2);
    DynamicsParams p;
    p.gamma = 1e-3;
    const MainResponse model(g, p);
    AttackModel attack;
    attack.h = 0.1;
    attack.omegas = model.omegas();
    MonteCarloOptions mo;
    mo.samples = 20000;
    mo.batch_size = 3000;
    mo.seed = 9;
    mo.threads = 1;
    const auto m1 = monte_carlo_vulnerability(model, attack, mo);
    mo.threads = 4;
    const auto m2 = monte_carlo_vulnerability(model, attack, mo);
    same(m1.mean == m2.mean && m1.standard_error == m2.standard_error, "monte carlo");

    Rng r1 = Rng(4).split(11);
    Rng r2 = Rng(4).split(11);
    const auto s1 = sample_attack(attack, 5, r1);
    const auto s2 = sample_attack(attack, 5, r2);
    same(s1.f == s2.f && s1.nu == s2.nu, "attack sampling");

    NgoProblem np;
    np.graph = g;
    OptOptions o;
    o.starts = 3;
    o.seed = 12;
    o.threads = 1;
    const auto a = optimize_ngo(np, o);
    o.threads = 3;
    const auto b = optimize_ngo(np, o);
    same(a.w_star == b.w_star && a.iterates == b.iterates, "multi-start optimization");

    StudyBase base;
    base.n = 4;
    const auto t1 = param_study(base, "h", {0.05, 0.1}, 1);
    const auto t2 = param_study(base, "h", {0.05, 0.1}, 2);
    same(to_csv(t1) == to_csv(t2), "parameter study");
    return out;
}

}  // namespace netres::props
