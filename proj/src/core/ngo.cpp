#include "core/ngo.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "core/spectral.hpp"

namespace netres {

namespace {

void require_positive(double x, const char* name) {
    require(std::isfinite(x) && x > 0.0, std::string(name) + " must be > 0");
}

struct PairTerm {
    double value;
    double d_first;   // d/d a
    double d_second;  // d/d b
};

// T(a, b) with a = omega_k^2, b = omega_j^2.
PairTerm pair_term(double a, double b, double h2) {
    const double num = h2 + a + b;
    const double diff = a - b;
    const double poly = h2 * h2 + 2.0 * h2 * (a + b) + diff * diff;
    const double den = a * a * poly;
    const double dden_a = 2.0 * a * poly + a * a * (2.0 * h2 + 2.0 * diff);
    const double dden_b = a * a * (2.0 * h2 - 2.0 * diff);
    const double inv2 = 1.0 / (den * den);
    return {num / den, (den - num * dden_a) * inv2, (den - num * dden_b) * inv2};
}

}  // namespace

double g_closed(double omega_k, double omega_j, double gamma, double h) {
    require_positive(omega_k, "omega_k");
    require_positive(omega_j, "omega_j");
    require_positive(gamma, "gamma");
    require_positive(h, "h");
    const double a = omega_k * omega_k;
    const double b = omega_j * omega_j;
    return std::numbers::pi / (2.0 * gamma) * pair_term(a, b, h * h).value;
}

QuadratureResult g_quadrature(double omega_k, double omega_j, double gamma, double h, double rel_tol) {
    require_positive(omega_k, "omega_k");
    require_positive(omega_j, "omega_j");
    require_positive(gamma, "gamma");
    require_positive(h, "h");
    const double w2 = omega_k * omega_k;
    auto f = [=](double nu) {
        const double r = w2 - nu * nu;
        const double d = 2.0 * gamma * nu * w2;
        const double e = omega_j - nu;
        return 1.0 / ((r * r + d * d) * (e * e + h * h));
    };
    // Poles of the damped quartic: nu = +-sqrt(w^2 - a^2) + i a, a = gamma w^2,
    // and the Cauchy pair omega_j +- i h.
    const double a = gamma * w2;
    const double re = std::sqrt(std::max(w2 - a * a, 0.0));
    const std::array<complex, 4> poles{complex(re, a), complex(-re, a), complex(omega_j, h), complex(-omega_j, h)};
    return integrate_real_line(f, pole_breakpoints(poles), rel_tol);
}

void NgoProblem::validate() const {
    params.validate();
    require_positive(h, "h");
    require(std::isfinite(w_min) && w_min > 0.0, "w_min must be > 0");
    const double m = graph.edge_count();
    if (budget() < m * w_min * (1.0 - 1e-12)) {
        fail(Errc::infeasible, "weight budget w_tot is below m * w_min");
    }
}

double ngo_objective_from_frequencies(const Vector& omegas, double gamma, double h) {
    require_positive(gamma, "gamma");
    require_positive(h, "h");
    const auto n = omegas.size();
    require(n > 0, "objective needs at least one frequency");
    const double h2 = h * h;
    const Vector x = omegas.array().square();
    double s = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index j = 0; j < n; ++j) {
            s += pair_term(x[k], x[j], h2).value;
        }
    }
    return h / (2.0 * gamma * static_cast<double>(n * n)) * s;
}

Vector ngo_objective_frequency_gradient(const Vector& omegas, double gamma, double h) {
    const auto n = omegas.size();
    const double h2 = h * h;
    const Vector x = omegas.array().square();
    Vector g = Vector::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto t = pair_term(x[k], x[j], h2);
            g[k] += t.d_first;
            g[j] += t.d_second;
        }
    }
    return g * (h / (2.0 * gamma * static_cast<double>(n * n)));
}

double ngo_objective(const NgoProblem& problem, const Vector& w) {
    const auto& g = problem.graph;
    require(w.size() == g.edge_count(), "weight vector length must equal the edge count");
    const auto omegas = natural_frequencies(g.vertex_count(), g.edges(), w, problem.params.epsilon);
    return ngo_objective_from_frequencies(omegas, problem.params.gamma, problem.h);
}

double ngo_objective(const NgoProblem& problem) { return ngo_objective(problem, problem.graph.weights()); }

NgoGradient ngo_gradient(const NgoProblem& problem, const Vector& w) {
    const auto& g = problem.graph;
    const int n = g.vertex_count();
    const int m = g.edge_count();
    require(w.size() == m, "weight vector length must equal the edge count");

    const auto eig = sym_eig(laplacian(n, g.edges(), w));
    NgoGradient out;
    out.gradient = Vector::Zero(m);
    out.min_gap = std::numeric_limits<double>::infinity();
    for (int k = 1; k < n; ++k) {
        out.min_gap = std::min(out.min_gap, eig.values[k] - eig.values[k - 1]);
    }

    if (out.min_gap < 1e-8) {
        out.finite_difference = true;
        Vector probe = w;
        for (int l = 0; l < m; ++l) {
            const double step = 1e-6 * std::max(1.0, std::abs(w[l]));
            probe[l] = w[l] + step;
            const double up = ngo_objective(problem, probe);
            probe[l] = w[l] - step;
            const double down = ngo_objective(problem, probe);
            probe[l] = w[l];
            out.gradient[l] = (up - down) / (2.0 * step);
        }
        return out;
    }

    const Vector omegas = (eig.values.array() + problem.params.epsilon).sqrt();
    const Vector dj_dlambda = ngo_objective_frequency_gradient(omegas, problem.params.gamma, problem.h);
    for (int l = 0; l < m; ++l) {
        const auto [u, v] = g.edges()[static_cast<std::size_t>(l)];
        const auto diff = (eig.vectors.row(u) - eig.vectors.row(v)).array().square();
        out.gradient[l] = (diff.transpose() * dj_dlambda.array()).sum();
    }
    return out;
}

}  // namespace netres
