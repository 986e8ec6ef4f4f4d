#pragma once

#include "core/graph.hpp"
#include "core/quadrature.hpp"
#include "core/types.hpp"

namespace netres {

/// Closed-form near-resonance integral
///   g = (pi / 2 gamma) (h^2 + wk^2 + wj^2) / (wk^4 (h^4 + 2h^2(wk^2 + wj^2) + (wk^2 - wj^2)^2)),
/// the leading term for gamma << h.
[[nodiscard]] double g_closed(double omega_k, double omega_j, double gamma, double h);

/// Adaptive quadrature of
///   integral dnu / (((wk^2 - nu^2)^2 + (2 gamma nu wk^2)^2) ((wj - nu)^2 + h^2))
/// with panels nested around every pole.
[[nodiscard]] QuadratureResult g_quadrature(double omega_k, double omega_j, double gamma, double h,
                                            double rel_tol = 1e-8);

struct NgoProblem {
    WeightedGraph graph;  // topology and starting weights
    DynamicsParams params;
    double h = 0.1;
    double w_tot = 0.0;  // <= 0: take the graph's current total
    double w_min = 1e-3;

    void validate() const;
    [[nodiscard]] double budget() const { return w_tot > 0.0 ? w_tot : graph.total_weight(); }
};

/// Expected squared steady-state amplitude as a function of the natural
/// frequencies only. Diagonal (k = j) terms are included.
[[nodiscard]] double ngo_objective_from_frequencies(const Vector& omegas, double gamma, double h);
/// d J / d (omega_k^2) for each k.
[[nodiscard]] Vector ngo_objective_frequency_gradient(const Vector& omegas, double gamma, double h);

[[nodiscard]] double ngo_objective(const NgoProblem& problem);
[[nodiscard]] double ngo_objective(const NgoProblem& problem, const Vector& w);

struct NgoGradient {
    Vector gradient;
    bool finite_difference = false;  // true when an eigenvalue gap < 1e-8 forced the fallback
    double min_gap = 0.0;
};

/// Chain rule through simple eigenvalues: dlambda_k/dw_l = (v_k,u - v_k,v)^2
/// for edge l = (u, v). Falls back to central differences with step
/// 1e-6 * max(1, w_l) on near-degenerate spectra.
[[nodiscard]] NgoGradient ngo_gradient(const NgoProblem& problem, const Vector& w);

}  // namespace netres
