#pragma once

#include <functional>
#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/quadrature.hpp"
#include "core/response.hpp"
#include "core/types.hpp"

namespace netres {

/// Eigen-decoupled main-block response of the coupled pair
///   s_k = 1 / (D - c^2 / D~),  D = -nu^2 + 2i nu gamma w_k^2 + w_k^2 + c.
[[nodiscard]] complex s_k_response(double nu, double omega_k, double omega_tilde_k, double c, double gamma,
                                   double gamma_tilde);

/// First-order root tracking for a monic polynomial Q(x, t):
///   r_j(t) ~ r_j(0) - t * dQ/dt(r_j(0), 0) / prod_{k != j} (r_j(0) - r_k(0)).
/// Throws Errc::numerical when two base roots are closer than 1e-8.
[[nodiscard]] std::vector<complex> linearized_roots(const std::vector<complex>& base_roots,
                                                    const std::function<complex(complex)>& dq_dt, double t);

/// lead * N(nu) / prod_p (nu - p) with simple poles. N is given by its
/// coefficients in ascending powers.
class RationalIntegrand {
public:
    RationalIntegrand(CVector numerator, std::vector<complex> poles, complex lead = 1.0);

    [[nodiscard]] complex operator()(complex nu) const;
    [[nodiscard]] complex residue(std::size_t index) const;
    /// 2 pi i times the residues with Im p > 1e-14. Real-axis poles throw.
    [[nodiscard]] complex upper_half_integral() const;
    /// Sum over every pole; zero when deg(den) >= deg(num) + 2.
    [[nodiscard]] complex residue_sum() const;
    [[nodiscard]] const std::vector<complex>& poles() const { return poles_; }

private:
    CVector num_;
    std::vector<complex> poles_;
    complex lead_;
};

/// Zero-damping roots of Q = D D~ - c^2 and their linearized motion under a
/// joint damping scale. Upper-half-plane by construction. For c = 0 only the
/// two roots of D are kept since the aux factor cancels.
struct PairRoots {
    std::vector<complex> roots;  // four roots of Q (two when c = 0)
    double omega_tilde = 0.0;    // aux frequency actually used
    bool degenerate = false;     // omega_tilde was perturbed to separate coincident base roots
    bool exact = false;          // damping shifts exceed the base-root separation; companion roots used
};

[[nodiscard]] PairRoots pair_roots(double omega_k, double omega_tilde_k, double c, double gamma,
                                   double gamma_tilde);
/// All four roots of Q from its companion matrix.
[[nodiscard]] std::vector<complex> exact_pair_roots(double omega_k, double omega_tilde_k, double c, double gamma,
                                                    double gamma_tilde);

struct PairValue {
    double value = 0.0;
    bool degenerate = false;
    bool large_damping = false;  // max(gamma, gamma_tilde) > 1e-2 * h
};

/// integral |s_k(nu)|^2 rho_j(nu) dnu with rho_j the Cauchy density centred
/// at omega_j with half-width h, by residues over the upper half-plane.
[[nodiscard]] PairValue ago_pair_integral(double omega_k, double omega_tilde_k, double omega_j, double c,
                                          double gamma, double gamma_tilde, double h);
/// Same integral by adaptive quadrature with panels at the exact poles.
[[nodiscard]] QuadratureResult ago_pair_quadrature(double omega_k, double omega_tilde_k, double omega_j, double c,
                                                   double gamma, double gamma_tilde, double h,
                                                   double rel_tol = 1e-9);

enum class AuxTopology { mirrored, complete };

[[nodiscard]] std::string to_string(AuxTopology t);
[[nodiscard]] AuxTopology aux_topology_from_string(const std::string& s);

struct AgoProblem {
    WeightedGraph main;
    DynamicsParams params;
    AuxTopology topology = AuxTopology::complete;
    Vector aux_weights;  // length aux_edges().size()
    double c = 0.0;
    double gamma_aux = 1e-6;
    double h = 0.1;
    double r_m = 5.0;
    double w_tot = 0.0;  // <= 0: main graph total

    void validate() const;
    [[nodiscard]] int n() const { return main.vertex_count(); }
    [[nodiscard]] std::vector<Edge> aux_edges() const;
    [[nodiscard]] double budget() const;
    [[nodiscard]] CombinedSystem combined() const;
};

/// Aux graph weights copied from the main graph (mirrored) or uniform
/// w_tot / m~ (complete), and c = w_tot / n.
[[nodiscard]] AgoProblem default_ago_problem(const WeightedGraph& main, const DynamicsParams& p, AuxTopology t,
                                             double gamma_aux, double h, double r_m);

struct AgoValue {
    double value = 0.0;
    int degenerate_pairs = 0;
    bool large_damping = false;
};

/// (1/n^2) sum_{k,j} pair(omega_k, omega~_k, omega_j), both spectra ascending.
[[nodiscard]] AgoValue ago_objective_from_frequencies(const Vector& main_omegas, const Vector& aux_omegas, double c,
                                                      double gamma, double gamma_aux, double h);
[[nodiscard]] AgoValue ago_objective(const AgoProblem& problem);
[[nodiscard]] AgoValue ago_objective(const AgoProblem& problem, const Vector& aux_weights, double c);
/// sum_j pair(omega_k, aux_omega, omega_j) / n^2 for one main mode k.
[[nodiscard]] double ago_mode_term(const Vector& main_omegas, Eigen::Index k, double aux_omega, double c,
                                   double gamma, double gamma_aux, double h);
/// Per-mode sums F_k = sum_j pair(omega_k, omega~_k, omega_j) / n^2.
[[nodiscard]] Vector ago_mode_terms(const Vector& main_omegas, const Vector& aux_omegas, double c, double gamma,
                                    double gamma_aux, double h);

/// Quadrature version of the objective, valid for any damping.
[[nodiscard]] double ago_objective_quadrature(const Vector& main_omegas, const Vector& aux_omegas, double c,
                                              double gamma, double gamma_aux, double h);

enum class SweepMethod { residue, quadrature };

struct SweepPoint {
    double gamma_tilde = 0.0;
    double j_tilde = 0.0;
    SweepMethod method = SweepMethod::residue;
};

/// J~ as a function of the aux damping alone. Points outside the
/// small-damping regime switch to quadrature.
[[nodiscard]] std::vector<SweepPoint> damping_sweep(const AgoProblem& problem, const std::vector<double>& grid);
/// CSV: gamma_tilde,J_tilde,method_flag.
[[nodiscard]] std::string to_csv(const std::vector<SweepPoint>& sweep);

}  // namespace netres
