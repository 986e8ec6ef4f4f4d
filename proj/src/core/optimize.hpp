#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "core/ago.hpp"
#include "core/ngo.hpp"

namespace netres {

/// Euclidean projection onto {w : sum w = w_tot, w >= w_min}.
[[nodiscard]] Vector project_ngo(const Vector& w_raw, double w_tot, double w_min);

/// Euclidean projection of (w~, c) onto {w~ >= 0, c >= 0, 1'w~ + n c <= budget}.
[[nodiscard]] std::pair<Vector, double> project_ago(const Vector& w_raw, double c_raw, double budget, int n);

enum class AgoGradient { finite_difference, spectral };

struct OptOptions {
    double tol = 0.0;  // <= 0: 1e-8 * max(1, |J|) on the projected-gradient norm
    int max_iter = 2000;
    int starts = 1;  // extra starts are random feasible perturbations of the first
    std::uint64_t seed = 1;
    double armijo = 1e-4;
    double shrink = 0.5;
    double min_step = 1e-16;
    AgoGradient ago_gradient = AgoGradient::spectral;
    int threads = 0;  // for multi-start
};

struct StartLog {
    double j0 = 0.0;
    double j_star = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string stop_reason;
};

struct ConstraintResiduals {
    double equality = 0.0;  // |1'w - w_tot| (NGO)
    double bound = 0.0;     // max lower-bound violation
    double budget = 0.0;    // max(0, 1'w~ + n c - budget) (AGO)

    [[nodiscard]] double max() const;
};

struct OptResult {
    Vector w_star;
    double c_star = 0.0;
    double j0 = 0.0;      // objective at the projected start
    double j_star = 0.0;
    double j_main = 0.0;  // AGO only: main graph alone (c = 0), same evaluator as J~
    std::vector<double> iterates;  // objective after each accepted step, starting with J0
    ConstraintResiduals residuals;
    bool converged = false;
    int iterations = 0;
    double percent_decrease = 0.0;
    std::string stop_reason;
    std::vector<StartLog> starts;
    bool ago = false;
    std::string gradient;  // analytic | finite_difference | spectral
};

/// |J0 - J*| / J0 * 100.
[[nodiscard]] double percent_decrease(double j0, double j_star);

/// Projected gradient descent on the main-graph edge weights.
[[nodiscard]] OptResult optimize_ngo(const NgoProblem& problem, const OptOptions& options = {});
/// Projected gradient descent on the aux weights and coupling jointly.
[[nodiscard]] OptResult optimize_ago(const AgoProblem& problem, const OptOptions& options = {});

/// Gradient of J~ with respect to (w~, c); the last entry is d/dc.
[[nodiscard]] Vector ago_gradient(const AgoProblem& problem, const Vector& w, double c, AgoGradient mode);

struct StudyBase {
    std::string method = "ngo";  // ngo | ago
    std::string graph = "rcg";   // rcg | rig
    int n = 10;
    int edges = 0;  // rig only
    double weight_perturbation = 0.3;
    DynamicsParams params;
    double h = 0.1;
    double w_min = 1e-3;
    double gamma_aux = 1e-6;
    double r_m = 5.0;
    AuxTopology topology = AuxTopology::complete;
    std::uint64_t seed = 1;
    OptOptions options;
};

struct StudyRow {
    std::string param;
    double value = 0.0;
    double percent_decrease = 0.0;  // 0 when the run failed
    bool converged = false;
};

/// Varies one of n, edges, weight_perturbation, epsilon, gamma, h, w_min,
/// gamma_aux, r_m with the rest held at `base`. Grid point i uses a fresh
/// instance seeded from split(i) of the base seed.
[[nodiscard]] std::vector<StudyRow> param_study(const StudyBase& base, const std::string& param,
                                                const std::vector<double>& values, int threads = 0);
/// CSV: param,value,percent_decrease,converged.
[[nodiscard]] std::string to_csv(const std::vector<StudyRow>& rows);

}  // namespace netres
