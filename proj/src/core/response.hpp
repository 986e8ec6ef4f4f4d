#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "core/attack.hpp"
#include "core/graph.hpp"
#include "core/spectral.hpp"

namespace netres {

/// Main graph + auxiliary graph coupled vertex-to-vertex by springs of
/// weight c. The auxiliary graph is a topology with nonnegative weights so
/// optimizer iterates at the zero bound stay representable.
struct CombinedSystem {
    WeightedGraph main;
    DynamicsParams params;  // epsilon is shared by both graphs
    std::vector<Edge> aux_edges;
    Vector aux_weights;
    double c = 0.0;
    double gamma_aux = 1e-6;

    void validate() const;
    [[nodiscard]] int n() const { return main.vertex_count(); }
    [[nodiscard]] Matrix aux_stiffness() const;
};

/// Aux graph that copies the main topology with weights alpha * w, which
/// makes both stiffness matrices share an eigenbasis.
[[nodiscard]] CombinedSystem mirrored_proportional(const WeightedGraph& main, const DynamicsParams& p,
                                                  double alpha, double c, double gamma_aux);

/// Steady-state amplitude (coefficient of e^{i nu t}) computed in the
/// Laplacian eigenbasis.
[[nodiscard]] CVector steady_state(const WeightedGraph& g, const DynamicsParams& p, const Vector& f, double nu);
/// Same quantity by a dense complex linear solve; independent second route.
[[nodiscard]] CVector steady_state_direct(const WeightedGraph& g, const DynamicsParams& p, const Vector& f,
                                          double nu);
/// Main-network block of the full 2n x 2n solve (no diagonalizability
/// assumption).
[[nodiscard]] CVector steady_state_combined(const CombinedSystem& sys, const Vector& f, double nu);

/// Precomputed evaluator of ||x_s||^2 for repeated forcing samples.
class ResponseModel {
public:
    virtual ~ResponseModel() = default;
    [[nodiscard]] virtual int dimension() const = 0;
    [[nodiscard]] virtual double squared_norm(const Vector& f, double nu) const = 0;
};

class MainResponse final : public ResponseModel {
public:
    MainResponse(const WeightedGraph& g, const DynamicsParams& p);
    [[nodiscard]] int dimension() const override { return static_cast<int>(omega2_.size()); }
    [[nodiscard]] double squared_norm(const Vector& f, double nu) const override;
    [[nodiscard]] const Vector& omegas() const { return omegas_; }

private:
    Matrix vectors_;
    Vector omega2_;
    Vector omegas_;
    double gamma_;
};

class CombinedResponse final : public ResponseModel {
public:
    explicit CombinedResponse(const CombinedSystem& sys);
    [[nodiscard]] int dimension() const override { return n_; }
    [[nodiscard]] double squared_norm(const Vector& f, double nu) const override;

private:
    int n_;
    Matrix stiffness_;  // 2n x 2n
    Matrix damping_;    // 2n x 2n
};

struct RunningPoint {
    std::int64_t samples = 0;
    double running_mean = 0.0;
};

struct MonteCarloResult {
    double mean = 0.0;
    double standard_error = 0.0;  // NaN when fewer than two samples
    std::int64_t samples = 0;
    std::vector<RunningPoint> running;  // one entry per batch, in order
};

struct MonteCarloOptions {
    std::int64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    std::int64_t batch_size = 100'000;
    int threads = 0;  // 0: hardware concurrency
};

/// Mean and standard error of ||x_s||^2 over iid attacks. Batch b draws from
/// Rng(seed).split(b) and batches are reduced in index order, so the result
/// is bit-identical for any thread count.
[[nodiscard]] MonteCarloResult monte_carlo_vulnerability(const ResponseModel& model, const AttackModel& attack,
                                                         const MonteCarloOptions& opts);

/// CSV: samples,running_mean,reference.
[[nodiscard]] std::string running_average_csv(const MonteCarloResult& r, double reference);

// ---------------------------------------------------------------------------
// Time-domain simulation

/// x'' + C x' + K x = F cos(nu t); the first `observed` coordinates are the
/// main network.
struct SecondOrderSystem {
    Matrix damping;
    Matrix stiffness;
    int observed = 0;
};

[[nodiscard]] SecondOrderSystem make_system(const WeightedGraph& g, const DynamicsParams& p);
[[nodiscard]] SecondOrderSystem make_system(const CombinedSystem& sys);

/// Complex steady-state amplitude of the observed block, by direct solve.
[[nodiscard]] CVector steady_state_amplitude(const SecondOrderSystem& sys, const Vector& forcing, double nu);

/// Classical RK4 on the first-order form. The observer sees (t, x, v) after
/// every step and may return false to stop.
template <typename Observer>
void integrate_rk4(const SecondOrderSystem& sys, const Vector& forcing, double nu, double dt, std::int64_t steps,
                   Vector& x, Vector& v, double t0, Observer&& observe);

struct SimulationOptions {
    double dt = 0.0;           // 0: min(2 pi/nu, 2 pi/omega_max) / 200
    double t_end = 0.0;        // 0: automatic cap
    double settle_tol = 1e-3;  // envelope change across two periods
    double min_decay_times = 10.0;
    bool refine_dt = true;     // halve dt until final envelopes agree
    double refine_tol = 1e-4;
    int max_refinements = 6;
    int records_per_period = 8;
    Vector x0;  // empty: zero
    Vector v0;
};

/// Time grid, raw ||x(t)||^2, the analytic-signal envelope
/// ||x||^2 + ||x'||^2/nu^2 (constant in steady state), and both normalized by
/// the closed-form ||x_s||^2.
struct AmplitudeTrace {
    std::vector<double> time;
    std::vector<double> squared_norm;
    std::vector<double> envelope;
    std::vector<double> ratio;
    std::vector<double> envelope_ratio;
    double reference = 0.0;
    double final_envelope_ratio = 0.0;
    double dt = 0.0;
    std::int64_t steps = 0;
    bool settled = false;
};

[[nodiscard]] AmplitudeTrace simulate_dynamics(const SecondOrderSystem& sys, const Vector& f, double nu,
                                               const SimulationOptions& opts = {});

/// CSV: t,squared_norm,envelope,ratio,envelope_ratio.
[[nodiscard]] std::string to_csv(const AmplitudeTrace& trace);

}  // namespace netres

#include "core/simulate_impl.hpp"
