#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "core/response.hpp"

namespace netres {

namespace {

double envelope_of(const Vector& x, const Vector& v, int observed, double nu) {
    return x.head(observed).squaredNorm() + v.head(observed).squaredNorm() / (nu * nu);
}

AmplitudeTrace run_once(const SecondOrderSystem& sys, const Vector& forcing, double nu, double dt, double t_min,
                        double t_end, double reference, const SimulationOptions& opts) {
    const auto dim = sys.stiffness.rows();
    Vector x = opts.x0.size() ? opts.x0 : Vector::Zero(dim);
    Vector v = opts.v0.size() ? opts.v0 : Vector::Zero(dim);
    require(x.size() == dim && v.size() == dim, "initial state has the wrong dimension");

    const double period = 2.0 * std::numbers::pi / std::abs(nu);
    const auto steps_per_period = std::max<std::int64_t>(1, std::llround(period / dt));
    const auto record_every =
        std::max<std::int64_t>(1, steps_per_period / std::max(1, opts.records_per_period));
    const auto max_steps = static_cast<std::int64_t>(std::ceil(t_end / dt));

    AmplitudeTrace tr;
    tr.reference = reference;
    tr.dt = dt;
    auto record = [&](double t, const Vector& xs, const Vector& vs) {
        const double sq = xs.head(sys.observed).squaredNorm();
        const double env = envelope_of(xs, vs, sys.observed, nu);
        tr.time.push_back(t);
        tr.squared_norm.push_back(sq);
        tr.envelope.push_back(env);
        tr.ratio.push_back(reference > 0.0 ? sq / reference : 0.0);
        tr.envelope_ratio.push_back(reference > 0.0 ? env / reference : 0.0);
    };
    record(0.0, x, v);

    std::vector<double> period_env;
    std::int64_t step = 0;
    integrate_rk4(sys, forcing, nu, dt, max_steps, x, v, 0.0, [&](double t, const Vector& xs, const Vector& vs) {
        ++step;
        if (!xs.allFinite() || !vs.allFinite()) {
            fail(Errc::numerical, "simulation state became non-finite at step " + std::to_string(step) +
                                      " (t = " + std::to_string(t) + ", dt = " + std::to_string(dt) + ")");
        }
        if (step % record_every == 0) {
            record(t, xs, vs);
        }
        if (step % steps_per_period == 0) {
            period_env.push_back(envelope_of(xs, vs, sys.observed, nu));
            const auto k = period_env.size();
            if (t >= t_min && k >= 3) {
                const double e0 = period_env[k - 3];
                const double e1 = period_env[k - 2];
                const double e2 = period_env[k - 1];
                const double scale = std::max(std::abs(e2), 1e-300);
                if (std::abs(e1 - e0) <= opts.settle_tol * scale && std::abs(e2 - e1) <= opts.settle_tol * scale) {
                    tr.settled = true;
                    return false;
                }
            }
        }
        return true;
    });
    if (tr.time.back() != static_cast<double>(step) * dt) {
        record(static_cast<double>(step) * dt, x, v);
    }
    tr.steps = step;
    tr.final_envelope_ratio = tr.envelope_ratio.back();
    if (reference == 0.0 && tr.envelope.back() == 0.0) {
        tr.settled = true;
    }
    return tr;
}

}  // namespace

AmplitudeTrace simulate_dynamics(const SecondOrderSystem& sys, const Vector& f, double nu,
                                 const SimulationOptions& opts) {
    const auto dim = sys.stiffness.rows();
    require(sys.damping.rows() == dim && sys.stiffness.cols() == dim, "system matrices have mismatched shapes");
    require(sys.observed >= 1 && sys.observed <= dim, "observed block out of range");
    require(f.size() == sys.observed, "forcing vector has the wrong dimension");
    require(std::isfinite(nu) && nu != 0.0, "forcing frequency must be finite and nonzero");
    require(opts.dt >= 0.0 && opts.t_end >= 0.0, "dt and t_end must be >= 0");

    Vector forcing = Vector::Zero(dim);
    forcing.head(sys.observed) = f;
    const double reference = f.squaredNorm() > 0.0 ? steady_state_amplitude(sys, forcing, nu).squaredNorm() : 0.0;

    JacobiOptions eig_opts;
    eig_opts.compute_vectors = false;
    const auto k_eig = sym_eig(sys.stiffness, eig_opts);
    const auto c_eig = sym_eig(sys.damping, eig_opts);
    const double omega_max = std::sqrt(std::max(k_eig.values.maxCoeff(), 1e-300));
    const double decay_rate = 0.5 * std::max(c_eig.values.minCoeff(), 0.0);

    const double period = 2.0 * std::numbers::pi / std::abs(nu);
    const double dt0 = opts.dt > 0.0 ? opts.dt : std::min(period, 2.0 * std::numbers::pi / omega_max) / 200.0;
    const double t_min = decay_rate > 0.0 ? opts.min_decay_times / decay_rate : 0.0;
    const double t_end = opts.t_end > 0.0 ? opts.t_end : 3.0 * std::max(t_min, 4.0 * period) + 4.0 * period;

    AmplitudeTrace best = run_once(sys, forcing, nu, dt0, t_min, t_end, reference, opts);
    if (!opts.refine_dt || reference == 0.0) {
        return best;
    }
    double dt = dt0;
    for (int r = 0; r < opts.max_refinements; ++r) {
        dt *= 0.5;
        AmplitudeTrace finer = run_once(sys, forcing, nu, dt, t_min, t_end, reference, opts);
        const bool agree = std::abs(finer.final_envelope_ratio - best.final_envelope_ratio) <= opts.refine_tol;
        best = std::move(finer);
        if (agree) {
            break;
        }
    }
    return best;
}

std::string to_csv(const AmplitudeTrace& trace) {
    std::string out = "t,squared_norm,envelope,ratio,envelope_ratio\n";
    char buf[160];
    for (std::size_t i = 0; i < trace.time.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", trace.time[i], trace.squared_norm[i],
                      trace.envelope[i], trace.ratio[i], trace.envelope_ratio[i]);
        out += buf;
    }
    return out;
}

}  // namespace netres
