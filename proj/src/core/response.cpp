#include "core/response.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "core/error.hpp"

namespace netres {

void CombinedSystem::validate() const {
    params.validate();
    require(static_cast<Eigen::Index>(aux_edges.size()) == aux_weights.size(), "aux edge/weight counts differ");
    for (const auto& e : aux_edges) {
        require(e.u >= 0 && e.v >= 0 && e.u < n() && e.v < n() && e.u != e.v, "aux edge out of range");
    }
    for (Eigen::Index l = 0; l < aux_weights.size(); ++l) {
        require(std::isfinite(aux_weights[l]) && aux_weights[l] >= 0.0, "aux weights must be >= 0");
    }
    require(std::isfinite(c) && c >= 0.0, "inter-graph weight c must be >= 0");
    require(std::isfinite(gamma_aux) && gamma_aux > 0.0, "auxiliary damping must be > 0");
}

Matrix CombinedSystem::aux_stiffness() const {
    Matrix k = laplacian(n(), aux_edges, aux_weights);
    k.diagonal().array() += params.epsilon;
    return k;
}

CombinedSystem mirrored_proportional(const WeightedGraph& main, const DynamicsParams& p, double alpha, double c,
                                     double gamma_aux) {
    require(alpha >= 0.0, "proportionality factor must be >= 0");
    CombinedSystem sys;
    sys.main = main;
    sys.params = p;
    sys.aux_edges = main.edges();
    sys.aux_weights = alpha * main.weights();
    sys.c = c;
    sys.gamma_aux = gamma_aux;
    sys.validate();
    return sys;
}

CVector steady_state(const WeightedGraph& g, const DynamicsParams& p, const Vector& f, double nu) {
    p.validate();
    require(f.size() == g.vertex_count(), "forcing vector has the wrong dimension");
    const auto eig = sym_eig(laplacian(g));
    const Vector proj = eig.vectors.transpose() * f;
    CVector modal(proj.size());
    for (Eigen::Index k = 0; k < proj.size(); ++k) {
        const double w2 = eig.values[k] + p.epsilon;
        const complex d(w2 - nu * nu, 2.0 * nu * p.gamma * w2);
        modal[k] = proj[k] / d;
    }
    return eig.vectors.cast<complex>() * modal;
}

CVector steady_state_direct(const WeightedGraph& g, const DynamicsParams& p, const Vector& f, double nu) {
    p.validate();
    require(f.size() == g.vertex_count(), "forcing vector has the wrong dimension");
    const Matrix k = stiffness(g, p);
    CMatrix a = k.cast<complex>() * complex(1.0, 2.0 * nu * p.gamma);
    a.diagonal().array() -= nu * nu;
    return a.partialPivLu().solve(f.cast<complex>());
}

namespace {

CMatrix combined_operator(const Matrix& stiff, const Matrix& damp, double nu) {
    CMatrix s = stiff.cast<complex>() + complex(0.0, nu) * damp.cast<complex>();
    s.diagonal().array() -= nu * nu;
    return s;
}

}  // namespace

SecondOrderSystem make_system(const WeightedGraph& g, const DynamicsParams& p) {
    p.validate();
    SecondOrderSystem sys;
    sys.stiffness = stiffness(g, p);
    sys.damping = 2.0 * p.gamma * sys.stiffness;
    sys.observed = g.vertex_count();
    return sys;
}

SecondOrderSystem make_system(const CombinedSystem& cs) {
    cs.validate();
    const int n = cs.n();
    const Matrix k = stiffness(cs.main, cs.params);
    const Matrix kt = cs.aux_stiffness();
    SecondOrderSystem sys;
    sys.stiffness = Matrix::Zero(2 * n, 2 * n);
    sys.stiffness.topLeftCorner(n, n) = k + cs.c * Matrix::Identity(n, n);
    sys.stiffness.bottomRightCorner(n, n) = kt + cs.c * Matrix::Identity(n, n);
    sys.stiffness.topRightCorner(n, n) = -cs.c * Matrix::Identity(n, n);
    sys.stiffness.bottomLeftCorner(n, n) = -cs.c * Matrix::Identity(n, n);
    sys.damping = Matrix::Zero(2 * n, 2 * n);
    sys.damping.topLeftCorner(n, n) = 2.0 * cs.params.gamma * k;
    sys.damping.bottomRightCorner(n, n) = 2.0 * cs.gamma_aux * kt;
    sys.observed = n;
    return sys;
}

CVector steady_state_amplitude(const SecondOrderSystem& sys, const Vector& forcing, double nu) {
    require(forcing.size() == sys.stiffness.rows(), "forcing vector has the wrong dimension");
    const CMatrix s = combined_operator(sys.stiffness, sys.damping, nu);
    Eigen::PartialPivLU<CMatrix> lu(s);
    const CVector x = lu.solve(forcing.cast<complex>());
    if (!x.allFinite()) {
        fail(Errc::numerical, "steady-state system is singular");
    }
    return x.head(sys.observed);
}

CVector steady_state_combined(const CombinedSystem& cs, const Vector& f, double nu) {
    require(f.size() == cs.n(), "forcing vector has the wrong dimension");
    const auto sys = make_system(cs);
    Vector full = Vector::Zero(2 * cs.n());
    full.head(cs.n()) = f;
    return steady_state_amplitude(sys, full, nu);
}

MainResponse::MainResponse(const WeightedGraph& g, const DynamicsParams& p) : gamma_(p.gamma) {
    p.validate();
    auto eig = sym_eig(laplacian(g));
    vectors_ = std::move(eig.vectors);
    omega2_ = eig.values.array() + p.epsilon;
    omegas_ = omega2_.array().sqrt();
}

double MainResponse::squared_norm(const Vector& f, double nu) const {
    const Vector proj = vectors_.transpose() * f;
    double s = 0.0;
    const double nu2 = nu * nu;
    for (Eigen::Index k = 0; k < proj.size(); ++k) {
        const double w2 = omega2_[k];
        const double re = w2 - nu2;
        const double im = 2.0 * gamma_ * nu * w2;
        s += proj[k] * proj[k] / (re * re + im * im);
    }
    return s;
}

CombinedResponse::CombinedResponse(const CombinedSystem& sys) : n_(sys.n()) {
    auto so = make_system(sys);
    stiffness_ = std::move(so.stiffness);
    damping_ = std::move(so.damping);
}

double CombinedResponse::squared_norm(const Vector& f, double nu) const {
    const CMatrix s = combined_operator(stiffness_, damping_, nu);
    CVector rhs = CVector::Zero(2 * n_);
    rhs.head(n_) = f.cast<complex>();
    const CVector x = Eigen::PartialPivLU<CMatrix>(s).solve(rhs);
    return x.head(n_).squaredNorm();
}

namespace {

struct BatchStats {
    std::int64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;
};

BatchStats run_batch(const ResponseModel& model, const AttackModel& attack, Rng rng, std::int64_t count) {
    BatchStats s;
    const int n = model.dimension();
    for (std::int64_t i = 0; i < count; ++i) {
        const auto sample = sample_attack(attack, n, rng);
        const double x = model.squared_norm(sample.f, sample.nu);
        ++s.count;
        const double delta = x - s.mean;
        s.mean += delta / static_cast<double>(s.count);
        s.m2 += delta * (x - s.mean);
    }
    return s;
}

}  // namespace

MonteCarloResult monte_carlo_vulnerability(const ResponseModel& model, const AttackModel& attack,
                                           const MonteCarloOptions& opts) {
    attack.validate();
    require(opts.samples >= 1, "Monte Carlo needs at least one sample");
    require(opts.batch_size >= 1, "batch size must be >= 1");

    const std::int64_t batches = (opts.samples + opts.batch_size - 1) / opts.batch_size;
    std::vector<BatchStats> stats(static_cast<std::size_t>(batches));
    const Rng root(opts.seed);

    int threads = opts.threads > 0 ? opts.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, static_cast<int>(std::min<std::int64_t>(batches, 256)));
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        for (std::int64_t b = next++; b < batches; b = next++) {
            const std::int64_t count = std::min(opts.batch_size, opts.samples - b * opts.batch_size);
            stats[static_cast<std::size_t>(b)] =
                run_batch(model, attack, root.split(static_cast<std::uint64_t>(b)), count);
        }
    };
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

    MonteCarloResult r;
    BatchStats total;
    for (const auto& s : stats) {
        const auto n = total.count + s.count;
        const double delta = s.mean - total.mean;
        total.mean += delta * static_cast<double>(s.count) / static_cast<double>(n);
        total.m2 += s.m2 + delta * delta * static_cast<double>(total.count) * static_cast<double>(s.count) /
                               static_cast<double>(n);
        total.count = n;
        r.running.push_back({total.count, total.mean});
    }
    r.mean = total.mean;
    r.samples = total.count;
    r.standard_error = total.count > 1
                           ? std::sqrt(total.m2 / static_cast<double>(total.count - 1) / static_cast<double>(total.count))
                           : std::numeric_limits<double>::quiet_NaN();
    return r;
}

std::string running_average_csv(const MonteCarloResult& r, double reference) {
    std::string out = "samples,running_mean,reference\n";
    char buf[96];
    for (const auto& p : r.running) {
        std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g\n", static_cast<long long>(p.samples), p.running_mean,
                      reference);
        out += buf;
    }
    return out;
}

}  // namespace netres
