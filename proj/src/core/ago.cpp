#include "core/ago.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "core/spectral.hpp"

namespace netres {

namespace {

constexpr double kContourImag = 1e-14;
constexpr double kRootSeparation = 1e-8;
constexpr double kImagTolerance = 1e-8;
constexpr double kDegenerateImagTolerance = 1e-4;
constexpr double kMaxShiftRatio = 1e-2;

void check_pair_args(double omega_k, double omega_tilde_k, double c, double gamma, double gamma_tilde) {
    require(std::isfinite(omega_k) && omega_k > 0.0, "omega_k must be > 0");
    require(std::isfinite(omega_tilde_k) && omega_tilde_k > 0.0, "omega_tilde_k must be > 0");
    require(std::isfinite(c) && c >= 0.0, "c must be >= 0");
    require(std::isfinite(gamma) && gamma > 0.0, "gamma must be > 0");
    require(std::isfinite(gamma_tilde) && gamma_tilde > 0.0, "gamma_tilde must be > 0");
}

double min_separation(const std::vector<complex>& r) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.size(); ++i) {
        for (std::size_t j = i + 1; j < r.size(); ++j) {
            best = std::min(best, std::abs(r[i] - r[j]));
        }
    }
    return best;
}

std::vector<complex> base_roots(double a, double b, double c) {
    const double mid = 0.5 * (a + b);
    const double rad = std::hypot(0.5 * (a - b), c);
    const double xp = mid + rad;
    // a b - c^2 > 0 keeps the smaller root positive; use the product form
    // to avoid cancellation.
    const double xm = (a * b - c * c) / xp;
    const double sp = std::sqrt(xp);
    const double sm = std::sqrt(xm);
    return {complex(sp), complex(-sp), complex(sm), complex(-sm)};
}

struct PairCoefficients {
    double a;      // omega_k^2 + c
    double b;      // omega~_k^2 + c
    double alpha;  // 2 gamma omega_k^2
    double beta;   // 2 gamma~ omega~_k^2
};

PairCoefficients coefficients(double omega_k, double omega_tilde_k, double c, double gamma, double gamma_tilde) {
    const double w2 = omega_k * omega_k;
    const double wt2 = omega_tilde_k * omega_tilde_k;
    return {w2 + c, wt2 + c, 2.0 * gamma * w2, 2.0 * gamma_tilde * wt2};
}

// Residue integral for one (k, j) given the roots of Q for mode k. With
// c = 0 the aux factor cancels and only the roots of D remain.
PairValue pair_from_roots(const PairRoots& pr, double omega_k, double omega_j, double c, double gamma,
                          double gamma_tilde, double h) {
    CVector num;
    if (c == 0.0) {
        num = CVector::Ones(1);
    } else {
        const auto co = coefficients(omega_k, pr.omega_tilde, c, gamma, gamma_tilde);
        // D~ D~^dagger = nu^4 + (beta^2 - 2b) nu^2 + b^2.
        num.resize(5);
        num << co.b * co.b, 0.0, co.beta * co.beta - 2.0 * co.b, 0.0, 1.0;
    }
    std::vector<complex> poles;
    poles.reserve(2 * pr.roots.size() + 2);
    for (const auto& r : pr.roots) {
        poles.push_back(r);
        poles.push_back(std::conj(r));
    }
    poles.emplace_back(omega_j, h);
    poles.emplace_back(omega_j, -h);
    const RationalIntegrand integrand(std::move(num), std::move(poles), h / std::numbers::pi);
    const complex v = integrand.upper_half_integral();
    // Perturbed (degenerate) root pairs sit ~1e-7 apart and their residues
    // cancel, which costs about seven digits.
    const double tol = pr.degenerate || pr.exact ? kDegenerateImagTolerance : kImagTolerance;
    if (std::abs(v.imag()) > tol * std::abs(v.real())) {
        fail(Errc::numerical, "residue sum has a large imaginary part (" + std::to_string(v.imag()) + " vs real " +
                                  std::to_string(v.real()) + "); pole classification is suspect");
    }
    PairValue out;
    out.value = v.real();
    out.degenerate = pr.degenerate;
    out.large_damping = std::max(gamma, gamma_tilde) > 1e-2 * h;
    return out;
}

}  // namespace

complex s_k_response(double nu, double omega_k, double omega_tilde_k, double c, double gamma, double gamma_tilde) {
    require(std::isfinite(nu), "nu must be finite");
    require(std::isfinite(omega_k) && omega_k > 0.0, "omega_k must be > 0");
    require(std::isfinite(omega_tilde_k) && omega_tilde_k > 0.0, "omega_tilde_k must be > 0");
    require(std::isfinite(c) && c >= 0.0, "c must be >= 0");
    require(gamma > 0.0 && gamma_tilde >= 0.0, "damping factors must be positive");
    const auto co = coefficients(omega_k, omega_tilde_k, c, gamma, gamma_tilde);
    const complex d(co.a - nu * nu, nu * co.alpha);
    if (c == 0.0) {
        return 1.0 / d;
    }
    const complex dt(co.b - nu * nu, nu * co.beta);
    require(dt != complex(0.0), "auxiliary denominator vanishes");
    return 1.0 / (d - c * c / dt);
}

std::vector<complex> linearized_roots(const std::vector<complex>& base_roots, const std::function<complex(complex)>& dq_dt,
                                      double t) {
    if (min_separation(base_roots) < kRootSeparation) {
        fail(Errc::numerical, "base roots are degenerate (separation below 1e-8)");
    }
    std::vector<complex> out(base_roots.size());
    for (std::size_t j = 0; j < base_roots.size(); ++j) {
        complex deriv = 1.0;
        for (std::size_t k = 0; k < base_roots.size(); ++k) {
            if (k != j) {
                deriv *= base_roots[j] - base_roots[k];
            }
        }
        out[j] = base_roots[j] - t * dq_dt(base_roots[j]) / deriv;
    }
    return out;
}

RationalIntegrand::RationalIntegrand(CVector numerator, std::vector<complex> poles, complex lead)
    : num_(std::move(numerator)), poles_(std::move(poles)), lead_(lead) {
    require(num_.size() >= 1, "numerator needs at least one coefficient");
    require(static_cast<Eigen::Index>(poles_.size()) > num_.size(), "denominator degree must exceed numerator degree + 1");
    for (const auto& p : poles_) {
        if (std::abs(p.imag()) < kContourImag) {
            fail(Errc::numerical, "pole on the real axis; integral is undefined");
        }
    }
}

complex RationalIntegrand::operator()(complex nu) const {
    complex n = 0.0;
    for (Eigen::Index i = num_.size() - 1; i >= 0; --i) {
        n = n * nu + num_[i];
    }
    complex d = 1.0;
    for (const auto& p : poles_) {
        d *= nu - p;
    }
    return lead_ * n / d;
}

complex RationalIntegrand::residue(std::size_t index) const {
    const complex p = poles_.at(index);
    complex n = 0.0;
    for (Eigen::Index i = num_.size() - 1; i >= 0; --i) {
        n = n * p + num_[i];
    }
    complex d = 1.0;
    for (std::size_t q = 0; q < poles_.size(); ++q) {
        if (q != index) {
            d *= p - poles_[q];
        }
    }
    return lead_ * n / d;
}

complex RationalIntegrand::upper_half_integral() const {
    complex s = 0.0;
    for (std::size_t i = 0; i < poles_.size(); ++i) {
        if (poles_[i].imag() > kContourImag) {
            s += residue(i);
        }
    }
    return complex(0.0, 2.0 * std::numbers::pi) * s;
}

complex RationalIntegrand::residue_sum() const {
    complex s = 0.0;
    for (std::size_t i = 0; i < poles_.size(); ++i) {
        s += residue(i);
    }
    return s;
}

PairRoots pair_roots(double omega_k, double omega_tilde_k, double c, double gamma, double gamma_tilde) {
    check_pair_args(omega_k, omega_tilde_k, c, gamma, gamma_tilde);
    PairRoots out;
    out.omega_tilde = omega_tilde_k;
    if (c == 0.0) {
        // s_k = 1/D; track the roots of the monic -D = nu^2 - i t alpha nu - a.
        const double w2 = omega_k * omega_k;
        const double alpha = 2.0 * gamma * w2;
        auto dd = [alpha](complex nu) { return complex(0.0, -alpha) * nu; };
        out.roots = linearized_roots({complex(omega_k), complex(-omega_k)}, dd, 1.0);
        return out;
    }
    auto co = coefficients(omega_k, omega_tilde_k, c, gamma, gamma_tilde);
    auto base = base_roots(co.a, co.b, c);
    if (min_separation(base) < kRootSeparation) {
        out.degenerate = true;
        out.omega_tilde = omega_tilde_k + 1e-7 * (1.0 + std::abs(omega_tilde_k));
        co = coefficients(omega_k, out.omega_tilde, c, gamma, gamma_tilde);
        base = base_roots(co.a, co.b, c);
    }
    // dQ/dt at t = 0 with D = a - nu^2 + i t alpha nu and D~ alike.
    auto dq = [&co](complex nu) {
        const complex i_nu(0.0, 1.0);
        return i_nu * nu * (co.alpha * (co.b - nu * nu) + co.beta * (co.a - nu * nu));
    };
    out.roots = linearized_roots(base, dq, 1.0);
    double shift = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        shift = std::max(shift, std::abs(out.roots[i] - base[i]));
    }
    if (shift > kMaxShiftRatio * min_separation(base)) {
        out.exact = true;
        out.roots.clear();
        for (const auto& r : exact_pair_roots(omega_k, out.omega_tilde, c, gamma, gamma_tilde)) {
            out.roots.push_back(r.imag() > 0.0 ? r : std::conj(r));
        }
    }
    return out;
}

std::vector<complex> exact_pair_roots(double omega_k, double omega_tilde_k, double c, double gamma,
                                      double gamma_tilde) {
    check_pair_args(omega_k, omega_tilde_k, c, gamma, gamma_tilde);
    const auto co = coefficients(omega_k, omega_tilde_k, c, gamma, gamma_tilde);
    const complex I(0.0, 1.0);
    // Q = nu^4 - i(alpha+beta) nu^3 - (a+b+alpha beta) nu^2 + i(alpha b + a beta) nu + ab - c^2.
    const std::array<complex, 4> q{complex(co.a * co.b - c * c), I * (co.alpha * co.b + co.a * co.beta),
                                   complex(-(co.a + co.b + co.alpha * co.beta)), -I * (co.alpha + co.beta)};
    CMatrix comp = CMatrix::Zero(4, 4);
    for (int i = 1; i < 4; ++i) {
        comp(i, i - 1) = 1.0;
    }
    for (int i = 0; i < 4; ++i) {
        comp(i, 3) = -q[static_cast<std::size_t>(i)];
    }
    Eigen::ComplexEigenSolver<CMatrix> es(comp, false);
    std::vector<complex> roots(es.eigenvalues().data(), es.eigenvalues().data() + 4);
    auto eval = [&](complex x) {
        complex v = 1.0;
        complex d = 0.0;
        for (int i = 3; i >= 0; --i) {
            d = d * x + v;
            v = v * x + q[static_cast<std::size_t>(i)];
        }
        return std::pair{v, d};
    };
    for (auto& r : roots) {
        for (int it = 0; it < 3; ++it) {
            const auto [v, d] = eval(r);
            if (d == complex(0.0)) {
                break;
            }
            r -= v / d;
        }
    }
    return roots;
}

PairValue ago_pair_integral(double omega_k, double omega_tilde_k, double omega_j, double c, double gamma,
                            double gamma_tilde, double h) {
    require(std::isfinite(omega_j) && omega_j > 0.0, "omega_j must be > 0");
    require(std::isfinite(h) && h > 0.0, "h must be > 0");
    const auto pr = pair_roots(omega_k, omega_tilde_k, c, gamma, gamma_tilde);
    return pair_from_roots(pr, omega_k, omega_j, c, gamma, gamma_tilde, h);
}

QuadratureResult ago_pair_quadrature(double omega_k, double omega_tilde_k, double omega_j, double c, double gamma,
                                     double gamma_tilde, double h, double rel_tol) {
    require(std::isfinite(omega_j) && omega_j > 0.0, "omega_j must be > 0");
    require(std::isfinite(h) && h > 0.0, "h must be > 0");
    auto poles = exact_pair_roots(omega_k, omega_tilde_k, c, gamma, gamma_tilde);
    poles.emplace_back(omega_j, h);
    const double lead = h / std::numbers::pi;
    auto f = [=](double nu) {
        const double s2 = std::norm(s_k_response(nu, omega_k, omega_tilde_k, c, gamma, gamma_tilde));
        const double e = nu - omega_j;
        return s2 * lead / (e * e + h * h);
    };
    return integrate_real_line(f, pole_breakpoints(poles), rel_tol);
}

std::string to_string(AuxTopology t) { return t == AuxTopology::mirrored ? "mirrored" : "complete"; }

AuxTopology aux_topology_from_string(const std::string& s) {
    if (s == "mirrored") {
        return AuxTopology::mirrored;
    }
    if (s == "complete") {
        return AuxTopology::complete;
    }
    fail(Errc::invalid_argument, "unknown aux topology '" + s + "' (expected mirrored or complete)");
}

std::vector<Edge> AgoProblem::aux_edges() const {
    return topology == AuxTopology::mirrored ? main.edges() : complete_edges(n());
}

double AgoProblem::budget() const { return r_m * (w_tot > 0.0 ? w_tot : main.total_weight()); }

void AgoProblem::validate() const {
    params.validate();
    require(std::isfinite(gamma_aux) && gamma_aux > 0.0, "gamma_aux must be > 0");
    require(std::isfinite(h) && h > 0.0, "h must be > 0");
    require(std::isfinite(r_m) && r_m >= 0.0, "r_m must be >= 0");
    require(aux_weights.size() == static_cast<Eigen::Index>(aux_edges().size()),
            "aux weight vector length does not match the aux topology");
    require(aux_weights.allFinite() && (aux_weights.array() >= 0.0).all(), "aux weights must be >= 0");
    require(std::isfinite(c) && c >= 0.0, "c must be >= 0");
    const double used = aux_weights.sum() + n() * c;
    if (used > budget() * (1.0 + 1e-12) + 1e-12) {
        fail(Errc::infeasible, "aux weights and coupling exceed the budget r_m * w_tot");
    }
}

CombinedSystem AgoProblem::combined() const {
    CombinedSystem sys;
    sys.main = main;
    sys.params = params;
    sys.aux_edges = aux_edges();
    sys.aux_weights = aux_weights;
    sys.c = c;
    sys.gamma_aux = gamma_aux;
    sys.validate();
    return sys;
}

AgoProblem default_ago_problem(const WeightedGraph& main, const DynamicsParams& p, AuxTopology t, double gamma_aux,
                               double h, double r_m) {
    AgoProblem pr;
    pr.main = main;
    pr.params = p;
    pr.topology = t;
    pr.gamma_aux = gamma_aux;
    pr.h = h;
    pr.r_m = r_m;
    const double w_tot = main.total_weight();
    const auto m = static_cast<double>(pr.aux_edges().size());
    if (t == AuxTopology::mirrored) {
        pr.aux_weights = main.weights();
    } else {
        pr.aux_weights = Vector::Constant(static_cast<Eigen::Index>(m), m > 0 ? w_tot / m : 0.0);
    }
    pr.c = w_tot / pr.n();
    // Scale down if r_m is too small to hold w_tot of aux weight plus w_tot of coupling.
    const double used = pr.aux_weights.sum() + pr.n() * pr.c;
    if (used > pr.budget()) {
        const double s = used > 0.0 ? pr.budget() / used : 0.0;
        pr.aux_weights *= s;
        pr.c *= s;
    }
    return pr;
}

double ago_mode_term(const Vector& main_omegas, Eigen::Index k, double aux_omega, double c, double gamma,
                     double gamma_aux, double h) {
    const auto n = main_omegas.size();
    require(k >= 0 && k < n, "mode index out of range");
    const auto pr = pair_roots(main_omegas[k], aux_omega, c, gamma, gamma_aux);
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        s += pair_from_roots(pr, main_omegas[k], main_omegas[j], c, gamma, gamma_aux, h).value;
    }
    return s / static_cast<double>(n * n);
}

Vector ago_mode_terms(const Vector& main_omegas, const Vector& aux_omegas, double c, double gamma, double gamma_aux,
                      double h) {
    const auto n = main_omegas.size();
    require(n > 0 && aux_omegas.size() == n, "main and aux spectra must have the same nonzero length");
    Vector terms(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        terms[k] = ago_mode_term(main_omegas, k, aux_omegas[k], c, gamma, gamma_aux, h);
    }
    return terms;
}

AgoValue ago_objective_from_frequencies(const Vector& main_omegas, const Vector& aux_omegas, double c, double gamma,
                                        double gamma_aux, double h) {
    const auto n = main_omegas.size();
    require(n > 0 && aux_omegas.size() == n, "main and aux spectra must have the same nonzero length");
    require(std::isfinite(h) && h > 0.0, "h must be > 0");
    AgoValue out;
    double s = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto pr = pair_roots(main_omegas[k], aux_omegas[k], c, gamma, gamma_aux);
        out.degenerate_pairs += pr.degenerate ? static_cast<int>(n) : 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            s += pair_from_roots(pr, main_omegas[k], main_omegas[j], c, gamma, gamma_aux, h).value;
        }
    }
    out.value = s / static_cast<double>(n * n);
    out.large_damping = std::max(gamma, gamma_aux) > 1e-2 * h;
    return out;
}

AgoValue ago_objective(const AgoProblem& problem, const Vector& aux_weights, double c) {
    const auto main_omegas = natural_frequencies(problem.main, problem.params);
    const auto edges = problem.aux_edges();
    require(aux_weights.size() == static_cast<Eigen::Index>(edges.size()), "aux weight vector has the wrong length");
    const auto aux_omegas = natural_frequencies(problem.n(), edges, aux_weights, problem.params.epsilon);
    return ago_objective_from_frequencies(main_omegas, aux_omegas, c, problem.params.gamma, problem.gamma_aux,
                                          problem.h);
}

AgoValue ago_objective(const AgoProblem& problem) { return ago_objective(problem, problem.aux_weights, problem.c); }

double ago_objective_quadrature(const Vector& main_omegas, const Vector& aux_omegas, double c, double gamma,
                                double gamma_aux, double h) {
    const auto n = main_omegas.size();
    require(n > 0 && aux_omegas.size() == n, "main and aux spectra must have the same nonzero length");
    double s = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto q = ago_pair_quadrature(main_omegas[k], aux_omegas[k], main_omegas[j], c, gamma, gamma_aux, h);
            if (!q.converged) {
                fail(Errc::not_converged, "quadrature did not reach tolerance (estimate " + std::to_string(q.value) +
                                              ", error " + std::to_string(q.error) + ")");
            }
            s += q.value;
        }
    }
    return s / static_cast<double>(n * n);
}

std::vector<SweepPoint> damping_sweep(const AgoProblem& problem, const std::vector<double>& grid) {
    require(!grid.empty(), "damping grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        require(std::isfinite(grid[i]) && grid[i] > 0.0, "damping grid values must be > 0");
        require(i == 0 || grid[i] > grid[i - 1], "damping grid must be ascending");
    }
    const auto main_omegas = natural_frequencies(problem.main, problem.params);
    const auto aux_omegas =
        natural_frequencies(problem.n(), problem.aux_edges(), problem.aux_weights, problem.params.epsilon);
    const double gamma = problem.params.gamma;
    std::vector<SweepPoint> out;
    out.reserve(grid.size());
    for (double gt : grid) {
        SweepPoint p;
        p.gamma_tilde = gt;
        if (std::max(gamma, gt) <= 1e-2 * problem.h) {
            p.method = SweepMethod::residue;
            p.j_tilde = ago_objective_from_frequencies(main_omegas, aux_omegas, problem.c, gamma, gt, problem.h).value;
        } else {
            p.method = SweepMethod::quadrature;
            p.j_tilde = ago_objective_quadrature(main_omegas, aux_omegas, problem.c, gamma, gt, problem.h);
        }
        out.push_back(p);
    }
    return out;
}

std::string to_csv(const std::vector<SweepPoint>& sweep) {
    std::string out = "gamma_tilde,J_tilde,method_flag\n";
    char buf[128];
    for (const auto& p : sweep) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s\n", p.gamma_tilde, p.j_tilde,
                      p.method == SweepMethod::residue ? "residue" : "quadrature");
        out += buf;
    }
    return out;
}

}  // namespace netres
