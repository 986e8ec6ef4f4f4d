#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "core/ago.hpp"
#include "core/attack.hpp"
#include "core/graph.hpp"
#include "core/response.hpp"
#include "core/rng.hpp"
#include "core/spectral.hpp"
#include "helpers.hpp"

using namespace netres;

namespace {

DynamicsParams params(double gamma) {
    DynamicsParams p;
    p.epsilon = 10.0;
    p.gamma = gamma;
    return p;
}

Vector unit_forcing(int n, std::uint64_t seed) {
    Rng rng(seed);
    return sample_forcing_vector(n, rng);
}

CombinedSystem random_aux(const WeightedGraph& main, const DynamicsParams& p, double c, double gamma_aux,
                          std::uint64_t seed) {
    const int n = main.vertex_count();
    const auto aux = gen_rig(n, std::min(n + 4, n * (n - 1) / 2), 0.3, seed);
    CombinedSystem s;
    s.main = main;
    s.params = p;
    s.aux_edges = aux.edges();
    s.aux_weights = aux.weights();
    s.c = c;
    s.gamma_aux = gamma_aux;
    return s;
}

}  // namespace

TEST_CASE("zero forcing gives a zero steady state") {
    const auto g = gen_rcg(5, 0.3, 1);
    CHECK(steady_state(g, params(1e-3), Vector::Zero(5), 3.3).norm() == 0.0);
}

TEST_CASE("modal steady state matches a direct complex solve") {
    const auto g = gen_rig(8, 14, 0.3, 3);
    const auto p = params(1e-3);
    const Vector f = unit_forcing(8, 2);
    for (double nu : {0.5, 3.2, 3.9, 5.0}) {
        const CVector a = steady_state(g, p, f, nu);
        const CVector b = steady_state_direct(g, p, f, nu);
        CHECK((a - b).norm() <= 1e-10 * b.norm());
    }
}

TEST_CASE("steady state satisfies the frequency-domain equation") {
    const auto g = gen_rcg(6, 0.3, 4);
    const auto p = params(1e-2);
    const Vector f = unit_forcing(6, 3);
    const double nu = 3.7;
    const CVector x = steady_state(g, p, f, nu);
    const Matrix k = stiffness(g, p);
    const CVector lhs = (-nu * nu) * x + complex(0.0, 2.0 * p.gamma * nu) * (k.cast<complex>() * x) +
                        k.cast<complex>() * x;
    CHECK((lhs - f.cast<complex>()).norm() <= 1e-10);
}

TEST_CASE("uncoupled combined system reduces to the main graph") {
    const auto g = gen_rcg(6, 0.3, 5);
    const auto p = params(1e-3);
    const auto sys = random_aux(g, p, 0.0, 1e-3, 6);
    const Vector f = unit_forcing(6, 7);
    for (double nu : {2.0, 3.3, 4.4}) {
        const CVector a = steady_state_combined(sys, f, nu);
        const CVector b = steady_state(g, p, f, nu);
        CHECK((a - b).norm() <= 1e-12 * std::max(1.0, b.norm()));
    }
}

TEST_CASE("mirrored-proportional aux decouples into scalar modes") {
    const auto g = gen_rcg(5, 0.3, 8);
    const auto p = params(1e-3);
    const auto sys = mirrored_proportional(g, p, 0.5, 1.0, 2e-3);
    const auto eig = sym_eig(laplacian(g));
    const Vector f = unit_forcing(5, 9);
    const double nu = 3.4;
    const Vector proj = eig.vectors.transpose() * f;
    CVector modal(5);
    for (int k = 0; k < 5; ++k) {
        const double wk = std::sqrt(eig.values[k] + p.epsilon);
        const double wt = std::sqrt(0.5 * eig.values[k] + p.epsilon);
        modal[k] = s_k_response(nu, wk, wt, 1.0, p.gamma, 2e-3) * proj[k];
    }
    const CVector expect = eig.vectors.cast<complex>() * modal;
    const CVector got = steady_state_combined(sys, f, nu);
    CHECK((got - expect).norm() <= 1e-10 * expect.norm());
}

TEST_CASE("response models agree with explicit solves") {
    const auto g = gen_rcg(6, 0.3, 10);
    const auto p = params(1e-3);
    const Vector f = unit_forcing(6, 11);
    const MainResponse main(g, p);
    CHECK(main.squared_norm(f, 3.1) == doctest::Approx(steady_state_direct(g, p, f, 3.1).squaredNorm()).epsilon(1e-10));
    const auto sys = random_aux(g, p, 0.7, 1e-3, 12);
    const CombinedResponse comb(sys);
    CHECK(comb.squared_norm(f, 3.1) == doctest::Approx(steady_state_combined(sys, f, 3.1).squaredNorm()).epsilon(1e-10));
}

TEST_CASE("Monte Carlo bookkeeping") {
    const auto g = gen_rcg(4, 0.3, 1);
    const auto p = params(1e-2);
    const MainResponse model(g, p);
    AttackModel attack;
    attack.h = 0.1;
    attack.omegas = model.omegas();

    SUBCASE("one sample equals that sample, stderr is NaN") {
        MonteCarloOptions o;
        o.samples = 1;
        o.seed = 3;
        const auto r = monte_carlo_vulnerability(model, attack, o);
        Rng rng = Rng(3).split(0);
        const auto s = sample_attack(attack, 4, rng);
        CHECK(r.mean == model.squared_norm(s.f, s.nu));
        CHECK(std::isnan(r.standard_error));
    }
    SUBCASE("results do not depend on the thread count") {
        MonteCarloOptions o;
        o.samples = 5000;
        o.batch_size = 700;
        o.threads = 1;
        const auto a = monte_carlo_vulnerability(model, attack, o);
        o.threads = 4;
        const auto b = monte_carlo_vulnerability(model, attack, o);
        CHECK(a.mean == b.mean);
        CHECK(a.standard_error == b.standard_error);
        CHECK(a.running.size() == 8);
        CHECK(a.running.back().samples == 5000);
    }
    SUBCASE("running average CSV has one row per batch") {
        MonteCarloOptions o;
        o.samples = 3000;
        o.batch_size = 1000;
        const auto r = monte_carlo_vulnerability(model, attack, o);
        const auto csv = running_average_csv(r, 1.0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    }
}

TEST_CASE("time-domain simulation") {
    const auto g = gen_rcg(4, 0.3, 2);
    const auto p = params(1e-2);
    const auto sys = make_system(g, p);
    SUBCASE("zero forcing and zero state stay at rest") {
        const auto tr = simulate_dynamics(sys, Vector::Zero(4), 3.0);
        CHECK(std::all_of(tr.squared_norm.begin(), tr.squared_norm.end(), [](double x) { return x == 0.0; }));
    }
    SUBCASE("envelope settles on the steady-state amplitude") {
        const Vector f = unit_forcing(4, 5);
        const auto tr = simulate_dynamics(sys, f, 3.6);
        CHECK(tr.settled);
        CHECK(std::abs(tr.final_envelope_ratio - 1.0) < 5e-3);
        CHECK(tr.reference == doctest::Approx(steady_state(g, p, f, 3.6).squaredNorm()));
    }
    SUBCASE("combined system settles too") {
        CombinedSystem cs = random_aux(g, p, 0.5, 1e-2, 3);
        const auto tr = simulate_dynamics(make_system(cs), unit_forcing(4, 6), 3.4);
        CHECK(std::abs(tr.final_envelope_ratio - 1.0) < 5e-3);
    }
    SUBCASE("single undamped-limit oscillator follows the RK4 solution") {
        // x'' + x = cos(2t), x(0) = v(0) = 0  =>  x(t) = (cos t - cos 2t) / 3
        SecondOrderSystem one;
        one.stiffness = Matrix::Identity(1, 1);
        one.damping = Matrix::Zero(1, 1);
        one.observed = 1;
        Vector x = Vector::Zero(1);
        Vector v = Vector::Zero(1);
        const double dt = 1e-3;
        integrate_rk4(one, Vector::Ones(1), 2.0, dt, 5000, x, v, 0.0, [](double, const Vector&, const Vector&) {
            return true;
        });
        CHECK(x[0] == doctest::Approx((std::cos(5.0) - std::cos(10.0)) / 3.0).epsilon(1e-9));
    }
}
