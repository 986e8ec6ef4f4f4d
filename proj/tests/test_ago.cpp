#include <doctest.h>

#include <cmath>
#include <numbers>

#include "core/ago.hpp"
#include "core/graph.hpp"
#include "core/ngo.hpp"
#include "core/spectral.hpp"
#include "helpers.hpp"

using namespace netres;
using netres::test::error_code_of;
using netres::test::rel_err;

TEST_CASE("uncoupled mode response is the main eigencomponent") {
    for (double nu : {-3.0, 0.5, 2.9, 3.1}) {
        const double w = 3.0;
        const double gamma = 1e-3;
        const complex expect = 1.0 / complex(-nu * nu + w * w, 2.0 * nu * gamma * w * w);
        CHECK(std::abs(s_k_response(nu, w, 1.7, 0.0, gamma, 1e-3) - expect) <= 1e-14 * std::abs(expect));
    }
}

TEST_CASE("coupled mode response matches a 2x2 solve") {
    const double wk = 3.0;
    const double wt = 2.5;
    const double c = 0.8;
    const double g = 1e-3;
    const double gt = 2e-2;
    for (double nu : {1.0, 2.6, 3.2}) {
        CMatrix s(2, 2);
        const complex i(0.0, 1.0);
        s(0, 0) = -nu * nu + i * nu * 2.0 * g * wk * wk + wk * wk + c;
        s(1, 1) = -nu * nu + i * nu * 2.0 * gt * wt * wt + wt * wt + c;
        s(0, 1) = s(1, 0) = -c;
        const complex expect = s.inverse()(0, 0);
        CHECK(std::abs(s_k_response(nu, wk, wt, c, g, gt) - expect) <= 1e-12 * std::abs(expect));
    }
}

TEST_CASE("first-order root tracking") {
    SUBCASE("binomial example") {
        // Q(x, t) = x^2 - (1 + t): dQ/dt = -1, roots +-(1 + t/2).
        const auto r = linearized_roots({complex(1.0), complex(-1.0)}, [](complex) { return complex(-1.0); }, 1e-3);
        CHECK(std::abs(r[0] - complex(1.0005)) < 1e-15);
        CHECK(std::abs(r[1] - complex(-1.0005)) < 1e-15);
    }
    SUBCASE("coincident base roots are rejected") {
        CHECK(error_code_of([] {
                  (void)linearized_roots({complex(1.0), complex(1.0)}, [](complex) { return complex(1.0); }, 1e-3);
              }) == Errc::numerical);
    }
    SUBCASE("linearized roots agree with exact roots to second order") {
        for (double c : {0.5, 2.0}) {
            const double gamma = 1e-5;
            const auto lin = pair_roots(2.0, 3.0, c, gamma, gamma).roots;
            const auto ex = exact_pair_roots(2.0, 3.0, c, gamma, gamma);
            REQUIRE(lin.size() == 4);
            for (const auto& r : lin) {
                double best = 1e300;
                for (const auto& e : ex) {
                    best = std::min(best, std::abs(r - e));
                }
                CHECK(best < 1e-8);
                CHECK(r.imag() > 0.0);
            }
        }
    }
}

TEST_CASE("rational residue integrals") {
    SUBCASE("Lorentzian") {
        const RationalIntegrand f(CVector::Ones(1), {complex(0.0, 1.0), complex(0.0, -1.0)});
        CHECK(std::abs(f.upper_half_integral() - complex(std::numbers::pi)) < 1e-14);
        CHECK(std::abs(f.residue_sum()) < 1e-15);
    }
    SUBCASE("residues sum to zero when the degree gap is at least two") {
        const std::vector<complex> poles{{1.0, 0.5}, {1.0, -0.5}, {-2.0, 0.1}, {-2.0, -0.1}, {0.3, 2.0}, {0.3, -2.0}};
        CVector num(3);
        num << 1.0, complex(0.0, 0.5), 2.0;
        const RationalIntegrand f(num, poles, 0.7);
        double scale = 0.0;
        for (std::size_t i = 0; i < poles.size(); ++i) {
            scale = std::max(scale, std::abs(f.residue(i)));
        }
        CHECK(std::abs(f.residue_sum()) <= 1e-13 * scale);
    }
    SUBCASE("residue matches a small-circle contour integral") {
        const std::vector<complex> poles{{1.0, 0.5}, {1.0, -0.5}, {-2.0, 0.1}, {-2.0, -0.1}};
        CVector num(2);
        num << 1.0, 3.0;
        const RationalIntegrand f(num, poles);
        const complex z0 = poles[0];
        const double rad = 1e-2;
        const int m = 256;
        complex s = 0.0;
        for (int k = 0; k < m; ++k) {
            const complex e = std::polar(1.0, 2.0 * std::numbers::pi * k / m);
            s += f(z0 + rad * e) * rad * e;
        }
        s /= static_cast<double>(m);
        CHECK(std::abs(s - f.residue(0)) <= 1e-10 * std::abs(f.residue(0)));
    }
    SUBCASE("invalid setups") {
        CHECK(error_code_of([] { (void)RationalIntegrand(CVector::Ones(1), {complex(1.0, 0.0), complex(0, 1)}); }) ==
              Errc::numerical);
        CHECK(error_code_of([] { (void)RationalIntegrand(CVector::Ones(2), {complex(0, 1), complex(0, -1)}); }) ==
              Errc::invalid_argument);
    }
}

TEST_CASE("pair integral") {
    SUBCASE("uncoupled case matches the main-only quadrature") {
        for (double wk : {1.5, 3.0}) {
            for (double wj : {1.0, 3.1}) {
                const auto r = ago_pair_integral(wk, 2.0, wj, 0.0, 1e-5, 1e-5, 0.1);
                const auto q = g_quadrature(wk, wj, 1e-5, 0.1, 1e-10);
                CHECK(rel_err(r.value, 0.1 / std::numbers::pi * q.value) < 1e-6);
            }
        }
    }
    SUBCASE("coupled case matches direct quadrature") {
        for (double c : {0.5, 2.0}) {
            const auto r = ago_pair_integral(3.0, 2.0, 3.3, c, 1e-5, 1e-5, 0.1);
            const auto q = ago_pair_quadrature(3.0, 2.0, 3.3, c, 1e-5, 1e-5, 0.1);
            CHECK(q.converged);
            CHECK(r.value > 0.0);
            CHECK(rel_err(r.value, q.value) < 1e-3);
        }
    }
    SUBCASE("coincident base roots are perturbed and flagged") {
        const auto pr = pair_roots(2.0, 2.0, 1e-12, 1e-5, 1e-5);
        CHECK(pr.degenerate);
        CHECK(pr.omega_tilde > 2.0);
        const auto r = ago_pair_integral(2.0, 2.0, 2.1, 1e-12, 1e-5, 1e-5, 0.1);
        CHECK(r.degenerate);
        const auto ref = ago_pair_integral(2.0, 2.0, 2.1, 0.0, 1e-5, 1e-5, 0.1);
        CHECK(rel_err(r.value, ref.value) < 1e-3);
    }
    SUBCASE("large damping is marked") {
        CHECK(ago_pair_integral(3.0, 2.0, 3.0, 0.5, 1e-2, 1e-5, 0.1).large_damping);
        CHECK_FALSE(ago_pair_integral(3.0, 2.0, 3.0, 0.5, 1e-5, 1e-5, 0.1).large_damping);
    }
}

TEST_CASE("objective by residues agrees with quadrature objective") {
    Vector main(3);
    Vector aux(3);
    main << 3.2, 3.6, 4.0;
    aux << 3.3, 3.8, 4.5;
    for (double c : {0.0, 0.7}) {
        const double r = ago_objective_from_frequencies(main, aux, c, 1e-5, 1e-4, 0.1).value;
        const double q = ago_objective_quadrature(main, aux, c, 1e-5, 1e-4, 0.1);
        CHECK(rel_err(r, q) < 1e-3);
    }
}

TEST_CASE("aux problem setup") {
    const auto g = gen_rcg(5, 0.3, 2);
    DynamicsParams p;
    SUBCASE("mirrored start copies the main weights") {
        const auto pr = default_ago_problem(g, p, AuxTopology::mirrored, 1e-6, 0.1, 5.0);
        CHECK(pr.aux_edges() == g.edges());
        CHECK(pr.aux_weights == g.weights());
        CHECK(pr.c == doctest::Approx(g.total_weight() / 5.0));
        pr.validate();
    }
    SUBCASE("complete start is uniform and fits the budget") {
        const auto pr = default_ago_problem(g, p, AuxTopology::complete, 1e-6, 0.1, 1.0);
        CHECK(pr.aux_edges().size() == 10);
        CHECK(pr.aux_weights.maxCoeff() == doctest::Approx(pr.aux_weights.minCoeff()));
        CHECK(pr.aux_weights.sum() + 5.0 * pr.c <= pr.budget() * (1.0 + 1e-12));
        pr.validate();
    }
    SUBCASE("budget violation is infeasible") {
        auto pr = default_ago_problem(g, p, AuxTopology::complete, 1e-6, 0.1, 1.0);
        pr.c = 10.0 * pr.budget();
        CHECK(error_code_of([&] { pr.validate(); }) == Errc::infeasible);
    }
    SUBCASE("topology names round trip") {
        CHECK(aux_topology_from_string(to_string(AuxTopology::mirrored)) == AuxTopology::mirrored);
        CHECK(aux_topology_from_string(to_string(AuxTopology::complete)) == AuxTopology::complete);
        CHECK(error_code_of([] { (void)aux_topology_from_string("ring"); }) == Errc::invalid_argument);
    }
    SUBCASE("combined system mirrors the problem") {
        const auto pr = default_ago_problem(g, p, AuxTopology::complete, 1e-6, 0.1, 5.0);
        const auto cs = pr.combined();
        CHECK(cs.c == pr.c);
        CHECK(cs.aux_weights == pr.aux_weights);
        CHECK(cs.gamma_aux == pr.gamma_aux);
    }
}

TEST_CASE("damping sweep") {
    const auto g = gen_rcg(4, 0.3, 3);
    DynamicsParams p;
    const auto pr = default_ago_problem(g, p, AuxTopology::complete, 1e-6, 0.1, 5.0);
    SUBCASE("single point equals the objective") {
        auto one = pr;
        one.gamma_aux = 1e-4;
        const auto s = damping_sweep(pr, {1e-4});
        REQUIRE(s.size() == 1);
        CHECK(s[0].method == SweepMethod::residue);
        CHECK(s[0].j_tilde == ago_objective(one).value);
    }
    SUBCASE("large damping switches to quadrature") {
        const auto s = damping_sweep(pr, {1e-5, 1.0});
        CHECK(s[0].method == SweepMethod::residue);
        CHECK(s[1].method == SweepMethod::quadrature);
        CHECK(s[1].j_tilde > 0.0);
        const auto csv = to_csv(s);
        CHECK(csv.rfind("gamma_tilde,J_tilde,method_flag\n", 0) == 0);
        CHECK(csv.find(",quadrature\n") != std::string::npos);
    }
    SUBCASE("grid validation") {
        CHECK(error_code_of([&] { (void)damping_sweep(pr, {}); }) == Errc::invalid_argument);
        CHECK(error_code_of([&] { (void)damping_sweep(pr, {1e-3, 1e-4}); }) == Errc::invalid_argument);
        CHECK(error_code_of([&] { (void)damping_sweep(pr, {0.0}); }) == Errc::invalid_argument);
    }
}
