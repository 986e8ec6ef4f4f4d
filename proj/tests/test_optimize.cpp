#include <doctest.h>

#include <json.hpp>

#include <algorithm>

#include "core/ago.hpp"
#include "core/export.hpp"
#include "core/graph.hpp"
#include "core/ngo.hpp"
#include "core/optimize.hpp"
#include "core/rng.hpp"
#include "core/spectral.hpp"
#include "helpers.hpp"

using namespace netres;
using netres::test::error_code_of;

namespace {

NgoProblem ngo_problem(const WeightedGraph& g) {
    NgoProblem p;
    p.graph = g;
    p.params.epsilon = 10.0;
    p.params.gamma = 1e-6;
    p.h = 0.1;
    p.w_min = 1e-3;
    return p;
}

void check_monotone(const std::vector<double>& j) {
    for (std::size_t i = 1; i < j.size(); ++i) {
        CHECK(j[i] <= j[i - 1]);
    }
}

}  // namespace

TEST_CASE("percent decrease") {
    CHECK(percent_decrease(1.378, 0.3778) == doctest::Approx(72.58).epsilon(1e-4));
    CHECK(percent_decrease(2.0, 2.0) == 0.0);
}

TEST_CASE("NGO projection") {
    SUBCASE("feasible input is returned unchanged") {
        Vector w(4);
        w << 0.5, 1.5, 1.0, 1.0;
        CHECK((project_ngo(w, 4.0, 1e-3) - w).norm() <= 1e-15);
    }
    SUBCASE("output meets the simplex constraints") {
        Vector w(5);
        w << -3.0, 10.0, 0.2, 0.0, 2.0;
        const Vector p = project_ngo(w, 3.0, 0.1);
        CHECK(p.sum() == doctest::Approx(3.0).epsilon(1e-15));
        CHECK(p.minCoeff() >= 0.1);
    }
    SUBCASE("infeasible budget") {
        CHECK(error_code_of([] { (void)project_ngo(Vector::Ones(3), 0.1, 0.1); }) == Errc::infeasible);
    }
}

TEST_CASE("AGO projection") {
    SUBCASE("interior point is unchanged") {
        Vector w(3);
        w << 0.2, 0.3, 0.1;
        const auto [pw, pc] = project_ago(w, 0.1, 10.0, 4);
        CHECK(pw == w);
        CHECK(pc == 0.1);
    }
    SUBCASE("budget is met with equality when exceeded") {
        Vector w(3);
        w << 5.0, -1.0, 2.0;
        const auto [pw, pc] = project_ago(w, 3.0, 4.0, 2);
        CHECK(pw.minCoeff() >= 0.0);
        CHECK(pc >= 0.0);
        CHECK(pw.sum() + 2.0 * pc == doctest::Approx(4.0).epsilon(1e-14));
    }
    SUBCASE("zero budget pins everything to zero") {
        const auto [pw, pc] = project_ago(Vector::Ones(3), 1.0, 0.0, 3);
        CHECK(pw.norm() == 0.0);
        CHECK(pc == 0.0);
    }
}

TEST_CASE("NGO optimization") {
    SUBCASE("uniform complete graph is stationary") {
        const auto r = optimize_ngo(ngo_problem(gen_rcg(5, 0.0, 1)));
        CHECK(std::abs(r.percent_decrease) < 1e-6);
        CHECK(r.residuals.max() <= 1e-9);
    }
    SUBCASE("perturbed graph improves, stays feasible, decreases monotonically") {
        const auto p = ngo_problem(gen_rcg(8, 0.3, 4));
        const auto r = optimize_ngo(p);
        CHECK(r.converged);
        CHECK(r.j_star < r.j0);
        CHECK(r.j0 == doctest::Approx(ngo_objective(p)));
        CHECK(r.j_star == doctest::Approx(ngo_objective(p, r.w_star)).epsilon(1e-12));
        CHECK(r.residuals.max() <= 1e-9);
        CHECK(std::abs(r.w_star.sum() - p.graph.total_weight()) <= 1e-9);
        CHECK(r.w_star.minCoeff() >= p.w_min - 1e-12);
        CHECK(r.iterates.front() == r.j0);
        CHECK(r.iterates.back() == r.j_star);
        check_monotone(r.iterates);
    }
    SUBCASE("multi-start is deterministic and logs every start") {
        OptOptions o;
        o.starts = 3;
        o.seed = 7;
        o.threads = 1;
        const auto p = ngo_problem(gen_rcg(6, 0.3, 2));
        const auto a = optimize_ngo(p, o);
        o.threads = 3;
        const auto b = optimize_ngo(p, o);
        CHECK(a.starts.size() == 3);
        CHECK(a.j_star == b.j_star);
        CHECK(a.w_star == b.w_star);
        for (const auto& s : a.starts) {
            CHECK(a.j_star <= s.j_star);
        }
    }
    SUBCASE("iteration cap reports non-convergence") {
        OptOptions o;
        o.max_iter = 1;
        const auto r = optimize_ngo(ngo_problem(gen_rcg(8, 0.3, 4)), o);
        CHECK_FALSE(r.converged);
        CHECK(r.iterations == 1);
    }
}

TEST_CASE("optimized spectrum is flatter") {
    const auto p = ngo_problem(gen_rcg(8, 0.3, 6));
    const auto r = optimize_ngo(p);
    const auto before = spectrum_histogram(sym_eig(laplacian(p.graph)).values, 5);
    const auto after = spectrum_histogram(sym_eig(laplacian(p.graph.with_weights(r.w_star))).values, 5);
    SUBCASE("eigenvalue variance decreases") {
        CHECK(after.variance < before.variance);
    }
    SUBCASE("tallest histogram bin shrinks") {
        CHECK(*std::max_element(after.counts.begin(), after.counts.end()) <
              *std::max_element(before.counts.begin(), before.counts.end()));
    }
}

TEST_CASE("AGO optimization") {
    const auto g = gen_rcg(5, 0.3, 3);
    DynamicsParams p;
    SUBCASE("zero budget keeps the main objective") {
        auto pr = default_ago_problem(g, p, AuxTopology::complete, 1e-6, 0.1, 0.0);
        const auto r = optimize_ago(pr);
        CHECK(r.c_star == 0.0);
        CHECK(r.j_star == doctest::Approx(r.j_main).epsilon(1e-12));
    }
    SUBCASE("aux graph lowers the objective within budget") {
        auto pr = default_ago_problem(g, p, AuxTopology::complete, 1e-6, 0.1, 5.0);
        const auto r = optimize_ago(pr);
        CHECK(r.ago);
        CHECK(r.j_star < r.j0);
        CHECK(r.residuals.max() <= 1e-9);
        CHECK(r.w_star.minCoeff() >= 0.0);
        CHECK(r.w_star.sum() + 5.0 * r.c_star <= pr.budget() + 1e-9);
        check_monotone(r.iterates);
    }
    SUBCASE("finite-difference and spectral gradients reach the same objective") {
        auto pr = default_ago_problem(g, p, AuxTopology::mirrored, 1e-6, 0.1, 5.0);
        OptOptions o;
        o.ago_gradient = AgoGradient::finite_difference;
        const auto fd = optimize_ago(pr, o);
        o.ago_gradient = AgoGradient::spectral;
        const auto sp = optimize_ago(pr, o);
        CHECK(fd.gradient == "finite_difference");
        CHECK(sp.j_star == doctest::Approx(fd.j_star).epsilon(1e-3));
    }
}

TEST_CASE("parameter study") {
    StudyBase base;
    base.n = 5;
    base.seed = 3;
    SUBCASE("singleton grid matches a direct run") {
        const auto rows = param_study(base, "n", {5.0});
        REQUIRE(rows.size() == 1);
        const auto g = gen_rcg(5, base.weight_perturbation, Rng(base.seed, 0x50415241).split(0).key());
        NgoProblem p = ngo_problem(g);
        p.params = base.params;
        const auto r = optimize_ngo(p, base.options);
        CHECK(rows[0].percent_decrease == doctest::Approx(r.converged ? r.percent_decrease : 0.0).epsilon(1e-12));
        CHECK(rows[0].converged == r.converged);
    }
    SUBCASE("rows keep grid order and parallel runs agree") {
        const auto a = param_study(base, "epsilon", {5.0, 10.0, 20.0}, 1);
        const auto b = param_study(base, "epsilon", {5.0, 10.0, 20.0}, 3);
        REQUIRE(a.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(a[i].value == b[i].value);
            CHECK(a[i].percent_decrease == b[i].percent_decrease);
        }
        CHECK(to_csv(a).rfind("param,value,percent_decrease,converged\n", 0) == 0);
    }
    SUBCASE("unknown parameter") {
        CHECK(error_code_of([&] { (void)param_study(base, "colour", {1.0}); }) == Errc::invalid_argument);
    }
}

TEST_CASE("result export") {
    const auto p = ngo_problem(gen_rcg(4, 0.3, 1));
    const auto r = optimize_ngo(p);
    const auto j = nlohmann::json::parse(to_json(r, p.graph.edges()));
    CHECK(j["problem"] == "ngo");
    CHECK(j["w_star"].size() == 6);
    CHECK(j["edges"].size() == 6);
    CHECK(j["trajectory"].size() == r.iterates.size());
    CHECK(j["J_star"].get<double>() == r.j_star);
    CHECK(j.contains("constraint_residuals"));
    const auto g = nlohmann::json::parse(graph_to_json(p.graph));
    CHECK(g["n"] == 4);
    CHECK(g["edges"][0][0] == 1);
}
