#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/attack.hpp"
#include "core/rng.hpp"
#include "helpers.hpp"

using namespace netres;

TEST_CASE("one-dimensional forcing is a sign") {
    Rng rng(1);
    bool seen_pos = false;
    bool seen_neg = false;
    for (int i = 0; i < 200; ++i) {
        const auto f = sample_forcing_vector(1, rng);
        CHECK(std::abs(f[0]) == 1.0);
        seen_pos |= f[0] > 0;
        seen_neg |= f[0] < 0;
    }
    CHECK(seen_pos);
    CHECK(seen_neg);
}

TEST_CASE("forcing vectors are unit length with isotropic second moment") {
    Rng rng(2);
    const int n = 4;
    const int samples = 40000;
    Matrix second = Matrix::Zero(n, n);
    for (int i = 0; i < samples; ++i) {
        const auto f = sample_forcing_vector(n, rng);
        CHECK(f.norm() == doctest::Approx(1.0).epsilon(1e-14));
        second += f * f.transpose();
    }
    second /= samples;
    CHECK((second - Matrix::Identity(n, n) / n).cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("Cauchy mixture density and quantiles") {
    AttackModel m;
    m.h = 0.5;
    m.omegas = Vector::Constant(1, 1.0);
    CHECK(mixture_pdf(1.0, m) == doctest::Approx(1.0 / (std::numbers::pi * 0.5)));
    CHECK(cauchy_quantile(2.5, 0.1, 0.5) == 2.5);
    CHECK(mixture_cdf(1.0, m) == doctest::Approx(0.5));
    CHECK(cauchy_quantile(0.0, 1.0, 0.75) == doctest::Approx(1.0));
    CHECK(netres::test::error_code_of([] { (void)cauchy_quantile(0.0, 1.0, 0.0); }) == Errc::invalid_argument);
}

TEST_CASE("sampled frequencies follow the mixture (Kolmogorov-Smirnov)") {
    AttackModel m;
    m.h = 0.1;
    m.omegas = Eigen::Vector3d(3.2, 3.5, 4.1);
    Rng rng(9);
    const int n = 20000;
    std::vector<double> nu(n);
    for (auto& x : nu) {
        x = sample_forcing_frequency(m, rng);
    }
    std::sort(nu.begin(), nu.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = mixture_cdf(nu[static_cast<std::size_t>(i)], m);
        d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
    }
    // 1.63 / sqrt(n) is the 1% critical value.
    CHECK(d < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("rng streams are deterministic and split independently") {
    Rng a(5);
    Rng b(5);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    const Rng root(5);
    auto s0 = root.split(0);
    auto s1 = root.split(1);
    CHECK(s0.next_u64() != s1.next_u64());
    auto again = root.split(0);
    auto fresh = root.split(0);
    CHECK(again.next_u64() == fresh.next_u64());
    Rng u(17);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform_open();
        CHECK(x > 0.0);
        CHECK(x < 1.0);
        CHECK(u.below(7) < 7);
    }
}

TEST_CASE("single-center attack on one vertex") {
    AttackModel m;
    m.h = 0.1;
    m.omegas = Vector::Constant(1, std::sqrt(10.0));
    Rng rng(4);
    const auto s = sample_attack(m, 1, rng);
    CHECK(std::abs(s.f[0]) == 1.0);
    CHECK(std::isfinite(s.nu));
}
