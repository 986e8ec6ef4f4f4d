#include "core/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

namespace netres {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr unsigned kMaxDepth = 30;

}  // namespace

QuadratureResult integrate_real_line(const std::function<double(double)>& f, std::vector<double> breakpoints,
                                     double rel_tol) {
    if (breakpoints.empty()) {
        breakpoints.push_back(0.0);
    }
    std::sort(breakpoints.begin(), breakpoints.end());
    // Panels only a few ulps wide make the Kronrod error estimate meaningless.
    double span = 0.0;
    for (double b : breakpoints) {
        span = std::max(span, std::abs(b));
    }
    const double merge = 1e-13 * std::max(span, 1.0);
    std::vector<double> kept{breakpoints.front()};
    for (double b : breakpoints) {
        if (b - kept.back() > merge) {
            kept.push_back(b);
        }
    }
    breakpoints = std::move(kept);

    QuadratureResult out;
    double l1 = 0.0;
    auto panel = [&](double a, double b) {
        double err = 0.0;
        double seg_l1 = 0.0;
        double v = 0.0;
        if (std::isinf(a) || std::isinf(b)) {
            v = Kronrod::integrate(f, a, b, kMaxDepth, rel_tol, &err, &seg_l1);
        } else {
            // Boost compares unscaled sub-panel errors against scaled
            // tolerances, so narrow panels are mapped onto [-1, 1] first.
            const double mid = 0.5 * (a + b);
            const double half = 0.5 * (b - a);
            auto g = [&](double t) { return half * f(mid + half * t); };
            v = Kronrod::integrate(g, -1.0, 1.0, kMaxDepth, rel_tol, &err, &seg_l1);
        }
        out.value += v;
        out.error += err;
        l1 += seg_l1;
    };
    const double inf = std::numeric_limits<double>::infinity();
    panel(-inf, breakpoints.front());
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        panel(breakpoints[i - 1], breakpoints[i]);
    }
    panel(breakpoints.back(), inf);
    out.converged = std::isfinite(out.value) && out.error <= 10.0 * rel_tol * std::max(l1, std::abs(out.value));
    return out;
}

std::vector<double> pole_breakpoints(std::span<const complex> poles) {
    double scale = 1.0;
    for (const auto& p : poles) {
        scale = std::max(scale, std::abs(p.real()) + std::abs(p.imag()));
    }
    std::vector<double> bp;
    for (const auto& p : poles) {
        const double x = p.real();
        bp.push_back(x);
        double w = std::max(std::abs(p.imag()), 1e-14 * scale);
        for (; w < 2.0 * scale; w *= 10.0) {
            bp.push_back(x - w);
            bp.push_back(x + w);
        }
        bp.push_back(x - 2.0 * scale);
        bp.push_back(x + 2.0 * scale);
    }
    return bp;
}

}  // namespace netres
