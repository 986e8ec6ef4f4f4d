#pragma once

#include <functional>
#include <span>
#include <vector>

#include "core/types.hpp"

namespace netres {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // summed Gauss-Kronrod error estimates
    bool converged = false;
};

/// Adaptive Gauss-Kronrod over the whole real line. The line is cut at the
/// given breakpoints into finite panels plus two infinite tails.
[[nodiscard]] QuadratureResult integrate_real_line(const std::function<double(double)>& f,
                                                   std::vector<double> breakpoints, double rel_tol);

/// Panel boundaries for integrands that are rational with the given poles:
/// each pole contributes its real part and nested half-widths
/// |Im p| * 10^k out to the problem scale, so near-real poles are resolved.
[[nodiscard]] std::vector<double> pole_breakpoints(std::span<const complex> poles);

}  // namespace netres
