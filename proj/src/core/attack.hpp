#pragma once

#include "core/rng.hpp"
#include "core/types.hpp"

namespace netres {

/// Adversary frequency model: an equal-weight mixture of Cauchy densities of
/// spread h centered on the main network's natural frequencies.
struct AttackModel {
    double h = 0.1;
    Vector omegas;

    void validate() const;
};

struct ForcingSample {
    Vector f;        // unit forcing vector
    double nu = 0.0; // forcing frequency
};

/// Uniform direction on the (n-1)-sphere: normalized standard normal draw.
[[nodiscard]] Vector sample_forcing_vector(int n, Rng& rng);

/// rho(nu) = (1/n) sum_j (h/pi) / ((omega_j - nu)^2 + h^2).
[[nodiscard]] double mixture_pdf(double nu, const AttackModel& model);
/// Mixture CDF, used by distribution tests.
[[nodiscard]] double mixture_cdf(double nu, const AttackModel& model);

/// Inverse-CDF Cauchy draw around `center` for a given uniform p in (0, 1).
[[nodiscard]] double cauchy_quantile(double center, double h, double p);

/// Two-stage draw: uniform choice of a center, then a Cauchy draw around it.
[[nodiscard]] double sample_forcing_frequency(const AttackModel& model, Rng& rng);

[[nodiscard]] ForcingSample sample_attack(const AttackModel& model, int n, Rng& rng);

}  // namespace netres
