#include "core/attack.hpp"

#include <cmath>
#include <numbers>

#include "core/error.hpp"

namespace netres {

void AttackModel::validate() const {
    require(std::isfinite(h) && h > 0.0, "Cauchy spread h must be > 0");
    require(omegas.size() > 0, "attack model needs at least one center frequency");
    for (Eigen::Index j = 0; j < omegas.size(); ++j) {
        require(std::isfinite(omegas[j]) && omegas[j] > 0.0, "center frequencies must be > 0");
    }
}

Vector sample_forcing_vector(int n, Rng& rng) {
    require(n >= 1, "forcing vector dimension must be >= 1");
    Vector f(n);
    for (;;) {
        for (int i = 0; i < n; ++i) {
            f[i] = rng.normal();
        }
        const double norm = f.norm();
        if (norm >= 1e-300) {
            return f / norm;
        }
    }
}

double mixture_pdf(double nu, const AttackModel& model) {
    const double h = model.h;
    double s = 0.0;
    for (Eigen::Index j = 0; j < model.omegas.size(); ++j) {
        const double d = model.omegas[j] - nu;
        s += h / (d * d + h * h);
    }
    return s / (std::numbers::pi * static_cast<double>(model.omegas.size()));
}

double mixture_cdf(double nu, const AttackModel& model) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < model.omegas.size(); ++j) {
        s += 0.5 + std::atan((nu - model.omegas[j]) / model.h) / std::numbers::pi;
    }
    return s / static_cast<double>(model.omegas.size());
}

double cauchy_quantile(double center, double h, double p) {
    require(p > 0.0 && p < 1.0, "Cauchy quantile needs p in (0, 1)");
    return center + h * std::tan(std::numbers::pi * (p - 0.5));
}

double sample_forcing_frequency(const AttackModel& model, Rng& rng) {
    const auto idx = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(model.omegas.size())));
    return cauchy_quantile(model.omegas[idx], model.h, rng.uniform_open());
}

ForcingSample sample_attack(const AttackModel& model, int n, Rng& rng) {
    ForcingSample s;
    s.f = sample_forcing_vector(n, rng);
    s.nu = sample_forcing_frequency(model, rng);
    return s;
}

}  // namespace netres
