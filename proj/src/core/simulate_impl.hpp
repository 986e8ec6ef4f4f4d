#pragma once

#include <cmath>

namespace netres {

template <typename Observer>
void integrate_rk4(const SecondOrderSystem& sys, const Vector& forcing, double nu, double dt, std::int64_t steps,
                   Vector& x, Vector& v, double t0, Observer&& observe) {
    const Matrix& c = sys.damping;
    const Matrix& k = sys.stiffness;
    auto accel = [&](double t, const Vector& xs, const Vector& vs) -> Vector {
        return forcing * std::cos(nu * t) - c * vs - k * xs;
    };
    double t = t0;
    for (std::int64_t s = 0; s < steps; ++s) {
        const Vector k1x = v;
        const Vector k1v = accel(t, x, v);
        const Vector x2 = x + 0.5 * dt * k1x;
        const Vector v2 = v + 0.5 * dt * k1v;
        const Vector k2v = accel(t + 0.5 * dt, x2, v2);
        const Vector x3 = x + 0.5 * dt * v2;
        const Vector v3 = v + 0.5 * dt * k2v;
        const Vector k3v = accel(t + 0.5 * dt, x3, v3);
        const Vector x4 = x + dt * v3;
        const Vector v4 = v + dt * k3v;
        const Vector k4v = accel(t + dt, x4, v4);
        x += (dt / 6.0) * (k1x + 2.0 * v2 + 2.0 * v3 + v4);
        v += (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        t = t0 + static_cast<double>(s + 1) * dt;
        if (!observe(t, x, v)) {
            return;
        }
    }
}

}  // namespace netres
