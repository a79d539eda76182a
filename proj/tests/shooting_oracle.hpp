#pragma once

// Test-only oracle, independent of the finite-difference solver: integrate
// u'' = ((t-sigma)^2 - mu) u from t = 0 with the Robin data by RK4 and
// bisect on the sign of u(T; mu), which flips across each eigenvalue.

#include <cmath>
#include <stdexcept>

namespace magedge_test {

class ShootingOracle {
  public:
    ShootingOracle(double gamma, double sigma, double T = 10.0,
                   double dt = 1e-3)
        : gamma_(gamma), sigma_(sigma), T_(T), dt_(dt) {}

    double end_value(double mu) const {
        double t = 0.0, u = 1.0, v = gamma_;
        auto acc = [&](double tt, double uu) {
            const double z = tt - sigma_;
            return (z * z - mu) * uu;
        };
        const int steps = static_cast<int>(std::round(T_ / dt_));
        for (int i = 0; i < steps; ++i) {
            const double k1u = v, k1v = acc(t, u);
            const double k2u = v + 0.5 * dt_ * k1v,
                         k2v = acc(t + 0.5 * dt_, u + 0.5 * dt_ * k1u);
            const double k3u = v + 0.5 * dt_ * k2v,
                         k3v = acc(t + 0.5 * dt_, u + 0.5 * dt_ * k2u);
            const double k4u = v + dt_ * k3v, k4v = acc(t + dt_, u + dt_ * k3u);
            u += dt_ / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
            v += dt_ / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
            t += dt_;
            const double mag = std::max(std::abs(u), std::abs(v));
            if (mag > 1e30) {  // rescale to dodge overflow; sign preserved
                u /= mag;
                v /= mag;
            }
        }
        return u;
    }

    double eigenvalue(double mu_lo, double mu_hi) const {
        double flo = end_value(mu_lo);
        const double fhi = end_value(mu_hi);
        if ((flo > 0) == (fhi > 0))
            throw std::runtime_error("shooting oracle: bracket without sign change");
        for (int it = 0; it < 64; ++it) {
            const double mid = 0.5 * (mu_lo + mu_hi);
            const double fm = end_value(mid);
            if ((fm > 0) == (flo > 0)) {
                mu_lo = mid;
                flo = fm;
            } else {
                mu_hi = mid;
            }
        }
        return 0.5 * (mu_lo + mu_hi);
    }

  private:
    double gamma_, sigma_, T_, dt_;
};

/// Golden-section minimum of the first shooting eigenvalue over sigma.
inline double shooting_theta0(double gamma, double sigma_lo, double sigma_hi,
                              double mu_lo, double mu_hi) {
    auto mu1 = [&](double sigma) {
        return ShootingOracle(gamma, sigma).eigenvalue(mu_lo, mu_hi);
    };
    const double gr = 0.3819660112501051;
    double lo = sigma_lo, hi = sigma_hi;
    double x1 = lo + gr * (hi - lo), x2 = hi - gr * (hi - lo);
    double f1 = mu1(x1), f2 = mu1(x2);
    for (int it = 0; it < 30; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = lo + gr * (hi - lo);
            f1 = mu1(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = hi - gr * (hi - lo);
            f2 = mu1(x2);
        }
    }
    return std::min(f1, f2);
}

}  // namespace magedge_test
