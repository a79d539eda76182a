#include "magedge/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace magedge::geometry {

namespace {

void fill_fourier(DomainGeometry& g) {
    const int M = static_cast<int>(g.kappa.size());
    std::vector<std::complex<double>> buf(M);
    for (int m = 0; m < M; ++m) buf[m] = g.kappa(m);
    fft_radix2(buf);
    g.J = M / 2 - 1;
    g.kappa_fourier.assign(2 * g.J + 1, 0.0);
    for (int j = -g.J; j <= g.J; ++j) {
        const int idx = (j + M) % M;
        g.kappa_fourier[j + g.J] = buf[idx] / static_cast<double>(M);
    }
}

void finish(DomainGeometry& g) {
    const int M = static_cast<int>(g.kappa.size());
    g.s = Eigen::VectorXd::LinSpaced(M, 0.0, 2.0 * g.L * (M - 1) / M);
    g.kappa_spline = PeriodicCubicSpline(g.s, g.kappa, 2.0 * g.L);
    fill_fourier(g);
}

// curve described by phi -> (speed, curvature); arclength resampling shared
// by the ellipse and the radial-Fourier constructions
struct ParametricCurve {
    std::function<double(double)> speed;
    std::function<double(double)> curv;
};

DomainGeometry resample_by_arclength(const ParametricCurve& c, int M,
                                     double area, DomainKind kind) {
    if (M < 16 || (M & (M - 1)) != 0)
        throw std::invalid_argument("geometry: M must be a power of two >= 16");

    // s(phi) by RK4 on a fine grid
    const int n_fine = 32768;
    const double h = 2.0 * M_PI / n_fine;
    Eigen::VectorXd phis(n_fine + 1), ss(n_fine + 1);
    ss(0) = 0.0;
    phis(0) = 0.0;
    for (int k = 0; k < n_fine; ++k) {
        const double p = k * h;
        const double k1 = c.speed(p);
        const double k2 = c.speed(p + 0.5 * h);
        const double k4 = c.speed(p + h);
        ss(k + 1) = ss(k) + h / 6.0 * (k1 + 4.0 * k2 + k4);
        phis(k + 1) = p + h;
    }
    const double total = ss(n_fine);
    CubicSpline s_of_phi(phis, ss);

    DomainGeometry g;
    g.kind = kind;
    g.L = 0.5 * total;
    g.area = area;
    g.kappa.resize(M);
    int guess = 0;
    for (int m = 0; m < M; ++m) {
        const double target = total * m / M;
        while (guess + 1 < n_fine && ss(guess + 1) < target) ++guess;
        double phi = phis(guess) +
                     (target - ss(guess)) / std::max(ss(guess + 1) - ss(guess), 1e-300) * h;
        for (int it = 0; it < 4; ++it)
            phi -= (s_of_phi(phi) - target) / c.speed(phi);
        g.kappa(m) = c.curv(phi);
    }
    finish(g);
    return g;
}

}  // namespace

std::complex<double> DomainGeometry::kappa_hat(int j) const {
    if (std::abs(j) > J) return 0.0;
    return kappa_fourier[j + J];
}

double DomainGeometry::gauss_bonnet_residual() const {
    const int M = static_cast<int>(kappa.size());
    return std::abs(kappa.sum() * (2.0 * L / M) - 2.0 * M_PI);
}

DomainGeometry disk(double R, int M) {
    if (!(R > 0)) throw std::invalid_argument("disk: radius must be positive");
    DomainGeometry g;
    g.kind = DomainKind::disk;
    g.L = M_PI * R;
    g.area = M_PI * R * R;
    g.kappa = Eigen::VectorXd::Constant(M, 1.0 / R);
    finish(g);
    return g;
}

DomainGeometry ellipse(double a_axis, double b_axis, int M) {
    if (!(a_axis >= b_axis) || !(b_axis > 0))
        throw std::invalid_argument("ellipse: need a >= b > 0");
    ParametricCurve c;
    c.speed = [=](double p) {
        const double sp = a_axis * std::sin(p), cp = b_axis * std::cos(p);
        return std::sqrt(sp * sp + cp * cp);
    };
    c.curv = [=](double p) {
        const double sp = a_axis * std::sin(p), cp = b_axis * std::cos(p);
        const double w = sp * sp + cp * cp;
        return a_axis * b_axis / (w * std::sqrt(w));
    };
    return resample_by_arclength(c, M, M_PI * a_axis * b_axis,
                                 DomainKind::ellipse);
}

double RadialFourier::r(double phi) const {
    double v = c0;
    for (std::size_t j = 1; j <= cos_amp.size(); ++j)
        v += cos_amp[j - 1] * std::cos(j * phi);
    for (std::size_t j = 1; j <= sin_amp.size(); ++j)
        v += sin_amp[j - 1] * std::sin(j * phi);
    return v;
}

double RadialFourier::dr(double phi) const {
    double v = 0.0;
    for (std::size_t j = 1; j <= cos_amp.size(); ++j)
        v -= j * cos_amp[j - 1] * std::sin(j * phi);
    for (std::size_t j = 1; j <= sin_amp.size(); ++j)
        v += j * sin_amp[j - 1] * std::cos(j * phi);
    return v;
}

double RadialFourier::d2r(double phi) const {
    double v = 0.0;
    for (std::size_t j = 1; j <= cos_amp.size(); ++j)
        v -= j * j * cos_amp[j - 1] * std::cos(j * phi);
    for (std::size_t j = 1; j <= sin_amp.size(); ++j)
        v -= j * j * sin_amp[j - 1] * std::sin(j * phi);
    return v;
}

DomainGeometry custom_from_radius(const RadialFourier& rf, int M) {
    // star-shaped validity: r > 0 everywhere
    for (int k = 0; k < 4096; ++k) {
        if (!(rf.r(2.0 * M_PI * k / 4096) > 0))
            throw std::invalid_argument(
                "custom_from_radius: radial function must stay positive");
    }
    ParametricCurve c;
    c.speed = [&](double p) {
        const double r = rf.r(p), d = rf.dr(p);
        return std::sqrt(r * r + d * d);
    };
    c.curv = [&](double p) {
        const double r = rf.r(p), d = rf.dr(p), dd = rf.d2r(p);
        const double w = r * r + d * d;
        return (r * r + 2.0 * d * d - r * dd) / (w * std::sqrt(w));
    };
    // area by the polar formula
    double area = 0.0;
    {
        const int n = 8192;
        for (int k = 0; k < n; ++k) {
            const double p = 2.0 * M_PI * k / n;
            const double r = rf.r(p);
            area += 0.5 * r * r * (2.0 * M_PI / n);
        }
    }
    DomainGeometry g =
        resample_by_arclength(c, M, area, DomainKind::custom);
    if (g.gauss_bonnet_residual() > 1e-6)
        throw std::invalid_argument(
            "custom_from_radius: curvature anomaly (Gauss-Bonnet residual > 1e-6); "
            "curve rejected");
    return g;
}

DomainGeometry rotate_origin(const DomainGeometry& g, double s0) {
    DomainGeometry out = g;
    const int M = static_cast<int>(g.kappa.size());
    const double step = 2.0 * g.L / M;
    const double ratio = s0 / step;
    if (std::abs(ratio - std::round(ratio)) < 1e-12) {
        const int shift = static_cast<int>(std::llround(ratio));
        for (int m = 0; m < M; ++m)
            out.kappa(m) = g.kappa(((m + shift) % M + M) % M);
    } else {
        for (int m = 0; m < M; ++m) out.kappa(m) = g.kappa_at(g.s(m) + s0);
    }
    finish(out);
    return out;
}

CurvatureExtremum curvature_extremum(const DomainGeometry& g,
                                     ExtremumDirection direction) {
    const int M = static_cast<int>(g.kappa.size());
    const double sign = (direction == ExtremumDirection::max_kappa) ? 1.0 : -1.0;
    Eigen::VectorXd f = sign * g.kappa;

    const double fmax = f.maxCoeff();
    const double fmin = f.minCoeff();
    const double scale = std::max({1.0, std::abs(fmax), std::abs(fmin)});
    if (fmax - fmin < 1e-9 * scale)
        throw std::invalid_argument(
            "curvature_extremum: constant curvature (degenerate extremum)");

    auto fval = [&](double s) { return sign * g.kappa_at(s); };
    auto fder = [&](double s) { return sign * g.kappa_spline.derivative(s); };

    // refine every sampled local maximum, then group ties among the
    // refined values (symmetry copies rarely sit on grid points)
    const double tie_tol = 1e-9 * scale;
    const double step = 2.0 * g.L / M;
    std::vector<std::pair<double, double>> peaks;  // (s_ref, f_ref)
    for (int m = 0; m < M; ++m) {
        const double fm = f(m);
        const double prev = f((m - 1 + M) % M), next = f((m + 1) % M);
        if (fm < prev || fm < next) continue;
        if (std::abs(fm - prev) < tie_tol && std::abs(fm - next) < tie_tol)
            throw std::invalid_argument(
                "curvature_extremum: flat plateau at the maximum");
        const double lo = g.s(m) - step, hi = g.s(m) + step;
        double s_ref;
        if (fder(lo) > 0 && fder(hi) < 0) {
            s_ref = brent_root(fder, lo, hi, 1e-12);
        } else {
            // parabolic refinement through the three samples
            const double denom = prev - 2 * fm + next;
            const double delta = (std::abs(denom) > 1e-300)
                                     ? 0.5 * (prev - next) / denom
                                     : 0.0;
            s_ref = g.s(m) + delta * step;
        }
        s_ref = std::fmod(s_ref + 2.0 * g.L, 2.0 * g.L);
        bool dup = false;
        for (auto& p : peaks) {
            double d = std::abs(p.first - s_ref);
            d = std::min(d, 2.0 * g.L - d);
            if (d < 4.0 * step) dup = true;
        }
        if (!dup) peaks.emplace_back(s_ref, fval(s_ref));
    }
    if (peaks.empty())
        throw std::runtime_error("curvature_extremum: no maximum located");

    double fbest = peaks.front().second;
    for (auto& p : peaks) fbest = std::max(fbest, p.second);
    std::vector<double> ties;
    for (auto& p : peaks)
        if (p.second >= fbest - tie_tol) ties.push_back(p.first);
    // a peak hugging the far end of the period is the origin peak wrapped
    std::sort(ties.begin(), ties.end(), [&](double x, double y) {
        auto canon = [&](double v) {
            return (v > 2.0 * g.L - 4.0 * step) ? v - 2.0 * g.L : v;
        };
        return canon(x) < canon(y);
    });

    CurvatureExtremum ext;
    ext.s_max = ties.front();
    ext.kappa_max = fval(ext.s_max);
    ext.k2 = -sign * g.kappa_spline.second_derivative(ext.s_max);
    ext.multiplicity = static_cast<int>(ties.size());
    if (!(ext.k2 > 0))
        throw std::invalid_argument(
            "curvature_extremum: degenerate maximum (vanishing second derivative)");
    return ext;
}

}  // namespace magedge::geometry
