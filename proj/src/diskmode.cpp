#include "magedge/diskmode.hpp"

#include <algorithm>
#include <cmath>

namespace magedge::diskmode {

namespace {

SymTridiag assemble(const RadialProblem& p) {
    const int N = p.N_r;
    const double d = p.delta();
    const double h2 = p.h * p.h;
    const double inv2 = h2 / (d * d);
    auto W = [&](int i) {
        const double r = i * d;
        const double v = p.h * p.m / r - 0.5 * r;
        return v * v - h2 / (4.0 * r * r);
    };
    SymTridiag t;
    if (p.gamma.is_dirichlet()) {
        // g(0) = 0 and g(R) = 0: unknowns i = 1..N-1
        t.diag.resize(N - 1);
        t.offdiag.resize(N - 2);
        for (int i = 1; i < N; ++i) t.diag(i - 1) = 2.0 * inv2 + W(i);
        t.offdiag.setConstant(-inv2);
    } else {
        // Robin at r = R via the ghost point, symmetrized by the half
        // weight of the end node (mirror of the half-line left end)
        const double rho = 1.0 / (2.0 * p.R) -
                           p.gamma.value() / std::sqrt(p.h);
        t.diag.resize(N);
        t.offdiag.resize(N - 1);
        for (int i = 1; i < N; ++i) t.diag(i - 1) = 2.0 * inv2 + W(i);
        t.diag(N - 1) = 2.0 * inv2 - 2.0 * rho * h2 / d + W(N);
        t.offdiag.setConstant(-inv2);
        t.offdiag(N - 2) = -std::sqrt(2.0) * inv2;
    }
    return t;
}

}  // namespace

void RadialProblem::validate() const {
    if (!(R > 0) || !(h > 0)) throw std::invalid_argument("RadialProblem: R, h > 0");
    if (N_r < 500) throw std::invalid_argument("RadialProblem: N_r too small");
    if (delta() > std::sqrt(h) / 50.0)
        throw std::invalid_argument(
            "RadialProblem: mesh does not resolve the sqrt(h) boundary layer "
            "with 50 points");
}

RadialModes radial_eigs(const RadialProblem& p, double lo, double hi,
                        bool want_vectors) {
    p.validate();
    if (!(hi > lo)) throw std::invalid_argument("radial_eigs: empty window");
    SymTridiag t = assemble(p);
    const int below_lo = sturm_count_below(t, lo);
    const int below_hi = sturm_count_below(t, hi);

    RadialModes out;
    out.delta = p.delta();
    out.R = p.R;
    if (below_hi == below_lo) {
        out.lambdas.resize(0);
        return out;
    }
    TridiagEigs te = tridiag_eigs(t, below_lo + 1, below_hi, want_vectors);
    out.lambdas = te.values;
    if (want_vectors) {
        // normalize in the discrete L2(dr) sense; half weight on the
        // boundary node in the Robin case
        const Eigen::Index n = te.vectors.rows();
        out.g = te.vectors / std::sqrt(p.delta());
        for (int j = 0; j < out.g.cols(); ++j) {
            Eigen::VectorXd w = Eigen::VectorXd::Constant(n, p.delta());
            if (!p.gamma.is_dirichlet()) w(n - 1) *= 0.5;
            // undo the half-weight similarity on the boundary node
            if (!p.gamma.is_dirichlet())
                out.g(n - 1, j) *= std::sqrt(2.0);
            const double nrm =
                std::sqrt(w.dot(out.g.col(j).cwiseProduct(out.g.col(j))));
            out.g.col(j) /= nrm;
        }
    }
    return out;
}

Eigen::VectorXd RadialSpectrum::lambdas() const {
    Eigen::VectorXd v(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) v(i) = entries[i].lambda;
    return v;
}

RadialSpectrum window_spectrum(double R, double h, const RobinParameter& gamma,
                               double a, double b, double sigma_hull_lo,
                               double sigma_hull_hi, int N_r) {
    if (!(b > a)) throw std::invalid_argument("window_spectrum: need a < b");
    const double sh = std::sqrt(h);
    const double step = sh / R;  // flux grid spacing in sigma on the disk

    // boundary zoom r = R - sqrt(h) tau turns the mode-m radial operator
    // into h H[gamma, sigma_m] with sigma_m = sqrt(h) (R/(2h) - m/R): the
    // edge momenta sit just below the flux R^2/(2h), and m maps onto the
    // Floquet label ell = -m exactly (L = pi R makes the steps match)
    auto m_of_sigma = [&](double sigma) {
        return R * R / (2.0 * h) - R * sigma / sh;
    };
    auto sigma_of_m = [&](long long m) {
        return sh * (R / (2.0 * h) - m / R);
    };

    RadialSpectrum out;
    double margin = 5.0 * step;
    for (int attempt = 0;; ++attempt) {
        const long long m_lo = static_cast<long long>(
            std::floor(m_of_sigma(sigma_hull_hi + margin)));
        const long long m_hi = static_cast<long long>(
            std::ceil(m_of_sigma(sigma_hull_lo - margin)));
        out.entries.clear();
        out.m_lo = m_lo;
        out.m_hi = m_hi;
        bool edge_hit = false;
        for (long long m = m_lo; m <= m_hi; ++m) {
            RadialProblem p{R, h, gamma, m, N_r};
            RadialModes modes = radial_eigs(p, h * a, h * b, false);
            for (int j = 0; j < modes.lambdas.size(); ++j) {
                out.entries.push_back(
                    {m, j + 1, modes.lambdas(j), sigma_of_m(m)});
                if (m == m_lo || m == m_hi) edge_hit = true;
            }
        }
        if (!edge_hit) break;
        if (attempt >= 3)
            throw std::runtime_error(
                "window_spectrum: in-window eigenvalues at the m-sweep "
                "boundary after three enlargements");
        margin *= 2.0;
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const RadialEntry& x, const RadialEntry& y) {
                  return x.lambda < y.lambda;
              });
    return out;
}

RadialSpectrum window_spectrum(double R, double h, const RobinParameter& gamma,
                               double a, double b, int N_r) {
    degennes::WindowOptions opts;
    opts.allow_critical = true;
    degennes::WindowDecomposition wd =
        degennes::window_decomposition(gamma, a, b, opts);
    if (wd.components.empty()) {
        RadialSpectrum out;
        out.m_lo = out.m_hi = static_cast<long long>(std::llround(R * R / (2.0 * h)));
        return out;
    }
    double lo = wd.components.front().sigma_lo;
    double hi = wd.components.front().sigma_hi;
    for (const auto& c : wd.components) {
        lo = std::min(lo, c.sigma_lo);
        hi = std::max(hi, c.sigma_hi);
    }
    return window_spectrum(R, h, gamma, a, b, lo, hi, N_r);
}

LocalizationProfile localization_profile(const RadialProblem& p,
                                         const Eigen::VectorXd& g_samples) {
    const int N = static_cast<int>(g_samples.size());
    const double d = p.delta();
    const double sh = std::sqrt(p.h);

    // cumulative mass within distance depth of the boundary r = R
    LocalizationProfile out;
    const int n_depth = std::max(4, static_cast<int>(std::ceil(4.0 * p.R / sh)));
    out.depths.resize(n_depth);
    out.mass.resize(n_depth);
    Eigen::VectorXd w = Eigen::VectorXd::Constant(N, d);
    if (!p.gamma.is_dirichlet()) w(N - 1) *= 0.5;
    const double total = w.dot(g_samples.cwiseProduct(g_samples));
    for (int k = 0; k < n_depth; ++k) {
        const double depth = (k + 1) * sh / 4.0;
        out.depths(k) = depth;
        double acc = 0.0;
        for (int i = N - 1; i >= 0; --i) {
            const double r = (i + 1) * d;
            if (p.R - r > depth) break;
            acc += w(i) * g_samples(i) * g_samples(i);
        }
        out.mass(k) = acc / total;
    }

    // exponential rate of the inward tail over depths in [2, 6] sqrt(h)
    std::vector<double> xs, ys;
    for (int k = 0; k < n_depth; ++k) {
        const double depth = out.depths(k);
        if (depth < 2.0 * sh || depth > 6.0 * sh) continue;
        const double tail = 1.0 - out.mass(k);
        if (tail < 1e-14) continue;
        xs.push_back(depth / sh);
        ys.push_back(std::log(tail));
    }
    if (xs.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        const double n = static_cast<double>(xs.size());
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        out.alpha_hat = -0.5 * slope;
    }
    return out;
}

}  // namespace magedge::diskmode
