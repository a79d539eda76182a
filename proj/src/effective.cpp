#include "magedge/effective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace magedge::effective {

namespace {

constexpr double kEdgeMassTol = 1e-8;

double dist_to_sorted(double x, const std::vector<double>& v) {
    if (v.empty()) return std::numeric_limits<double>::infinity();
    auto it = std::lower_bound(v.begin(), v.end(), x);
    double best = std::numeric_limits<double>::infinity();
    if (it != v.end()) best = std::min(best, std::abs(*it - x));
    if (it != v.begin()) best = std::min(best, std::abs(*(it - 1) - x));
    return best;
}

std::vector<double> sorted(const Eigen::VectorXd& v) {
    std::vector<double> out(v.begin(), v.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

Eigen::VectorXd EffectiveSpectrum::lambdas() const {
    Eigen::VectorXd v(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) v(i) = entries[i].lambda;
    return v;
}

EffectiveModel::EffectiveModel(const RobinParameter& gamma,
                               const DomainGeometry& geom, double a, double b,
                               double h_max, const degennes::WindowOptions& opts)
    : gamma_(gamma), geom_(geom), a_(a), b_(b), h_max_(h_max) {
    if (!(h_max > 0) || h_max > 0.25)
        throw std::invalid_argument("EffectiveModel: need 0 < h_max <= 0.25");
    wd_ = degennes::window_decomposition(gamma, a, b, opts);

    const double step_max = M_PI * std::sqrt(h_max) / geom_.L;
    const double margin =
        10.0 * std::pow(h_max, 0.25) + 4.0 * step_max + 0.25;

    int k_max = 0;
    for (const auto& c : wd_.components) k_max = std::max(k_max, c.k);
    models_.resize(k_max);
    for (int k = 1; k <= k_max; ++k) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& c : wd_.components) {
            if (c.k != k) continue;
            lo = std::min(lo, c.sigma_lo);
            hi = std::max(hi, c.sigma_hi);
        }
        if (!(lo <= hi)) continue;  // no component for this curve
        models_[k - 1] =
            BranchModel(gamma, k, lo - margin, hi + margin);
    }
}

const BranchModel& EffectiveModel::model_for(int k) const {
    if (k < 1 || k > static_cast<int>(models_.size()) ||
        models_[k - 1].k() != k)
        throw std::invalid_argument(
            "EffectiveModel: no dispersion model for curve " + std::to_string(k));
    return models_[k - 1];
}

namespace {

struct EnlargedComponent {
    const degennes::WindowComponent* c;
    double lo, hi;
};

// components widened by two grid steps and clipped at the branch minimum
// when the curve meets the window on both sides of it
std::vector<EnlargedComponent> enlarged_components(const EffectiveModel& model,
                                                   double h) {
    const double step = std::sqrt(h) * M_PI / model.geom().L;
    std::vector<EnlargedComponent> out;
    for (const auto& c : model.window().components) {
        EnlargedComponent e{&c, c.sigma_lo - 2.0 * step, c.sigma_hi + 2.0 * step};
        const auto* ext = model.window().extremum_for(c.k);
        if (ext && c.monotone) {
            bool two_sided = false;
            for (const auto& other : model.window().components)
                if (other.k == c.k && other.q != c.q) two_sided = true;
            if (two_sided) {
                if (!c.increasing) e.hi = std::min(e.hi, ext->xi);
                else e.lo = std::max(e.lo, ext->xi);
            }
        }
        const auto& bm = model.model_for(c.k);
        e.lo = std::max(e.lo, bm.sigma_lo());
        e.hi = std::min(e.hi, bm.sigma_hi());
        out.push_back(e);
    }
    return out;
}

}  // namespace

FluxGrid flux_grid(const EffectiveModel& model, double h, double theta_extra) {
    if (!(h > 0) || h > model.h_max() + 1e-15)
        throw std::invalid_argument("flux_grid: h outside the model range");
    const double L = model.geom().L;
    FluxGrid fg;
    fg.theta = model.geom().area / (2.0 * L * h) + theta_extra;
    fg.step = std::sqrt(h) * M_PI / L;

    auto comps = enlarged_components(model, h);
    if (comps.empty()) return fg;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& e : comps) {
        lo = std::min(lo, e.lo);
        hi = std::max(hi, e.hi);
    }
    const double sh = std::sqrt(h);
    const long long l_lo =
        static_cast<long long>(std::ceil((lo / sh - fg.theta) * L / M_PI)) - 1;
    const long long l_hi =
        static_cast<long long>(std::floor((hi / sh - fg.theta) * L / M_PI)) + 1;
    fg.sigmas.resize(std::max<long long>(0, l_hi - l_lo + 1));
    for (long long ell = l_lo; ell <= l_hi; ++ell) {
        fg.ells.push_back(ell);
        fg.sigmas(ell - l_lo) = sh * (M_PI * ell / L + fg.theta);
    }
    return fg;
}

EffectiveSpectrum leading_spectrum(const EffectiveModel& model, double h,
                                   double theta_extra, double window_pad) {
    const double hbar = std::sqrt(h);
    const double mk = model.mean_kappa();
    EffectiveSpectrum out;
    out.window_lo = h * (model.a() - window_pad);
    out.window_hi = h * (model.b() + window_pad);
    if (std::isinf(model.a())) out.window_lo = -std::numeric_limits<double>::infinity();

    FluxGrid fg = flux_grid(model, h, theta_extra);
    auto comps = enlarged_components(model, h);
    for (const auto& e : comps) {
        const auto& bm = model.model_for(e.c->k);
        for (std::size_t i = 0; i < fg.ells.size(); ++i) {
            const double sigma = fg.sigmas(static_cast<Eigen::Index>(i));
            if (sigma < e.lo || sigma > e.hi) continue;
            const double lambda =
                h * (bm.mu(sigma) - hbar * (mk * bm.C(sigma)));
            if (lambda < out.window_lo || lambda > out.window_hi) continue;
            out.entries.push_back({e.c->k, e.c->q, fg.ells[i], sigma, lambda,
                                   EntryOrder::leading2});
        }
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const SpectrumEntry& x, const SpectrumEntry& y) {
                  return x.lambda < y.lambda;
              });
    return out;
}

PdoMatrix pdo_matrix(const EffectiveModel& model, int k, double h,
                     double theta_extra, double margin_factor) {
    const auto& bm = model.model_for(k);
    const double hbar = std::sqrt(h);
    const double L = model.geom().L;
    const double theta = model.geom().area / (2.0 * L * h) + theta_extra;
    const double sh = std::sqrt(h);

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& c : model.window().components) {
        if (c.k != k) continue;
        lo = std::min(lo, c.sigma_lo);
        hi = std::max(hi, c.sigma_hi);
    }
    if (!(lo <= hi))
        throw std::invalid_argument("pdo_matrix: curve has no window component");
    const double marg = 5.0 * std::pow(h, 0.25) * margin_factor;
    lo = std::max(lo - marg, bm.sigma_lo());
    hi = std::min(hi + marg, bm.sigma_hi());

    const long long l_lo =
        static_cast<long long>(std::ceil((lo / sh - theta) * L / M_PI));
    const long long l_hi =
        static_cast<long long>(std::floor((hi / sh - theta) * L / M_PI));
    if (l_hi < l_lo)
        throw std::runtime_error("pdo_matrix: empty Floquet basis");
    const int n = static_cast<int>(l_hi - l_lo + 1);

    PdoMatrix out;
    out.k = k;
    out.ells.reserve(n);
    for (long long ell = l_lo; ell <= l_hi; ++ell) out.ells.push_back(ell);

    // detect whether the curvature modes are real (origin at a symmetry
    // point); otherwise assemble the split-basis real representation
    double im_max = 0.0;
    for (int j = 1; j <= std::min(model.geom().J, n); ++j)
        im_max = std::max(im_max, std::abs(model.geom().kappa_hat(j).imag()));
    const double kappa_scale =
        std::max(1e-300, std::abs(model.geom().kappa_hat(0).real()));
    const bool complex_path = im_max > 1e-12 * kappa_scale;

    auto sigma_mid = [&](long long li, long long lj) {
        return sh * (M_PI * (li + lj) / (2.0 * L) + theta);
    };

    if (!complex_path) {
        out.m = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                const double sbar = sigma_mid(out.ells[i], out.ells[j]);
                const int diff = static_cast<int>(out.ells[i] - out.ells[j]);
                const double khat = (std::abs(diff) <= model.geom().J)
                                        ? model.geom().kappa_hat(diff).real()
                                        : 0.0;
                double v = -hbar * khat * bm.C(sbar);
                if (i == j) v += bm.mu(sbar);
                out.m(i, j) = out.m(j, i) = v;
            }
        }
        return out;
    }

    out.complex_doubled = true;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double sbar = sigma_mid(out.ells[i], out.ells[j]);
            const int diff = static_cast<int>(out.ells[i] - out.ells[j]);
            const std::complex<double> khat =
                (std::abs(diff) <= model.geom().J) ? model.geom().kappa_hat(diff)
                                                   : 0.0;
            std::complex<double> v = -hbar * khat * bm.C(sbar);
            if (i == j) v += bm.mu(sbar);
            A(i, j) = v.real();
            B(i, j) = v.imag();
        }
    }
    out.m.resize(2 * n, 2 * n);
    out.m << A, -B, B, A;
    return out;
}

PdoSpectrum pdo_spectrum(const EffectiveModel& model, int k, double h,
                         double theta_extra) {
    const double a_eff = model.a(), b_eff = model.b();
    for (double factor : {1.0, 2.0}) {
        PdoMatrix pm = pdo_matrix(model, k, h, theta_extra, factor);
        TridiagEigs es = dense_sym_eigs(pm.m);
        const int nb = static_cast<int>(pm.ells.size());

        Eigen::VectorXd values;
        Eigen::MatrixXd mass;  // per basis index, per kept eigenvalue
        if (!pm.complex_doubled) {
            values = es.values;
            mass = es.vectors.cwiseProduct(es.vectors);
        } else {
            // doubled spectrum: keep one copy of each exact pair
            const int n2 = static_cast<int>(es.values.size());
            values.resize(n2 / 2);
            mass.resize(nb, n2 / 2);
            const double scale = std::max(1.0, es.values.cwiseAbs().maxCoeff());
            for (int p = 0; p < n2 / 2; ++p) {
                if (std::abs(es.values(2 * p + 1) - es.values(2 * p)) >
                    1e-9 * scale)
                    throw std::runtime_error(
                        "pdo_spectrum: doubled spectrum pairing failed");
                values(p) = 0.5 * (es.values(2 * p) + es.values(2 * p + 1));
                for (int i = 0; i < nb; ++i)
                    mass(i, p) = es.vectors(i, 2 * p) * es.vectors(i, 2 * p) +
                                 es.vectors(nb + i, 2 * p) *
                                     es.vectors(nb + i, 2 * p);
            }
        }

        bool edge_ok = true;
        for (int j = 0; j < values.size() && edge_ok; ++j) {
            if (values(j) < a_eff || values(j) > b_eff) continue;
            if (mass(0, j) + mass(nb - 1, j) > kEdgeMassTol) edge_ok = false;
        }
        if (!edge_ok && factor < 2.0) continue;
        if (!edge_ok)
            throw std::runtime_error(
                "pdo_spectrum: in-window eigenvectors touch the basis "
                "truncation even after enlargement");

        PdoSpectrum out;
        out.k = k;
        out.values = values;
        out.labels.resize(values.size());
        out.sigma_dominant.resize(values.size());
        const double L = model.geom().L;
        const double theta = model.geom().area / (2.0 * L * h) + theta_extra;
        for (int j = 0; j < values.size(); ++j) {
            int arg = 0;
            mass.col(j).maxCoeff(&arg);
            out.labels[j] = pm.ells[arg];
            out.sigma_dominant(j) =
                std::sqrt(h) * (M_PI * pm.ells[arg] / L + theta);
        }
        return out;
    }
    throw std::logic_error("pdo_spectrum: unreachable");
}

EffectiveSpectrum matrix_spectrum(const EffectiveModel& model, double h,
                                  double theta_extra, double window_pad) {
    EffectiveSpectrum out;
    out.window_lo = h * (model.a() - window_pad);
    out.window_hi = h * (model.b() + window_pad);
    if (std::isinf(model.a())) out.window_lo = -std::numeric_limits<double>::infinity();

    std::vector<int> curves;
    for (const auto& c : model.window().components)
        if (std::find(curves.begin(), curves.end(), c.k) == curves.end())
            curves.push_back(c.k);

    const double step = std::sqrt(h) * M_PI / model.geom().L;
    for (int k : curves) {
        PdoSpectrum ps = pdo_spectrum(model, k, h, theta_extra);
        for (int j = 0; j < ps.values.size(); ++j) {
            const double lambda = h * ps.values(j);
            if (lambda < out.window_lo || lambda > out.window_hi) continue;
            int q = 0;
            for (const auto& c : model.window().components) {
                if (c.k != k) continue;
                if (ps.sigma_dominant(j) >= c.sigma_lo - 2.0 * step &&
                    ps.sigma_dominant(j) <= c.sigma_hi + 2.0 * step)
                    q = c.q;
            }
            out.entries.push_back({k, q, ps.labels[j], ps.sigma_dominant(j),
                                   lambda, EntryOrder::matrix});
        }
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const SpectrumEntry& x, const SpectrumEntry& y) {
                  return x.lambda < y.lambda;
              });
    return out;
}

BSSeries bohr_sommerfeld(const EffectiveModel& model, int k, int q, double h,
                         double theta_extra) {
    const degennes::WindowComponent* comp = nullptr;
    for (const auto& c : model.window().components)
        if (c.k == k && c.q == q) comp = &c;
    if (!comp)
        throw std::invalid_argument("bohr_sommerfeld: no such component");
    if (!comp->monotone)
        throw std::invalid_argument(
            "bohr_sommerfeld: component is not monotone (window touches a "
            "critical value)");

    const auto& bm = model.model_for(k);
    const double hbar = std::sqrt(h);
    const double mk = model.mean_kappa();

    BSSeries out;
    out.k = k;
    out.q = q;
    const int ns = 200;
    out.sigma_samples =
        Eigen::VectorXd::LinSpaced(ns, comp->sigma_lo, comp->sigma_hi);
    out.f0.resize(ns);
    out.f1.resize(ns);
    for (int i = 0; i < ns; ++i) {
        out.f0(i) = bm.mu(out.sigma_samples(i));
        out.f1(i) = -(mk * bm.C(out.sigma_samples(i)));
    }
    // strict monotonicity of f0 on the component
    for (int i = 1; i < ns; ++i)
        if ((out.f0(i) - out.f0(i - 1)) * (comp->increasing ? 1.0 : -1.0) <= 0)
            throw std::runtime_error(
                "bohr_sommerfeld: f0 not monotone on the component");

    FluxGrid fg = flux_grid(model, h, theta_extra);
    auto comps = enlarged_components(model, h);
    const EnlargedComponent* enl = nullptr;
    for (const auto& e : comps)
        if (e.c == comp) enl = &e;
    for (std::size_t i = 0; i < fg.ells.size(); ++i) {
        const double sigma = fg.sigmas(static_cast<Eigen::Index>(i));
        if (!enl || sigma < enl->lo || sigma > enl->hi) continue;
        out.ells.push_back(fg.ells[i]);
        const double f0 = bm.mu(sigma);
        const double f1 = -(mk * bm.C(sigma));
        const Eigen::Index m = out.sigma_ell.size();
        out.sigma_ell.conservativeResize(m + 1);
        out.energy.conservativeResize(m + 1);
        out.sigma_ell(m) = sigma;
        out.energy(m) = f0 + hbar * f1;
    }
    return out;
}

WeylCount weyl_count(const EffectiveModel& model, double h) {
    const auto& wd = model.window();
    if (!wd.regular)
        throw std::invalid_argument(
            "weyl_count: window contains a critical value");
    if (std::isinf(model.a()))
        throw std::invalid_argument("weyl_count: needs a finite window");
    const double L = model.geom().L;
    const double mk = model.mean_kappa();

    double d0 = 0.0, d1 = 0.0;
    for (const auto& c : wd.components) {
        const auto& bm = model.model_for(c.k);
        const double mu_a = bm.mu_prime(c.alpha);
        const double mu_b = bm.mu_prime(c.beta);
        if (std::abs(mu_a) < 1e-8 || std::abs(mu_b) < 1e-8)
            throw std::invalid_argument(
                "weyl_count: window endpoint too close to a critical value");
        d0 += std::abs(c.alpha - c.beta);
        d1 += bm.C(c.beta) / std::abs(mu_b) - bm.C(c.alpha) / std::abs(mu_a);
    }
    WeylCount out;
    out.first_term = L / (M_PI * std::sqrt(h)) * d0;
    out.second_term = L * mk / M_PI * d1;
    out.count = static_cast<long long>(
        std::max(0.0, std::floor(out.first_term + out.second_term)));
    return out;
}

BranchDiagram trace_branches(const EffectiveModel& model, double h_lo,
                             double h_hi, int n_h_samples) {
    if (!(h_lo > 0) || !(h_hi > h_lo) || h_hi > model.h_max() + 1e-15)
        throw std::invalid_argument("trace_branches: bad h interval");
    if (model.gamma().is_dirichlet())
        throw std::invalid_argument("trace_branches: gamma must be real");
    const auto& wd = model.window();
    if (wd.n_target != 1 || !wd.regular || wd.components.size() != 2)
        throw std::invalid_argument(
            "trace_branches: window must lie in (Theta^[0](gamma), 1)");

    const double L = model.geom().L;
    const double mk = model.mean_kappa();
    const auto& bm = model.model_for(1);

    auto value_of = [&](long long ell, double h) {
        const double sigma =
            std::sqrt(h) * (M_PI * ell / L + model.geom().area / (2.0 * L * h));
        const double hbar = std::sqrt(h);
        return h * (bm.mu(sigma) - hbar * (mk * bm.C(sigma)));
    };
    auto sigma_at = [&](long long ell, double h) {
        return std::sqrt(h) * (M_PI * ell / L + model.geom().area / (2.0 * L * h));
    };

    // admissible ell range across the h interval
    double smin = std::numeric_limits<double>::infinity(), smax = -smin;
    for (const auto& c : wd.components) {
        smin = std::min(smin, c.sigma_lo);
        smax = std::max(smax, c.sigma_hi);
    }
    long long l_min = std::numeric_limits<long long>::max();
    long long l_max = std::numeric_limits<long long>::min();
    for (double h : {h_lo, h_hi}) {
        const double sh = std::sqrt(h);
        const double th = model.geom().area / (2.0 * L * h);
        l_min = std::min(l_min, static_cast<long long>(
                                    std::ceil((smin / sh - th) * L / M_PI)));
        l_max = std::max(l_max, static_cast<long long>(
                                    std::floor((smax / sh - th) * L / M_PI)));
    }

    Eigen::VectorXd hs = Eigen::VectorXd::LinSpaced(n_h_samples, h_lo, h_hi);
    BranchDiagram out;

    // empirical minimum slope of f = f0 + hbar f1 over the strict components
    const double hbar_mid = std::sqrt(0.5 * (h_lo + h_hi));
    double c_hat = std::numeric_limits<double>::infinity();
    for (const auto& c : wd.components) {
        for (int i = 0; i <= 200; ++i) {
            const double s =
                c.sigma_lo + (c.sigma_hi - c.sigma_lo) * i / 200.0;
            const double d = 1e-4;
            const double f_p = bm.mu(s + d) - hbar_mid * mk * bm.C(s + d);
            const double f_m = bm.mu(s - d) - hbar_mid * mk * bm.C(s - d);
            c_hat = std::min(c_hat, std::abs(f_p - f_m) / (2.0 * d));
        }
    }
    out.c_hat = c_hat;

    for (const auto& c : wd.components) {
        for (long long ell = l_min; ell <= l_max; ++ell) {
            BranchCurve cur;
            cur.q = c.q;
            cur.ell = ell;
            for (int i = 0; i < n_h_samples; ++i) {
                const double h = hs(i);
                const double sigma = sigma_at(ell, h);
                if (sigma < c.sigma_lo || sigma > c.sigma_hi) continue;
                cur.hs.push_back(h);
                cur.values.push_back(value_of(ell, h));
            }
            if (cur.hs.size() >= 2) out.curves.push_back(std::move(cur));
        }
    }

    // orientation of the q = 1 family (empirical, not taken from the prose)
    for (const auto& cur : out.curves)
        if (cur.q == 1) {
            out.q1_increasing_in_h = cur.values.back() > cur.values.front();
            break;
        }

    // same-family vertical separation against h^{3/2} pi c / L
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_h_samples; ++i) {
        const double h = hs(i);
        for (int q : {1, 2}) {
            std::vector<double> vals;
            for (const auto& cur : out.curves) {
                if (cur.q != q) continue;
                for (std::size_t j = 0; j < cur.hs.size(); ++j)
                    if (cur.hs[j] == h) vals.push_back(cur.values[j]);
            }
            std::sort(vals.begin(), vals.end());
            const double bound = std::pow(h, 1.5) * M_PI * c_hat / L;
            for (std::size_t j = 1; j < vals.size(); ++j)
                min_ratio = std::min(min_ratio, (vals[j] - vals[j - 1]) / bound);
        }
    }
    out.min_separation_ratio = min_ratio;

    // crossings between the two families
    auto in_comp = [&](const degennes::WindowComponent& c, double sigma) {
        return sigma >= c.sigma_lo && sigma <= c.sigma_hi;
    };
    const degennes::WindowComponent* c1 = &wd.components[0];
    const degennes::WindowComponent* c2 = &wd.components[1];
    for (long long e1 = l_min; e1 <= l_max; ++e1) {
        for (long long e2 = l_min; e2 <= l_max; ++e2) {
            auto g = [&](double h) { return value_of(e1, h) - value_of(e2, h); };
            // scan the h grid restricted to joint validity
            double prev_h = 0.0, prev_g = 0.0;
            bool have_prev = false;
            for (int i = 0; i < n_h_samples; ++i) {
                const double h = hs(i);
                if (!in_comp(*c1, sigma_at(e1, h)) ||
                    !in_comp(*c2, sigma_at(e2, h))) {
                    have_prev = false;
                    continue;
                }
                const double gv = g(h);
                if (have_prev && ((gv > 0) != (prev_g > 0))) {
                    const double hc = brent_root(g, prev_h, h, 1e-14);
                    BranchCrossing cr;
                    cr.h = hc;
                    cr.lambda = value_of(e1, hc);
                    const double d = 1e-3 * hc;
                    cr.gap_rate = std::abs((g(hc + d) - g(hc - d)) / (2.0 * d));
                    // identify which branch rises with h at the crossing
                    const double v1p = value_of(e1, hc + d) - value_of(e1, hc - d);
                    cr.ell_rising = v1p > 0 ? e1 : e2;
                    cr.ell_falling = v1p > 0 ? e2 : e1;
                    out.crossings.push_back(cr);
                }
                prev_h = h;
                prev_g = gv;
                have_prev = true;
            }
        }
    }
    std::sort(out.crossings.begin(), out.crossings.end(),
              [](const BranchCrossing& x, const BranchCrossing& y) {
                  return x.h < y.h;
              });
    return out;
}

LowLyingLadder lowlying_spectrum(const RobinParameter& gamma,
                                 const DomainGeometry& geom, double h,
                                 int j_max, std::optional<double> gamma0) {
    if (gamma.is_dirichlet())
        throw std::invalid_argument("lowlying_spectrum: gamma must be real");
    if (j_max < 1) throw std::invalid_argument("lowlying_spectrum: j_max >= 1");
    if (j_max * std::pow(h, 0.25) > 2.0)
        throw std::invalid_argument(
            "lowlying_spectrum: j_max h^{1/4} far outside the validity range");

    LowLyingLadder out;
    out.gamma0 = gamma0 ? *gamma0 : degennes::find_gamma0(1);
    if (std::abs(gamma.value() - out.gamma0) < 1e-4)
        throw std::invalid_argument(
            "lowlying_spectrum: gamma is in the transition regime at gamma_0");
    out.epsilon = gamma.value() < out.gamma0 ? 1.0 : -1.0;

    const degennes::BranchExtremum ext = degennes::find_minimum(gamma, 1);
    out.theta0 = ext.theta;
    out.xi0 = ext.xi;
    out.mu2 = ext.mu2;
    out.c1 = degennes::compute_C(gamma, ext.xi, 1);

    const auto dir = out.epsilon > 0 ? geometry::ExtremumDirection::max_kappa
                                     : geometry::ExtremumDirection::max_neg_kappa;
    const geometry::CurvatureExtremum ce = geometry::curvature_extremum(geom, dir);
    out.s_max = ce.s_max;
    out.kappa_at_smax = out.epsilon > 0 ? ce.kappa_max : -ce.kappa_max;
    out.k2 = ce.k2;
    out.well_multiplicity = ce.multiplicity;

    const double gapc = std::sqrt(out.k2 * std::abs(out.c1) * out.mu2);
    out.lambdas.resize(j_max);
    for (int j = 1; j <= j_max; ++j)
        out.lambdas(j - 1) = out.theta0 * h -
                             out.kappa_at_smax * out.c1 * std::pow(h, 1.5) +
                             std::pow(h, 1.75) * (2.0 * j - 1.0) / 2.0 * gapc;
    return out;
}

HarmonicCrosscheck harmonic_crosscheck(const RobinParameter& gamma,
                                       const DomainGeometry& geom, double h,
                                       int j_max,
                                       std::optional<double> gamma0) {
    HarmonicCrosscheck out;
    out.ladder = lowlying_spectrum(gamma, geom, h, j_max, gamma0);
    const double hbar = std::sqrt(h);
    const double kmax_abs = geom.kappa.cwiseAbs().maxCoeff();
    const double cutoff =
        out.ladder.theta0 + 0.5 * kmax_abs * std::abs(out.ladder.c1) * hbar;

    // window generous enough to cover the cutoff with sound matrix entries
    const double b_model =
        std::min(out.ladder.theta0 +
                     1.5 * kmax_abs * std::abs(out.ladder.c1) * hbar + 0.02,
                 0.5 * (out.ladder.theta0 + 1.0));
    EffectiveModel model(gamma, geom, -std::numeric_limits<double>::infinity(),
                         b_model, std::max(h, 0.01));
    PdoSpectrum ps = pdo_spectrum(model, 1, h);

    std::vector<double> below;
    for (int i = 0; i < ps.values.size(); ++i)
        if (ps.values(i) <= cutoff) below.push_back(h * ps.values(i));
    std::sort(below.begin(), below.end());
    out.pdo_lambdas =
        Eigen::Map<Eigen::VectorXd>(below.data(), static_cast<Eigen::Index>(below.size()));

    const int mult = out.ladder.well_multiplicity;
    if (static_cast<int>(below.size()) < mult * j_max)
        throw std::runtime_error(
            "harmonic_crosscheck: not enough matrix eigenvalues below the "
            "cutoff for the requested ladder depth");

    out.residuals.resize(j_max);
    const double h74 = std::pow(h, 1.75);
    double worst = 0.0;
    for (int j = 1; j <= j_max; ++j) {
        double r = 0.0;
        for (int p = 0; p < mult; ++p)
            r = std::max(r, std::abs(below[(j - 1) * mult + p] -
                                     out.ladder.lambdas(j - 1)));
        out.residuals(j - 1) = r;
        worst = std::max(worst, r / h74);
    }
    out.max_residual_over_h74 = worst;
    return out;
}

SpectraDistance compare_spectra(const Eigen::VectorXd& a_strict,
                                const Eigen::VectorXd& a_padded,
                                const Eigen::VectorXd& b_strict,
                                const Eigen::VectorXd& b_padded) {
    SpectraDistance out;
    auto as = sorted(a_strict), ap = sorted(a_padded);
    auto bs = sorted(b_strict), bp = sorted(b_padded);
    out.count_a = as.size();
    out.count_b = bs.size();
    if (as.empty() && bs.empty()) return out;

    double raw = 0.0, padded = 0.0;
    for (double x : as) {
        raw = std::max(raw, dist_to_sorted(x, bs));
        padded = std::max(padded, dist_to_sorted(x, bp));
    }
    for (double x : bs) {
        raw = std::max(raw, dist_to_sorted(x, as));
        padded = std::max(padded, dist_to_sorted(x, ap));
    }
    out.hausdorff = raw;
    out.padded_hausdorff = padded;
    return out;
}

}  // namespace magedge::effective
