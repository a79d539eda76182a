#include "magedge/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace magedge {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

double SymTridiag::norm_bound() const {
    const Eigen::Index n = diag.size();
    double best = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double row = std::abs(diag(i));
        if (i > 0) row += std::abs(offdiag(i - 1));
        if (i + 1 < n) row += std::abs(offdiag(i));
        best = std::max(best, row);
    }
    return best;
}

void SymTridiag::validate() const {
    if (diag.size() < 2)
        throw std::invalid_argument("SymTridiag: need at least 2 rows");
    if (offdiag.size() != diag.size() - 1)
        throw std::invalid_argument("SymTridiag: offdiag length mismatch");
    if (!diag.allFinite() || !offdiag.allFinite())
        throw std::invalid_argument("SymTridiag: non-finite entries");
}

int sturm_count_below(const SymTridiag& m, double x) {
    const Eigen::Index n = m.diag.size();
    const double tiny = std::numeric_limits<double>::min() / kEps;
    int count = 0;
    double q = m.diag(0) - x;
    for (Eigen::Index i = 0;;) {
        if (q == 0.0) q = -tiny;  // zero pivots count as negative
        if (q < 0) ++count;
        if (++i >= n) break;
        q = (m.diag(i) - x) - m.offdiag(i - 1) * m.offdiag(i - 1) / q;
    }
    return count;
}

namespace {

// Bisection for the k-th (1-based) eigenvalue given an enclosing interval.
double bisect_eigenvalue(const SymTridiag& m, int k, double lo, double hi) {
    for (int it = 0; it < 160; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval at roundoff limit
        if (sturm_count_below(m, mid) >= k)
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= 2.0 * kEps * (std::abs(lo) + std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

// Solve (T - s I) x = b for tridiagonal T by LU with partial pivoting.
// Factorization is redone on every call; vectors are length n.
void shifted_tridiag_solve(const SymTridiag& m, double s, Eigen::VectorXd& x) {
    const Eigen::Index n = m.diag.size();
    Eigen::VectorXd c(n), d(n), e(n);  // d: main, c: sub, e: first super
    Eigen::VectorXd f(n);              // second super (fill-in from pivoting)
    d = m.diag.array() - s;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        c(i) = m.offdiag(i);
        e(i) = m.offdiag(i);
    }
    f.setZero();
    // forward elimination with row swaps
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        if (std::abs(c(i)) > std::abs(d(i))) {
            std::swap(d(i), c(i));
            double znext = (i + 2 < n) ? e(i + 1) : 0.0;
            double tmp = e(i);
            e(i) = d(i + 1);
            d(i + 1) = tmp;
            f(i) = znext;
            if (i + 2 < n) e(i + 1) = 0.0;
            std::swap(x(i), x(i + 1));
        }
        if (d(i) == 0.0) d(i) = kEps * kEps;
        const double mult = c(i) / d(i);
        d(i + 1) -= mult * e(i);
        if (i + 2 < n) e(i + 1) -= mult * f(i);
        x(i + 1) -= mult * x(i);
    }
    if (d(n - 1) == 0.0) d(n - 1) = kEps * kEps;
    // back substitution
    x(n - 1) /= d(n - 1);
    if (n >= 2) x(n - 2) = (x(n - 2) - e(n - 2) * x(n - 1)) / d(n - 2);
    for (Eigen::Index i = n - 3; i >= 0; --i)
        x(i) = (x(i) - e(i) * x(i + 1) - f(i) * x(i + 2)) / d(i);
}

double residual_norm(const SymTridiag& m, double lambda,
                     const Eigen::VectorXd& v) {
    const Eigen::Index n = m.diag.size();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double r = (m.diag(i) - lambda) * v(i);
        if (i > 0) r += m.offdiag(i - 1) * v(i - 1);
        if (i + 1 < n) r += m.offdiag(i) * v(i + 1);
        acc += r * r;
    }
    return std::sqrt(acc);
}

}  // namespace

Eigen::VectorXd tridiag_eigenvalues(const SymTridiag& m, int k_lo, int k_hi) {
    m.validate();
    const Eigen::Index n = m.diag.size();
    if (k_lo < 1 || k_hi < k_lo || k_hi > n)
        throw std::invalid_argument("tridiag_eigenvalues: bad index range");

    // Gershgorin bounds
    double glo = std::numeric_limits<double>::infinity();
    double ghi = -glo;
    for (Eigen::Index i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(m.offdiag(i - 1));
        if (i + 1 < n) r += std::abs(m.offdiag(i));
        glo = std::min(glo, m.diag(i) - r);
        ghi = std::max(ghi, m.diag(i) + r);
    }
    const double pad = kEps * (std::abs(glo) + std::abs(ghi)) + 1e-300;
    glo -= pad;
    ghi += pad;

    Eigen::VectorXd vals(k_hi - k_lo + 1);
    double lo = glo;
    for (int k = k_lo; k <= k_hi; ++k) {
        // eigenvalues are extracted in ascending order, so the previous one
        // is a valid lower bound for the next
        vals(k - k_lo) = bisect_eigenvalue(m, k, lo, ghi);
        lo = std::nextafter(vals(k - k_lo), -std::numeric_limits<double>::infinity());
    }
    std::sort(vals.begin(), vals.end());
    return vals;
}

TridiagEigs tridiag_eigs(const SymTridiag& m, int k_lo, int k_hi,
                         bool want_vectors, const EigsOptions& opts) {
    TridiagEigs out;
    out.values = tridiag_eigenvalues(m, k_lo, k_hi);
    const Eigen::Index n = m.diag.size();
    const int nev = static_cast<int>(out.values.size());
    if (!want_vectors) return out;

    const double scale = std::max(m.norm_bound(), 1e-300);
    out.vectors.resize(n, nev);

    // eigenvalue clusters tighter than cluster_tol*||M|| share an invariant
    // subspace as far as inverse iteration is concerned
    int cluster_start = 0;
    for (int j = 0; j < nev; ++j) {
        if (j > 0 &&
            out.values(j) - out.values(j - 1) > opts.cluster_tol * scale)
            cluster_start = j;
        const double lambda = out.values(j);
        Eigen::VectorXd v(n);
        bool ok = false;
        for (int restart = 0; restart < opts.max_restarts && !ok; ++restart) {
            DeterministicRng rng(0x2545f4914f6cdd1dull + 977u * (j + 1) +
                                 131u * restart);
            for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.uniform();
            // small shift separates identical pivots within a tight cluster
            const double shift =
                lambda + restart * 64.0 * kEps * scale;
            for (int it = 0; it < 8; ++it) {
                shifted_tridiag_solve(m, shift, v);
                for (int p = cluster_start; p < j; ++p)
                    v -= out.vectors.col(p).dot(v) * out.vectors.col(p);
                const double nv = v.norm();
                if (!(nv > 0) || !v.allFinite()) break;
                v /= nv;
                if (residual_norm(m, lambda, v) <=
                    0.1 * opts.residual_tol * scale) {
                    ok = true;
                    break;
                }
            }
            if (!ok && v.allFinite() && v.norm() > 0) {
                v.normalize();
                ok = residual_norm(m, lambda, v) <= opts.residual_tol * scale;
            }
        }
        if (!ok)
            throw EigenpairFailure(
                "inverse iteration did not converge for eigenvalue index " +
                    std::to_string(k_lo + j),
                k_lo + j);
        out.vectors.col(j) = v;
    }
    return out;
}

TridiagEigs dense_sym_eigs(const Eigen::MatrixXd& m,
                           const EigsOptions& opts) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw std::invalid_argument("dense_sym_eigs: matrix must be square");
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale)
        throw std::invalid_argument("dense_sym_eigs: input not symmetric");

    const Eigen::Index n = m.rows();
    if (n == 1) {
        TridiagEigs out;
        out.values = Eigen::VectorXd::Constant(1, m(0, 0));
        out.vectors = Eigen::MatrixXd::Ones(1, 1);
        return out;
    }
    Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::Tridiagonalization<Eigen::MatrixXd> tri(sym);
    SymTridiag t;
    t.diag = tri.diagonal();
    t.offdiag = tri.subDiagonal();
    TridiagEigs te = tridiag_eigs(t, 1, static_cast<int>(n), true, opts);
    TridiagEigs out;
    out.values = te.values;
    out.vectors = tri.matrixQ() * te.vectors;
    return out;
}

double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double tol, int max_iter) {
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0))
        throw std::invalid_argument("brent_root: no sign change on bracket");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0) == (fc > 0)) {
            c = a; fc = fa; d = b - a; e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= tol)
            return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                                   std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw RootFailure("brent_root: iteration budget exhausted",
                      std::min(b, c), std::max(b, c));
}

MinResult minimize_1d(const std::function<double(double)>& f, double lo,
                      double hi, double xtol, int max_iter) {
    if (!(hi > lo))
        throw std::invalid_argument("minimize_1d: degenerate bracket");
    const double gold = 0.3819660112501051;
    double a = lo, b = hi;
    double x = a + gold * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        const double xm = 0.5 * (a + b);
        const double tol1 = xtol * std::abs(x) + 1e-15;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;
        bool golden = true;
        if (std::abs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0) p = -p;
            q = std::abs(q);
            const double etmp = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * etmp) && p > q * (a - x) &&
                p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2)
                    d = (xm > x) ? tol1 : -tol1;
                golden = false;
            }
        }
        if (golden) {
            e = (x >= xm) ? a - x : b - x;
            d = gold * e;
        }
        const double u = (std::abs(d) >= tol1) ? x + d
                                               : x + (d > 0 ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            if (u >= x) a = x; else b = x;
            v = w; w = x; x = u;
            fv = fw; fw = fx; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; w = u;
                fv = fw; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u;
                fv = fu;
            }
        }
    }
    return {x, fx};
}

QuadratureRule QuadratureRule::trapezoid(double a, double b, int n_nodes) {
    if (n_nodes < 2 || !(b > a))
        throw std::invalid_argument("trapezoid rule: bad parameters");
    QuadratureRule r;
    r.kind = QuadKind::trapezoid;
    r.nodes = Eigen::VectorXd::LinSpaced(n_nodes, a, b);
    const double delta = (b - a) / (n_nodes - 1);
    r.weights = Eigen::VectorXd::Constant(n_nodes, delta);
    r.weights(0) = r.weights(n_nodes - 1) = 0.5 * delta;
    return r;
}

Eigen::VectorXd simpson_weights(int n_nodes, double delta) {
    if (n_nodes < 3 || n_nodes % 2 == 0)
        throw std::invalid_argument("simpson rule: need an odd node count");
    Eigen::VectorXd w(n_nodes);
    for (int i = 0; i < n_nodes; ++i)
        w(i) = (i == 0 || i == n_nodes - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    w *= delta / 3.0;
    return w;
}

QuadratureRule QuadratureRule::simpson(double a, double b, int n_nodes) {
    QuadratureRule r;
    r.kind = QuadKind::simpson;
    r.nodes = Eigen::VectorXd::LinSpaced(n_nodes, a, b);
    r.weights = simpson_weights(n_nodes, (b - a) / (n_nodes - 1));
    return r;
}

double integrate(const Eigen::VectorXd& samples, const QuadratureRule& rule) {
    if (samples.size() != rule.nodes.size())
        throw std::invalid_argument("integrate: sample count mismatch");
    return rule.weights.dot(samples);
}

double integrate(const std::function<double(double)>& f,
                 const QuadratureRule& rule) {
    Eigen::VectorXd s(rule.nodes.size());
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) s(i) = f(rule.nodes(i));
    return integrate(s, rule);
}

double second_derivative(const std::function<double(double)>& f, double x,
                         double h0) {
    auto central = [&](double h) {
        return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    };
    const double d1 = central(h0);
    const double d2 = central(0.5 * h0);
    return (4.0 * d2 - d1) / 3.0;
}

namespace {

// General tridiagonal solve (Thomas). Diagonal dominance is the caller's
// concern; used for spline moment systems.
Eigen::VectorXd thomas_solve(Eigen::VectorXd sub, Eigen::VectorXd diag,
                             Eigen::VectorXd sup, Eigen::VectorXd rhs) {
    const Eigen::Index n = diag.size();
    for (Eigen::Index i = 1; i < n; ++i) {
        const double w = sub(i - 1) / diag(i - 1);
        diag(i) -= w * sup(i - 1);
        rhs(i) -= w * rhs(i - 1);
    }
    Eigen::VectorXd x(n);
    x(n - 1) = rhs(n - 1) / diag(n - 1);
    for (Eigen::Index i = n - 2; i >= 0; --i)
        x(i) = (rhs(i) - sup(i) * x(i + 1)) / diag(i);
    return x;
}

}  // namespace

CubicSpline::CubicSpline(const Eigen::VectorXd& x, const Eigen::VectorXd& y)
    : x_(x), y_(y) {
    const Eigen::Index n = x.size();
    if (n < 3 || y.size() != n)
        throw std::invalid_argument("CubicSpline: need >= 3 matching samples");
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        if (!(x(i + 1) > x(i)))
            throw std::invalid_argument("CubicSpline: knots must increase");

    // Second-derivative (moment) formulation with not-a-knot ends.
    Eigen::VectorXd h(n - 1);
    for (Eigen::Index i = 0; i + 1 < n; ++i) h(i) = x(i + 1) - x(i);

    if (n == 3) {  // single interior equation, natural ends
        m_ = Eigen::VectorXd::Zero(3);
        m_(1) = 6.0 * ((y(2) - y(1)) / h(1) - (y(1) - y(0)) / h(0)) /
                (2.0 * (h(0) + h(1)));
        return;
    }

    Eigen::VectorXd sub(n - 1), diag(n), sup(n - 1), rhs(n);
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        sub(i - 1) = h(i - 1);
        diag(i) = 2.0 * (h(i - 1) + h(i));
        sup(i) = h(i);
        rhs(i) = 6.0 * ((y(i + 1) - y(i)) / h(i) - (y(i) - y(i - 1)) / h(i - 1));
    }
    // not-a-knot: m0 - m1 = (h0/h1)(m1 - m2), and symmetrically at the end.
    // Fold the m2 (resp. m_{n-3}) coefficient into the adjacent interior row.
    {
        const double r0 = h(0) / h(1);
        // Express m0 = (1+r0) m1 - r0 m2 and substitute into row 1:
        // row1: h0*m0 + 2(h0+h1)m1 + h1*m2 = rhs1
        diag(1) = 2.0 * (h(0) + h(1)) + h(0) * (1.0 + r0);
        sup(1) = h(1) - h(0) * r0;
        // row 0 handled after solve
        const double rn = h(n - 2) / h(n - 3);
        diag(n - 2) = 2.0 * (h(n - 3) + h(n - 2)) + h(n - 2) * (1.0 + rn);
        sub(n - 3) = h(n - 3) - h(n - 2) * rn;
    }
    // Solve the (n-2)-sized interior system.
    Eigen::VectorXd isub = sub.segment(1, n - 3);
    Eigen::VectorXd idiag = diag.segment(1, n - 2);
    Eigen::VectorXd isup = sup.segment(1, n - 3);
    Eigen::VectorXd irhs = rhs.segment(1, n - 2);
    Eigen::VectorXd mi = thomas_solve(isub, idiag, isup, irhs);
    m_.resize(n);
    m_.segment(1, n - 2) = mi;
    const double r0 = h(0) / h(1);
    m_(0) = (1.0 + r0) * m_(1) - r0 * m_(2);
    const double rn = h(n - 2) / h(n - 3);
    m_(n - 1) = (1.0 + rn) * m_(n - 2) - rn * m_(n - 3);
}

Eigen::Index CubicSpline::segment(double x) const {
    const Eigen::Index n = x_.size();
    if (x <= x_(0)) return 0;
    if (x >= x_(n - 1)) return n - 2;
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return std::min<Eigen::Index>(std::distance(x_.begin(), it) - 1, n - 2);
}

double CubicSpline::operator()(double x) const {
    const Eigen::Index i = segment(x);
    const double h = x_(i + 1) - x_(i);
    const double a = (x_(i + 1) - x) / h, b = (x - x_(i)) / h;
    return a * y_(i) + b * y_(i + 1) +
           ((a * a * a - a) * m_(i) + (b * b * b - b) * m_(i + 1)) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
    const Eigen::Index i = segment(x);
    const double h = x_(i + 1) - x_(i);
    const double a = (x_(i + 1) - x) / h, b = (x - x_(i)) / h;
    return (y_(i + 1) - y_(i)) / h +
           h / 6.0 * ((3.0 * b * b - 1.0) * m_(i + 1) - (3.0 * a * a - 1.0) * m_(i));
}

double CubicSpline::second_derivative(double x) const {
    const Eigen::Index i = segment(x);
    const double h = x_(i + 1) - x_(i);
    const double a = (x_(i + 1) - x) / h, b = (x - x_(i)) / h;
    return a * m_(i) + b * m_(i + 1);
}

PeriodicCubicSpline::PeriodicCubicSpline(const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& y,
                                         double period)
    : x_(x), y_(y), period_(period) {
    const Eigen::Index n = x.size();
    if (n < 3 || y.size() != n || !(period > 0))
        throw std::invalid_argument("PeriodicCubicSpline: bad inputs");
    // Cyclic moment system, solved by Sherman-Morrison on the Thomas solver.
    Eigen::VectorXd h(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) h(i) = x(i + 1) - x(i);
    h(n - 1) = period - x(n - 1) + x(0);

    Eigen::VectorXd diag(n), rhs(n), sub(n - 1), sup(n - 1);
    auto yv = [&](Eigen::Index i) { return y((i + n) % n); };
    auto hv = [&](Eigen::Index i) { return h((i + n) % n); };
    for (Eigen::Index i = 0; i < n; ++i) {
        diag(i) = 2.0 * (hv(i - 1) + hv(i));
        rhs(i) = 6.0 * ((yv(i + 1) - yv(i)) / hv(i) -
                        (yv(i) - yv(i - 1)) / hv(i - 1));
    }
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        sub(i) = h(i);
        sup(i) = h(i);
    }
    const double corner = h(n - 1);  // coupling between first and last row
    // Sherman-Morrison with u = gamma*e0 + corner*e_{n-1}, v = e0 + ...
    const double gamma = -diag(0);
    Eigen::VectorXd d2 = diag;
    d2(0) -= gamma;
    d2(n - 1) -= corner * corner / gamma;
    Eigen::VectorXd z1 = thomas_solve(sub, d2, sup, rhs);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    u(0) = gamma;
    u(n - 1) = corner;
    Eigen::VectorXd z2 = thomas_solve(sub, d2, sup, u);
    const double fact =
        (z1(0) + corner * z1(n - 1) / gamma) /
        (1.0 + z2(0) + corner * z2(n - 1) / gamma);
    m_ = z1 - fact * z2;
}

double PeriodicCubicSpline::wrap(double x) const {
    double t = std::fmod(x - x_(0), period_);
    if (t < 0) t += period_;
    return t + x_(0);
}

double PeriodicCubicSpline::operator()(double x) const {
    const double t = wrap(x);
    const Eigen::Index n = x_.size();
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    const Eigen::Index i = std::distance(x_.begin(), it) - 1;
    const Eigen::Index j = (i + 1) % n;
    const double h = (i + 1 < n) ? x_(i + 1) - x_(i) : period_ - x_(n - 1) + x_(0);
    const double b = (t - x_(i)) / h, a = 1.0 - b;
    return a * y_(i) + b * y_(j) +
           ((a * a * a - a) * m_(i) + (b * b * b - b) * m_(j)) * h * h / 6.0;
}

double PeriodicCubicSpline::derivative(double x) const {
    const double t = wrap(x);
    const Eigen::Index n = x_.size();
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    const Eigen::Index i = std::distance(x_.begin(), it) - 1;
    const Eigen::Index j = (i + 1) % n;
    const double h = (i + 1 < n) ? x_(i + 1) - x_(i) : period_ - x_(n - 1) + x_(0);
    const double b = (t - x_(i)) / h, a = 1.0 - b;
    return (y_(j) - y_(i)) / h +
           h / 6.0 * ((3.0 * b * b - 1.0) * m_(j) - (3.0 * a * a - 1.0) * m_(i));
}

double PeriodicCubicSpline::second_derivative(double x) const {
    const double t = wrap(x);
    const Eigen::Index n = x_.size();
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    const Eigen::Index i = std::distance(x_.begin(), it) - 1;
    const Eigen::Index j = (i + 1) % n;
    const double h = (i + 1 < n) ? x_(i + 1) - x_(i) : period_ - x_(n - 1) + x_(0);
    const double b = (t - x_(i)) / h, a = 1.0 - b;
    return a * m_(i) + b * m_(j);
}

void fft_radix2(std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_radix2: size must be a power of two");
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = x[i + k];
                const auto v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

double DeterministicRng::uniform() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    const std::uint64_t z = state_ * 0x2545f4914f6cdd1dull;
    return static_cast<double>(z >> 11) * (1.0 / 9007199254740992.0) - 0.5;
}

}  // namespace magedge
