#include <doctest.h>

#include <cmath>

#include "magedge/numerics.hpp"

using namespace magedge;

TEST_CASE("tridiag: 1D discrete Laplacian closed form") {
    SymTridiag m;
    m.diag = Eigen::Vector3d::Constant(2.0);
    m.offdiag = Eigen::Vector2d::Constant(-1.0);
    auto r = tridiag_eigs(m, 1, 3);
    CHECK(r.values(0) == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r.values(1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.values(2) == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
    for (int j = 0; j < 3; ++j) {
        Eigen::Vector3d v = r.vectors.col(j);
        Eigen::Vector3d mv;
        mv << 2 * v(0) - v(1), -v(0) + 2 * v(1) - v(2), -v(1) + 2 * v(2);
        CHECK((mv - r.values(j) * v).norm() <= 1e-10 * m.norm_bound());
    }
}

TEST_CASE("tridiag: diagonal with multiplicity") {
    SymTridiag m;
    m.diag = Eigen::Vector2d::Constant(5.0);
    m.offdiag = Eigen::VectorXd::Zero(1);
    auto r = tridiag_eigs(m, 1, 2);
    CHECK(r.values(0) == doctest::Approx(5.0));
    CHECK(r.values(1) == doctest::Approx(5.0));
    CHECK(std::abs(r.vectors.col(0).dot(r.vectors.col(1))) < 1e-8);
}

TEST_CASE("tridiag: eigenvalue sum matches trace on a random 200x200") {
    const int n = 200;
    DeterministicRng rng(42);
    SymTridiag m;
    m.diag.resize(n);
    m.offdiag.resize(n - 1);
    for (int i = 0; i < n; ++i) m.diag(i) = 4.0 * rng.uniform();
    for (int i = 0; i < n - 1; ++i) m.offdiag(i) = 4.0 * rng.uniform();
    Eigen::VectorXd vals = tridiag_eigenvalues(m, 1, n);
    const double trace = m.diag.sum();
    CHECK(std::abs(vals.sum() - trace) <=
          1e-9 * std::max(1.0, std::abs(trace)));
}

TEST_CASE("tridiag: eigenvectors pairwise orthonormal") {
    const int n = 60;
    DeterministicRng rng(7);
    SymTridiag m;
    m.diag.resize(n);
    m.offdiag.resize(n - 1);
    for (int i = 0; i < n; ++i) m.diag(i) = 2.0 * rng.uniform();
    for (int i = 0; i < n - 1; ++i) m.offdiag(i) = 2.0 * rng.uniform();
    auto r = tridiag_eigs(m, 1, n);
    Eigen::MatrixXd g = r.vectors.transpose() * r.vectors;
    CHECK((g - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("tridiag: index range extraction matches full solve") {
    const int n = 40;
    DeterministicRng rng(11);
    SymTridiag m;
    m.diag.resize(n);
    m.offdiag.resize(n - 1);
    for (int i = 0; i < n; ++i) m.diag(i) = rng.uniform();
    for (int i = 0; i < n - 1; ++i) m.offdiag(i) = rng.uniform();
    Eigen::VectorXd all = tridiag_eigenvalues(m, 1, n);
    Eigen::VectorXd part = tridiag_eigenvalues(m, 5, 12);
    for (int k = 5; k <= 12; ++k)
        CHECK(part(k - 5) == doctest::Approx(all(k - 1)).epsilon(1e-13));
}

TEST_CASE("dense_sym_eigs: identity and 2x2 swap") {
    auto r = dense_sym_eigs(Eigen::MatrixXd::Identity(4, 4));
    for (int i = 0; i < 4; ++i) CHECK(r.values(i) == doctest::Approx(1.0));

    Eigen::MatrixXd s(2, 2);
    s << 0, 1, 1, 0;
    auto r2 = dense_sym_eigs(s);
    CHECK(r2.values(0) == doctest::Approx(-1.0));
    CHECK(r2.values(1) == doctest::Approx(1.0));
}

TEST_CASE("dense_sym_eigs: cross-check against a QR-iteration oracle") {
    const int n = 50;
    DeterministicRng rng(3);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.uniform();
    auto r = dense_sym_eigs(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    for (int i = 0; i < n; ++i)
        CHECK(std::abs(r.values(i) - es.eigenvalues()(i)) < 1e-10);
    // residuals
    const double scale = a.cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i)
        CHECK((a * r.vectors.col(i) - r.values(i) * r.vectors.col(i)).norm() <
              1e-9 * scale * n);
}

TEST_CASE("dense_sym_eigs rejects asymmetric input") {
    Eigen::MatrixXd a(2, 2);
    a << 1, 2, 3, 4;
    CHECK_THROWS_AS(dense_sym_eigs(a), std::invalid_argument);
}

TEST_CASE("brent_root: sqrt2 and pi/2") {
    auto r1 = brent_root([](double x) { return x * x - 2.0; }, 1, 2, 1e-13);
    CHECK(r1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    auto r2 = brent_root([](double x) { return std::cos(x); }, 1, 2, 1e-13);
    CHECK(r2 == doctest::Approx(M_PI / 2).epsilon(1e-12));
    CHECK_THROWS_AS(
        brent_root([](double x) { return x * x + 1.0; }, 0, 1, 1e-12),
        std::invalid_argument);
}

TEST_CASE("brent_root: |f(root)| <= 10 tol across a generated family") {
    DeterministicRng rng(19);
    for (int trial = 0; trial < 50; ++trial) {
        const double root = 3.0 * rng.uniform();
        const double slope = 0.5 + 5.0 * std::abs(rng.uniform());
        const double curv = 0.3 * std::abs(rng.uniform());
        auto f = [=](double x) {
            return slope * (x - root) + curv * (x - root) * (x - root) * (x - root);
        };
        const double tol = 1e-11;
        double x = brent_root(f, root - 1.1, root + 1.7, tol);
        CHECK(std::abs(f(x)) <= 10.0 * tol);
    }
}

TEST_CASE("minimize_1d: parabola and cosh") {
    auto r1 = minimize_1d([](double x) { return (x - 3) * (x - 3); }, 0, 10, 1e-10);
    CHECK(r1.xmin == doctest::Approx(3.0).epsilon(1e-7));
    CHECK(r1.fmin == doctest::Approx(0.0));
    auto r2 = minimize_1d([](double x) { return std::cosh(x); }, -1, 1, 1e-10);
    CHECK(std::abs(r2.xmin) < 1e-7);
    CHECK(r2.fmin == doctest::Approx(1.0));
    CHECK_THROWS_AS(minimize_1d([](double x) { return x; }, 1, 1, 1e-8),
                    std::invalid_argument);
}

TEST_CASE("integrate: trapezoid exact on linear functions") {
    for (int n : {2, 9, 57}) {
        auto rule = QuadratureRule::trapezoid(0, 1, n);
        double v = integrate([](double x) { return x; }, rule);
        CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
    }
}

TEST_CASE("integrate: simpson on sin over [0, pi]") {
    auto rule = QuadratureRule::simpson(0, M_PI, 2001);
    double v = integrate([](double x) { return std::sin(x); }, rule);
    CHECK(std::abs(v - 2.0) < 1e-8);
    CHECK_THROWS_AS(QuadratureRule::simpson(0, 1, 10), std::invalid_argument);
    auto rule2 = QuadratureRule::trapezoid(0, 1, 5);
    CHECK_THROWS_AS(integrate(Eigen::VectorXd::Zero(4), rule2),
                    std::invalid_argument);
}

TEST_CASE("second_derivative: sin at 0 and x^4 at 1") {
    double d1 = second_derivative([](double x) { return std::sin(x); }, 0.0, 0.05);
    CHECK(std::abs(d1) < 1e-8);
    double d2 = second_derivative([](double x) { return x * x * x * x; }, 1.0, 0.05);
    CHECK(d2 == doctest::Approx(12.0).epsilon(1e-6));
}

TEST_CASE("cubic spline reproduces cubics and interpolates smoothly") {
    Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(17, -1.0, 2.0);
    Eigen::VectorXd y(17);
    auto cubic = [](double t) { return 2.0 + t - 0.5 * t * t + 0.25 * t * t * t; };
    for (int i = 0; i < 17; ++i) y(i) = cubic(x(i));
    CubicSpline s(x, y);
    for (double t : {-0.93, -0.2, 0.37, 1.11, 1.93}) {
        CHECK(s(t) == doctest::Approx(cubic(t)).epsilon(1e-12));
        CHECK(s.derivative(t) ==
              doctest::Approx(1.0 - t + 0.75 * t * t).epsilon(1e-10));
        CHECK(s.second_derivative(t) ==
              doctest::Approx(-1.0 + 1.5 * t).epsilon(1e-9));
    }

    // smooth non-polynomial target: midpoint error O(h^4)
    Eigen::VectorXd xs = Eigen::VectorXd::LinSpaced(201, 0.0, 3.0);
    Eigen::VectorXd ys(201);
    for (int i = 0; i < 201; ++i) ys(i) = std::exp(-xs(i)) * std::sin(2 * xs(i));
    CubicSpline s2(xs, ys);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        double t = 0.5 * (xs(i) + xs(i + 1));
        worst = std::max(worst,
                         std::abs(s2(t) - std::exp(-t) * std::sin(2 * t)));
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("periodic spline matches a trigonometric target") {
    const int m = 64;
    const double period = 2.0 * M_PI;
    Eigen::VectorXd x(m), y(m);
    for (int i = 0; i < m; ++i) {
        x(i) = period * i / m;
        y(i) = std::cos(x(i)) + 0.3 * std::sin(2 * x(i));
    }
    PeriodicCubicSpline s(x, y, period);
    for (double t : {0.1, 1.7, 3.9, 6.1}) {
        CHECK(s(t) == doctest::Approx(std::cos(t) + 0.3 * std::sin(2 * t))
                          .epsilon(1e-5));
        CHECK(s.derivative(t) ==
              doctest::Approx(-std::sin(t) + 0.6 * std::cos(2 * t)).epsilon(1e-3));
    }
    // wrap-around continuity
    CHECK(s(period - 1e-9) == doctest::Approx(s(1e-9)).epsilon(1e-6));
}

TEST_CASE("fft matches a direct DFT") {
    const int m = 32;
    DeterministicRng rng(5);
    std::vector<std::complex<double>> x(m);
    for (auto& v : x) v = {rng.uniform(), rng.uniform()};
    auto direct = x;
    std::vector<std::complex<double>> ref(m);
    for (int j = 0; j < m; ++j) {
        std::complex<double> acc = 0;
        for (int k = 0; k < m; ++k)
            acc += direct[k] *
                   std::exp(std::complex<double>(0, -2.0 * M_PI * j * k / m));
        ref[j] = acc;
    }
    fft_radix2(x);
    for (int j = 0; j < m; ++j) CHECK(std::abs(x[j] - ref[j]) < 1e-12);
}
