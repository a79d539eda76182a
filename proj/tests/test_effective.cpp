#include <doctest.h>

#include <cmath>
#include <map>

#include "magedge/effective.hpp"

using namespace magedge;
using namespace magedge::effective;
using degennes::RobinParameter;

namespace {

const EffectiveModel& disk_model() {
    static EffectiveModel m(RobinParameter(0.0), geometry::disk(1.0), 0.7, 0.9,
                            0.1);
    return m;
}

const EffectiveModel& ellipse_model() {
    static EffectiveModel m(RobinParameter(0.0), geometry::ellipse(2.0, 1.0),
                            0.7, 0.9, 0.1);
    return m;
}

}  // namespace

TEST_CASE("flux grid arithmetic on the unit disk") {
    FluxGrid fg = flux_grid(disk_model(), 0.1);
    CHECK(fg.theta == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(fg.step == doctest::Approx(std::sqrt(0.1)).epsilon(1e-14));
    REQUIRE(fg.ells.size() >= 2);
    for (std::size_t i = 1; i < fg.ells.size(); ++i) {
        CHECK(fg.ells[i] == fg.ells[i - 1] + 1);
        CHECK(fg.sigmas(i) - fg.sigmas(i - 1) ==
              doctest::Approx(std::sqrt(0.1)).epsilon(1e-12));
    }
    // sigma_ell = sqrt(h) (ell + 5) on the unit disk at h = 0.1
    for (std::size_t i = 0; i < fg.ells.size(); ++i)
        CHECK(fg.sigmas(i) ==
              doctest::Approx(std::sqrt(0.1) * (fg.ells[i] + 5.0)).epsilon(1e-12));

    // halving h doubles theta and shrinks the step by sqrt(2)
    FluxGrid fg2 = flux_grid(disk_model(), 0.05);
    CHECK(fg2.theta == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(fg.step / fg2.step == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("all admissible ell are negative for small h on the disk") {
    for (double h : {0.04, 0.02}) {
        EffectiveSpectrum lead = leading_spectrum(disk_model(), h);
        REQUIRE(!lead.entries.empty());
        for (const auto& e : lead.entries) CHECK(e.ell < 0);
    }
    FluxGrid fg = flux_grid(disk_model(), 0.02);
    REQUIRE(!fg.ells.empty());
    for (long long ell : fg.ells) CHECK(ell < 0);
}

TEST_CASE("leading spectrum equals h * Bohr-Sommerfeld series per label") {
    const double h = 0.05;
    EffectiveSpectrum lead = leading_spectrum(disk_model(), h);
    REQUIRE(!lead.entries.empty());
    for (int q : {1, 2}) {
        BSSeries bs = bohr_sommerfeld(disk_model(), 1, q, h);
        std::map<long long, double> bs_by_ell;
        for (std::size_t i = 0; i < bs.ells.size(); ++i)
            bs_by_ell[bs.ells[i]] = bs.energy(static_cast<Eigen::Index>(i));
        for (const auto& e : lead.entries) {
            if (e.q != q) continue;
            REQUIRE(bs_by_ell.count(e.ell) == 1);
            CHECK(std::abs(h * bs_by_ell[e.ell] - e.lambda) < 1e-14);
        }
    }
}

TEST_CASE("Bohr-Sommerfeld pieces: f1 and the subprincipal action weight") {
    const double h = 0.05;
    BSSeries bs = bohr_sommerfeld(disk_model(), 1, 2, h);
    const auto& bm = disk_model().model_for(1);
    const double mk = disk_model().mean_kappa();
    for (int i = 0; i < bs.sigma_samples.size(); i += 37) {
        const double s = bs.sigma_samples(i);
        CHECK(bs.f1(i) == doctest::Approx(-mk * bm.C(s)).epsilon(1e-12));
        // K(E) mu'(sigma) = C(sigma) * int kappa ds = 2 pi C on any geometry
        const double K = bs.f1(i) * (-2.0 * disk_model().geom().L) /
                         bm.mu_prime(s);
        CHECK(K * bm.mu_prime(s) ==
              doctest::Approx(2.0 * M_PI * bm.C(s)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(bohr_sommerfeld(disk_model(), 1, 3, h),
                    std::invalid_argument);
}

TEST_CASE("constant curvature: matrix spectrum is exactly the leading one") {
    const double h = 0.05;
    EffectiveSpectrum lead = leading_spectrum(disk_model(), h);
    EffectiveSpectrum mat = matrix_spectrum(disk_model(), h);
    REQUIRE(lead.entries.size() == mat.entries.size());
    for (std::size_t i = 0; i < lead.entries.size(); ++i)
        CHECK(std::abs(lead.entries[i].lambda - mat.entries[i].lambda) < 1e-13);
}

TEST_CASE("pdo matrix is symmetric and diagonal on the disk") {
    PdoMatrix pm = pdo_matrix(disk_model(), 1, 0.05);
    CHECK((pm.m - pm.m.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK_FALSE(pm.complex_doubled);
    for (int i = 0; i < pm.m.rows(); ++i)
        for (int j = i + 1; j < pm.m.cols(); ++j)
            CHECK(std::abs(pm.m(i, j)) < 1e-13);
}

TEST_CASE("Weyl count sandwich against the leading spectrum") {
    // the O(sqrt(h)) remainder of the two-term counting formula still contributes
    // about one unit at h ~ 0.02; the plus-minus-one sandwich sets in
    // around h ~ 0.005 (measured)
    for (double h : {0.005, 0.00125}) {
        WeylCount wc = weyl_count(disk_model(), h);
        EffectiveSpectrum lead = leading_spectrum(disk_model(), h);
        const long long n = static_cast<long long>(lead.entries.size());
        CHECK(std::llabs(wc.count - n) <= 1);
        CHECK(wc.first_term > 0);
    }
}

TEST_CASE("flux covariance: theta + pi/L relabels ell by -1") {
    const double h = 0.05;
    const double shift = M_PI / disk_model().geom().L;
    EffectiveSpectrum base = leading_spectrum(disk_model(), h, 0.0);
    EffectiveSpectrum moved = leading_spectrum(disk_model(), h, shift);
    REQUIRE(base.entries.size() == moved.entries.size());
    for (std::size_t i = 0; i < base.entries.size(); ++i) {
        CHECK(moved.entries[i].ell == base.entries[i].ell - 1);
        CHECK(std::abs(moved.entries[i].lambda - base.entries[i].lambda) <
              1e-12);
    }
}

TEST_CASE("spectra are invariant under rotating the arclength origin") {
    const double h = 0.0441;
    const auto& g = ellipse_model().geom();
    const double s0 = 37.0 * 2.0 * g.L / g.kappa.size();
    EffectiveModel rotated(RobinParameter(0.0), geometry::rotate_origin(g, s0),
                           0.7, 0.9, 0.1);

    EffectiveSpectrum lead_a = leading_spectrum(ellipse_model(), h);
    EffectiveSpectrum lead_b = leading_spectrum(rotated, h);
    REQUIRE(lead_a.entries.size() == lead_b.entries.size());
    for (std::size_t i = 0; i < lead_a.entries.size(); ++i)
        CHECK(std::abs(lead_a.entries[i].lambda - lead_b.entries[i].lambda) <
              1e-10);

    // the rotated curvature has genuinely complex Fourier modes, so this
    // also exercises the split-basis path
    PdoMatrix pm = pdo_matrix(rotated, 1, h);
    CHECK(pm.complex_doubled);
    EffectiveSpectrum mat_a = matrix_spectrum(ellipse_model(), h);
    EffectiveSpectrum mat_b = matrix_spectrum(rotated, h);
    REQUIRE(mat_a.entries.size() == mat_b.entries.size());
    for (std::size_t i = 0; i < mat_a.entries.size(); ++i)
        CHECK(std::abs(mat_a.entries[i].lambda - mat_b.entries[i].lambda) <
              1e-10);
}

TEST_CASE("Dirichlet window below the first Landau level is empty") {
    EffectiveModel m(RobinParameter::dirichlet(), geometry::disk(1.0), 0.2,
                     0.9, 0.1);
    EffectiveSpectrum lead = leading_spectrum(m, 0.05);
    CHECK(lead.entries.empty());
    FluxGrid fg = flux_grid(m, 0.05);
    CHECK(fg.ells.empty());
}

TEST_CASE("BS vs matrix on the ellipse converges at order >= 1.8 in hbar") {
    std::vector<double> hbars{0.3, 0.21, 0.15};
    std::vector<double> errs;
    for (double hbar : hbars) {
        const double h = hbar * hbar;
        EffectiveSpectrum lead = leading_spectrum(ellipse_model(), h);
        EffectiveSpectrum lead_pad = leading_spectrum(ellipse_model(), h, 0.0, 0.05);
        EffectiveSpectrum mat = matrix_spectrum(ellipse_model(), h);
        EffectiveSpectrum mat_pad = matrix_spectrum(ellipse_model(), h, 0.0, 0.05);
        SpectraDistance d = compare_spectra(lead.lambdas(), lead_pad.lambdas(),
                                            mat.lambdas(), mat_pad.lambdas());
        errs.push_back(d.padded_hausdorff / h);  // symbol units
    }
    // fitted slope of log err against log hbar
    const double slope =
        std::log(errs[0] / errs[2]) / std::log(hbars[0] / hbars[2]);
    CHECK(slope >= 1.8);
    CHECK(errs[2] < 0.01);
}

TEST_CASE("compare_spectra distances") {
    Eigen::VectorXd a(3), b(3);
    a << 1.0, 2.0, 3.0;
    b << 1.1, 2.0, 3.05;
    SpectraDistance d = compare_spectra(a, a, b, b);
    CHECK(d.hausdorff == doctest::Approx(0.1));
    CHECK(d.count_a == 3);
    Eigen::VectorXd empty(0);
    SpectraDistance d2 = compare_spectra(empty, empty, empty, empty);
    CHECK(d2.hausdorff == 0.0);
}

TEST_CASE("consecutive branch crossings are O(h^2) apart") {
    degennes::RobinParameter gm(-1.0);
    auto ext = degennes::find_minimum(gm, 1);
    const double a = ext.theta + 0.05, b = 0.95;
    for (double h : {0.025, 0.0125}) {
        EffectiveModel model(gm, geometry::disk(1.0), a, b,
                             h + 10.0 * h * h + 1e-6);
        BranchDiagram bd = trace_branches(model, h, h + 10.0 * h * h, 400);
        REQUIRE(bd.crossings.size() >= 2);
        // spacing along a fixed rising branch, in units of h^2
        std::map<long long, std::vector<double>> per_branch;
        for (const auto& c : bd.crossings)
            per_branch[c.ell_rising].push_back(c.h);
        int measured = 0;
        for (auto& [ell, hs] : per_branch) {
            std::sort(hs.begin(), hs.end());
            for (std::size_t i = 1; i < hs.size(); ++i) {
                const double spacing = (hs[i] - hs[i - 1]) / (h * h);
                CHECK(spacing > 0.1);
                CHECK(spacing < 12.0);
                ++measured;
            }
        }
        CHECK(measured >= 1);
    }
}
