#include <doctest.h>

#include <cmath>

#include "magedge/diskmode.hpp"
#include "magedge/effective.hpp"

using namespace magedge;
using namespace magedge::diskmode;
using degennes::RobinParameter;

TEST_CASE("bulk sanity: interior modes sit at the first Landau level") {
    RadialProblem p{1.0, 0.02, RobinParameter::dirichlet(), 5, 3000};
    RadialModes modes = radial_eigs(p, 0.5 * 0.02, 1.5 * 0.02, false);
    REQUIRE(modes.lambdas.size() >= 1);
    CHECK(modes.lambdas(0) / 0.02 == doctest::Approx(1.0).epsilon(5e-4));
}

TEST_CASE("window eigenfunctions hug the boundary") {
    const double h = 0.05;
    // an angular momentum in the middle of the edge band
    RadialProblem p{1.0, h, RobinParameter(0.0), 9, 3000};
    RadialModes modes = radial_eigs(p, 0.7 * h, 0.9 * h, true);
    REQUIRE(modes.lambdas.size() >= 1);
    LocalizationProfile prof = localization_profile(p, modes.g.col(0));
    // mass within 4 sqrt(h) of r = R
    double m4 = 0.0;
    for (int k = 0; k < prof.depths.size(); ++k)
        if (prof.depths(k) <= 4.0 * std::sqrt(h) + 1e-12) m4 = prof.mass(k);
    CHECK(m4 >= 0.95);
    CHECK(prof.mass(prof.mass.size() - 1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(prof.alpha_hat > 0);
}

TEST_CASE("bulk eigenfunction mass contrast") {
    const double h = 0.02;
    RadialProblem p{1.0, h, RobinParameter::dirichlet(), 5, 3000};
    RadialModes modes = radial_eigs(p, 0.5 * h, 1.5 * h, true);
    REQUIRE(modes.lambdas.size() >= 1);
    LocalizationProfile prof = localization_profile(p, modes.g.col(0));
    double m3 = 1.0;
    for (int k = 0; k < prof.depths.size(); ++k)
        if (prof.depths(k) <= 3.0 * std::sqrt(h) + 1e-12) m3 = prof.mass(k);
    CHECK(m3 <= 0.5);
}

TEST_CASE("grid refinement moves window eigenvalues below 1e-5 h") {
    const double h = 0.02;
    RadialProblem p1{1.0, h, RobinParameter(0.0), 23, 3000};
    RadialProblem p2{1.0, h, RobinParameter(0.0), 23, 6000};
    RadialModes m1 = radial_eigs(p1, 0.6 * h, 0.95 * h, false);
    RadialModes m2 = radial_eigs(p2, 0.6 * h, 0.95 * h, false);
    REQUIRE(m1.lambdas.size() >= 1);
    REQUIRE(m1.lambdas.size() == m2.lambdas.size());
    for (int j = 0; j < m1.lambdas.size(); ++j)
        CHECK(std::abs(m1.lambdas(j) - m2.lambdas(j)) <= 1e-5 * h);
}

TEST_CASE("window spectrum aligns with the flux grid labels") {
    const double h = 0.05;
    effective::EffectiveModel em(RobinParameter(0.0), geometry::disk(1.0), 0.7,
                                 0.9, 0.1);
    double lo = 1e300, hi = -1e300;
    for (const auto& c : em.window().components) {
        lo = std::min(lo, c.sigma_lo);
        hi = std::max(hi, c.sigma_hi);
    }
    RadialSpectrum rs =
        window_spectrum(1.0, h, RobinParameter(0.0), 0.7, 0.9, lo, hi, 3000);
    REQUIRE(!rs.entries.empty());
    effective::FluxGrid fg = effective::flux_grid(em, h);
    // sigma of mode m coincides with a flux-grid point, label ell = -m
    double prev_sigma = -1e300;
    long long prev_m = 0;
    bool first = true;
    for (const auto& e : rs.entries) {
        double best = 1e300;
        long long best_ell = 0;
        for (std::size_t i = 0; i < fg.ells.size(); ++i) {
            const double d = std::abs(fg.sigmas(static_cast<Eigen::Index>(i)) - e.sigma);
            if (d < best) {
                best = d;
                best_ell = fg.ells[i];
            }
        }
        CHECK(best <= 2.0 * fg.step);
        CHECK(best_ell == -e.m);
        if (!first && e.m != prev_m) {
            // m -> sigma is monotone (decreasing in m)
            CHECK((e.sigma - prev_sigma) * static_cast<double>(e.m - prev_m) < 0);
        }
        prev_sigma = e.sigma;
        prev_m = e.m;
        first = false;
    }
}

TEST_CASE("Robin parameter shifts the window spectrum") {
    const double h = 0.05;
    RadialSpectrum r0 = window_spectrum(1.0, h, RobinParameter(0.0), 0.7, 0.9,
                                        0.0, 2.0, 3000);
    RadialSpectrum r5 = window_spectrum(1.0, h, RobinParameter(0.5), 0.7, 0.9,
                                        0.0, 2.0, 3000);
    REQUIRE(!r0.entries.empty());
    REQUIRE(!r5.entries.empty());
    bool differs = r0.entries.size() != r5.entries.size();
    if (!differs) {
        for (std::size_t i = 0; i < r0.entries.size(); ++i)
            if (std::abs(r0.entries[i].lambda - r5.entries[i].lambda) > 1e-3 * h)
                differs = true;
    }
    CHECK(differs);
}

TEST_CASE("radial eigenvalues nonnegative for gamma >= 0") {
    const double h = 0.05;
    for (long long m : {4, 7, 9}) {
        RadialProblem p{1.0, h, RobinParameter(0.0), m, 3000};
        RadialModes modes = radial_eigs(p, -h, 0.95 * h, false);
        for (int j = 0; j < modes.lambdas.size(); ++j)
            CHECK(modes.lambdas(j) >= 0.0);
    }
}

TEST_CASE("Dirichlet window below the first Landau level is empty") {
    RadialSpectrum rs =
        window_spectrum(1.0, 0.05, RobinParameter::dirichlet(), 0.5, 0.9, 3000);
    CHECK(rs.entries.empty());
    // direct check on a few modes
    for (long long m : {8, 14, 20}) {
        RadialProblem p{1.0, 0.05, RobinParameter::dirichlet(), m, 3000};
        RadialModes modes = radial_eigs(p, 0.5 * 0.05, 0.9 * 0.05, false);
        CHECK(modes.lambdas.size() == 0);
    }
}

TEST_CASE("mesh validation rejects an unresolved boundary layer") {
    RadialProblem p{1.0, 0.0004, RobinParameter(0.0), 3, 600};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
