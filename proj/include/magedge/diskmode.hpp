#pragma once

#include "magedge/degennes.hpp"

namespace magedge::diskmode {

using degennes::RobinParameter;

/// One angular-momentum mode of the magnetic Robin Laplacian on the disk of
/// radius R with unit field, in the gauge A = (1/2)(-y, x). After separating
/// psi = f(r) exp(i m phi) and substituting g = sqrt(r) f, the radial
/// operator reads
///   -h^2 g'' + [ (h m / r - r/2)^2 - h^2/(4 r^2) ] g
/// on (0, R], with g(0) = 0 and the Robin condition
/// f'(R) = -gamma h^{-1/2} f(R), i.e. g'(R) = (1/(2R) - gamma h^{-1/2}) g(R).
struct RadialProblem {
    double R = 1.0;
    double h = 0.05;
    RobinParameter gamma{0.0};
    long long m = 0;
    int N_r = 3000;

    double delta() const { return R / N_r; }
    void validate() const;
};

struct RadialModes {
    Eigen::VectorXd lambdas;  // ascending, within the requested window
    Eigen::MatrixXd g;        // symmetrized eigenfunctions at r_i = i delta,
                              // i = 1..N_r, unit discrete L2 norm
    double delta = 0.0;
    double R = 1.0;
};

/// Eigenvalues of one radial mode inside [lo, hi], with eigenfunctions.
RadialModes radial_eigs(const RadialProblem& p, double lo, double hi,
                        bool want_vectors = true);

struct RadialEntry {
    long long m = 0;
    int j = 0;  // radial index within the mode (1-based)
    double lambda = 0.0;
    double sigma = 0.0;  // flux coordinate sqrt(h) (m/R + R/(2h))
};

struct RadialSpectrum {
    std::vector<RadialEntry> entries;  // sorted by lambda
    long long m_lo = 0, m_hi = 0;      // swept range

    Eigen::VectorXd lambdas() const;
};

/// All disk eigenvalues in [h a, h b], sweeping the angular momenta
/// predicted by the flux relation sigma = sqrt(h) (m/R + R/(2h)) over the
/// given preimage hull (inflated by five grid steps, then verified empty at
/// both ends; the margin doubles up to three times if not).
RadialSpectrum window_spectrum(double R, double h, const RobinParameter& gamma,
                               double a, double b, double sigma_hull_lo,
                               double sigma_hull_hi, int N_r = 3000);

/// Convenience overload deriving the hull from the dispersion curves.
RadialSpectrum window_spectrum(double R, double h, const RobinParameter& gamma,
                               double a, double b, int N_r = 3000);

struct LocalizationProfile {
    Eigen::VectorXd depths;     // distances to the boundary, multiples of sqrt(h)/4
    Eigen::VectorXd mass;       // L2 mass within that distance of r = R
    double alpha_hat = 0.0;     // fitted exponential rate of the inward tail
};

/// Cumulative boundary mass profile of one radial eigenfunction and the
/// fitted Agmon-type decay rate (mass beyond depth d ~ exp(-2 alpha d / sqrt h)).
LocalizationProfile localization_profile(const RadialProblem& p,
                                         const Eigen::VectorXd& g_samples);

}  // namespace magedge::diskmode
