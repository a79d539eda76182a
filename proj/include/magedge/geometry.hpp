#pragma once

#include <complex>
#include <string>
#include <vector>

#include "magedge/numerics.hpp"

namespace magedge::geometry {

enum class DomainKind { disk, ellipse, custom };

/// Boundary data of a smooth, bounded, simply connected planar domain:
/// counterclockwise arclength parametrization, curvature samples on a
/// uniform grid of M points over [0, 2L), area, and the Fourier modes of
/// the curvature (kappa_hat[j] multiplies exp(i pi j s / L)).
struct DomainGeometry {
    double L = 0.0;     // half-perimeter, |boundary| = 2L
    double area = 0.0;  // |Omega|
    DomainKind kind = DomainKind::custom;
    Eigen::VectorXd s;      // M uniform arclength samples in [0, 2L)
    Eigen::VectorXd kappa;  // curvature at those samples
    std::vector<std::complex<double>> kappa_fourier;  // index j in [-J, J]
    int J = 0;

    double mean_curvature() const { return M_PI / L; }
    double kappa_at(double arc) const { return kappa_spline(arc); }
    std::complex<double> kappa_hat(int j) const;
    double gauss_bonnet_residual() const;

    PeriodicCubicSpline kappa_spline;
};

DomainGeometry disk(double R, int M = 1024);
DomainGeometry ellipse(double a_axis, double b_axis, int M = 1024);

/// Star-shaped boundary r(phi) = c0 + sum_j (cos_amp[j] cos(j phi) +
/// sin_amp[j] sin(j phi)), amplitudes indexed from 1.
struct RadialFourier {
    double c0 = 1.0;
    std::vector<double> cos_amp;
    std::vector<double> sin_amp;

    double r(double phi) const;
    double dr(double phi) const;
    double d2r(double phi) const;
};

DomainGeometry custom_from_radius(const RadialFourier& rf, int M = 1024);

/// Shift the arclength origin by s0 (rigid rotation of the parametrization).
DomainGeometry rotate_origin(const DomainGeometry& g, double s0);

enum class ExtremumDirection { max_kappa, max_neg_kappa };

struct CurvatureExtremum {
    double s_max = 0.0;
    double kappa_max = 0.0;   // signed curvature value at s_max
    double k2 = 0.0;          // -f''(s_max) of the selected signed curvature
    int multiplicity = 1;     // number of symmetry-equivalent global maxima
};

/// Locate the global maximum of the selected signed curvature (kappa or
/// -kappa). Several isolated equal maxima (symmetry copies) are accepted and
/// counted in multiplicity; a flat plateau (constant curvature) is rejected.
CurvatureExtremum curvature_extremum(const DomainGeometry& g,
                                     ExtremumDirection direction);

}  // namespace magedge::geometry
