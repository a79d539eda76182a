#pragma once

#include <optional>
#include <string>
#include <vector>

#include "magedge/numerics.hpp"

namespace magedge::degennes {

/// Robin parameter gamma in R union {Dirichlet}. Dirichlet stands for the
/// gamma -> +infinity limit u(0)=0.
class RobinParameter {
  public:
    RobinParameter(double value) : value_(value) {
        if (!std::isfinite(value))
            throw std::invalid_argument("RobinParameter: non-finite gamma");
        if (value < -kGammaBound)
            throw std::invalid_argument("RobinParameter: gamma below -" +
                                        std::to_string(kGammaBound));
    }
    static RobinParameter dirichlet() { return RobinParameter(Tag{}); }

    bool is_dirichlet() const { return dirichlet_; }
    double value() const {
        if (dirichlet_)
            throw std::logic_error("RobinParameter: Dirichlet has no value");
        return value_;
    }
    std::string str() const {
        return dirichlet_ ? "dirichlet" : std::to_string(value_);
    }
    bool operator==(const RobinParameter& o) const {
        return dirichlet_ == o.dirichlet_ &&
               (dirichlet_ || value_ == o.value_);
    }

    static constexpr double kGammaBound = 16.0;

  private:
    struct Tag {};
    explicit RobinParameter(Tag) : value_(0), dirichlet_(true) {}
    double value_;
    bool dirichlet_ = false;
};

/// Uniform grid on [0, T] with N intervals (N+1 nodes, Dirichlet cap at T).
struct HalfLineGrid {
    double T;
    int N;

    double delta() const { return T / N; }
    void validate(double sigma) const;

    /// Default grid for a given sigma: T = max(20, |sigma| + 12), spacing
    /// about 2.5e-3 (identity-grade), or 5e-3 for branch sampling.
    static HalfLineGrid for_sigma(double sigma, double target_delta = 2.5e-3);
};

/// One eigenpair of the half-line operator -d^2/dt^2 + (t-sigma)^2 with
/// Robin condition u'(0) = gamma u(0). u is L2-normalized with u(0) > 0
/// (u'(0) > 0 for Dirichlet).
struct EigenPair {
    int n = 0;            // 1-based branch index
    double mu = 0.0;      // eigenvalue (grid-refined when requested)
    Eigen::VectorXd u;    // samples at t_i = i*delta, i = 0..N
    double delta = 0.0;   // grid spacing of u
    double u0 = 0.0;      // boundary value u(0)
};

enum class SolvePolicy { raw, refined };

/// First n_max eigenpairs at (gamma, sigma). The refined policy combines the
/// given grid with its half-resolution counterpart by Richardson
/// extrapolation of the eigenvalues (the raw scheme is second order);
/// eigenfunctions always come from the given grid.
std::vector<EigenPair> solve(const RobinParameter& gamma, double sigma,
                             int n_max, const HalfLineGrid& grid,
                             SolvePolicy policy = SolvePolicy::refined);

/// Eigenvalues only (same policy semantics), cheaper.
Eigen::VectorXd eigenvalues(const RobinParameter& gamma, double sigma,
                            int n_max, const HalfLineGrid& grid,
                            SolvePolicy policy = SolvePolicy::refined);

/// Sampled dispersion curve sigma -> mu_n(gamma, sigma) with a spline
/// interpolant.
struct DispersionBranch {
    RobinParameter gamma{0.0};
    int n = 0;
    Eigen::VectorXd sigmas;
    Eigen::VectorXd mus;
    CubicSpline interp;
    bool monotonicity_resolved = true;
    std::string warning;

    double operator()(double sigma) const { return interp(sigma); }
    double derivative(double sigma) const { return interp.derivative(sigma); }
};

DispersionBranch dispersion_branch(const RobinParameter& gamma, int n,
                                   double sigma_lo, double sigma_hi,
                                   int n_samples,
                                   double grid_delta = 5e-3);

/// Minimum data for one dispersion curve: position xi_{n-1}(gamma), value
/// Theta^{[n-1]}(gamma) and curvature mu'' at the minimum.
struct BranchExtremum {
    int n;
    double gamma;
    double xi;
    double theta;
    double mu2;
};

BranchExtremum find_minimum(const RobinParameter& gamma, int n);

/// Relative residual of the curvature identity
/// mu'' = 2 xi |u(0)|^2 at the branch minimum.
double dauge_helffer_residual(const RobinParameter& gamma, int n);
double dauge_helffer_residual(const RobinParameter& gamma, int n,
                              const BranchExtremum& ext);

struct MomentCheck {
    double m1;           // first moment of (t - xi) |u|^2, should vanish
    double m3_residual;  // third-moment identity residual (squared u(0))
};

MomentCheck moment_check(const RobinParameter& gamma, int n);
MomentCheck moment_check(const RobinParameter& gamma, int n,
                         const BranchExtremum& ext);

/// Curvature-coupling coefficient
///   C_k(sigma) = int [ sigma^2 (t-sigma) - (t-sigma)^3 ] u^2 dt + u(0)^2/2,
/// the boundary term being the analytic value of -int u' u.
double compute_C(const RobinParameter& gamma, double sigma, int k,
                 std::optional<HalfLineGrid> grid = std::nullopt,
                 SolvePolicy policy = SolvePolicy::refined);

/// Robin threshold gamma_0^{[k-1]}: unique root of
/// f(gamma) = 1 - gamma sqrt(gamma^2 + Theta^{[k-1]}(gamma)).
double find_gamma0(int k, double tol = 1e-8);

/// One connected component of a dispersion-curve preimage of the window.
struct WindowComponent {
    int k = 0;           // branch index
    int q = 0;           // component index within the branch (1-based;
                         // 0 marks the single non-monotone piece when the
                         // window contains the branch minimum)
    double sigma_lo = 0;
    double sigma_hi = 0;
    bool increasing = false;  // sense of mu_k on the component
    bool monotone = true;
    double alpha = 0;    // preimage of a (NaN when a = -inf)
    double beta = 0;     // preimage of b
};

struct WindowDecomposition {
    double a = 0;  // -inf allowed when n_target == 1
    double b = 0;
    RobinParameter gamma{0.0};
    int n_target = 0;   // Landau band index n with [a,b] in (2n-3, 2n-1)
    int n_curves = 0;   // number of involved dispersion curves N(gamma,a,b)
    bool regular = true;  // no critical value Theta inside [a,b]
    std::vector<WindowComponent> components;
    std::vector<BranchExtremum> extrema;  // per k = 1..max involved

    const BranchExtremum* extremum_for(int k) const;
};

struct WindowOptions {
    // accept a window whose interior contains a branch minimum (the
    // resulting single component is non-monotone and flagged q = 0)
    bool allow_critical = false;
};

WindowDecomposition window_decomposition(const RobinParameter& gamma, double a,
                                         double b,
                                         const WindowOptions& opts = {});

/// Reusable per-(gamma, k) model of one dispersion curve over a sigma range:
/// mu spline, C spline and the minimum (for real gamma). Built once, then
/// read-only; all spectral formulas downstream evaluate through it.
class BranchModel {
  public:
    BranchModel() = default;
    BranchModel(const RobinParameter& gamma, int k, double sigma_lo,
                double sigma_hi, int n_mu_samples = 600,
                int n_c_samples = 240);

    double mu(double sigma) const { return branch_.interp(sigma); }
    double mu_prime(double sigma) const {
        return branch_.interp.derivative(sigma);
    }
    double C(double sigma) const { return c_spline_(sigma); }
    double sigma_lo() const { return branch_.interp.x_min(); }
    double sigma_hi() const { return branch_.interp.x_max(); }
    int k() const { return k_; }
    const DispersionBranch& branch() const { return branch_; }

  private:
    int k_ = 0;
    DispersionBranch branch_;
    CubicSpline c_spline_;
};

}  // namespace magedge::degennes
