#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>
#include <complex>

namespace magedge {

/// Thrown when an eigenpair computation fails to converge; carries the
/// 1-based index of the offending eigenvalue.
struct EigenpairFailure : std::runtime_error {
    EigenpairFailure(const std::string& what, int index_)
        : std::runtime_error(what), index(index_) {}
    int index;
};

/// Thrown by brent_root when the iteration budget is exhausted; carries the
/// best bracket found so far.
struct RootFailure : std::runtime_error {
    RootFailure(const std::string& what, double lo_, double hi_)
        : std::runtime_error(what), lo(lo_), hi(hi_) {}
    double lo, hi;
};

/// Real symmetric tridiagonal matrix, stored as the two diagonals.
struct SymTridiag {
    Eigen::VectorXd diag;     // length N, N >= 2
    Eigen::VectorXd offdiag;  // length N-1

    Eigen::Index size() const { return diag.size(); }
    /// Infinity-norm upper bound, used to scale residual tolerances.
    double norm_bound() const;
    void validate() const;
};

struct TridiagEigs {
    Eigen::VectorXd values;   // ascending, counted with multiplicity
    Eigen::MatrixXd vectors;  // one unit-norm column per value
};

/// Default tolerances; every threshold can be overridden per call.
struct EigsOptions {
    double residual_tol = 1e-10;   // per pair, relative to ||M||
    double cluster_tol = 1e-10;    // gap below which eigenvectors are
                                   // re-orthogonalized as a cluster
    int max_restarts = 4;
};

/// Eigenvalues k_lo..k_hi (1-based, ascending) of a symmetric tridiagonal
/// matrix by Sturm-sequence bisection, eigenvectors by inverse iteration.
/// Residual guarantee: ||M v - lambda v|| <= residual_tol * ||M|| per pair.
TridiagEigs tridiag_eigs(const SymTridiag& m, int k_lo, int k_hi,
                         bool want_vectors = true,
                         const EigsOptions& opts = {});

/// Eigenvalue-only variant (skips inverse iteration entirely).
Eigen::VectorXd tridiag_eigenvalues(const SymTridiag& m, int k_lo, int k_hi);

/// Number of eigenvalues of m strictly below x (Sturm count).
int sturm_count_below(const SymTridiag& m, double x);

/// Full spectrum of a dense symmetric matrix via Householder
/// tridiagonalization followed by tridiag_eigs. Rejects inputs whose
/// asymmetry exceeds 1e-12 relative.
TridiagEigs dense_sym_eigs(const Eigen::MatrixXd& m,
                           const EigsOptions& opts = {});

/// Root of f on [lo,hi] by Brent's method. Requires a sign change.
double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double tol, int max_iter = 200);

struct MinResult {
    double xmin;
    double fmin;
};

/// Golden-section/parabolic minimizer (Brent). The bracket must contain a
/// minimum of a unimodal f; the caller is responsible for unimodality.
MinResult minimize_1d(const std::function<double(double)>& f, double lo,
                      double hi, double xtol, int max_iter = 200);

enum class QuadKind { trapezoid, simpson };

/// Composite quadrature rule on a uniform grid. Simpson requires an odd
/// number of nodes.
struct QuadratureRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
    QuadKind kind;

    static QuadratureRule trapezoid(double a, double b, int n_nodes);
    static QuadratureRule simpson(double a, double b, int n_nodes);
};

double integrate(const Eigen::VectorXd& samples, const QuadratureRule& rule);
double integrate(const std::function<double(double)>& f,
                 const QuadratureRule& rule);

/// Simpson weight vector for n_nodes samples with spacing delta (n_nodes odd).
Eigen::VectorXd simpson_weights(int n_nodes, double delta);

/// Central second difference with one Richardson step over h0 and h0/2.
double second_derivative(const std::function<double(double)>& f, double x,
                         double h0);

/// Cubic spline interpolant with not-a-knot end conditions (reproduces
/// cubics exactly). Knots must be strictly increasing.
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

    double operator()(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    double x_min() const { return x_.size() ? x_(0) : 0.0; }
    double x_max() const { return x_.size() ? x_(x_.size() - 1) : 0.0; }
    bool empty() const { return x_.size() == 0; }
    const Eigen::VectorXd& knots() const { return x_; }
    const Eigen::VectorXd& values() const { return y_; }

  private:
    Eigen::Index segment(double x) const;
    Eigen::VectorXd x_, y_, m_;  // m_ = second derivatives at the knots
};

/// Periodic cubic spline on [0, period); the sample at x = period is the
/// sample at 0.
class PeriodicCubicSpline {
  public:
    PeriodicCubicSpline() = default;
    PeriodicCubicSpline(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                        double period);

    double operator()(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;
    double period() const { return period_; }

  private:
    double wrap(double x) const;
    Eigen::VectorXd x_, y_, m_;
    double period_ = 0.0;
};

/// In-place radix-2 FFT, X_j = sum_m x_m exp(-2*pi*i*j*m/M). M must be a
/// power of two.
void fft_radix2(std::vector<std::complex<double>>& x);

/// Deterministic xorshift64* stream used to seed inverse iteration.
class DeterministicRng {
  public:
    explicit DeterministicRng(std::uint64_t seed = 0x9e3779b97f4a7c15ull)
        : state_(seed ? seed : 1) {}
    double uniform();  // in [-0.5, 0.5)
  private:
    std::uint64_t state_;
};

}  // namespace magedge
