#pragma once

#include <optional>

#include "magedge/degennes.hpp"
#include "magedge/geometry.hpp"

namespace magedge::effective {

using degennes::BranchModel;
using degennes::RobinParameter;
using degennes::WindowDecomposition;
using geometry::DomainGeometry;

/// Parameters of one spectral run: the spectrum of the magnetic Robin
/// Laplacian is sought in [h a, h b].
struct SemiclassicalConfig {
    double h = 0.05;
    RobinParameter gamma{0.0};
    double a = 0.0;
    double b = 0.0;
    DomainGeometry geom;
    double theta_extra = 0.0;  // Floquet offset added to theta(h)

    double hbar() const { return std::sqrt(h); }
    double theta() const {
        return geom.area / (2.0 * geom.L * h) + theta_extra;
    }
    void validate() const {
        if (!(h > 0) || h > 0.25)
            throw std::invalid_argument("SemiclassicalConfig: need 0 < h <= 0.25");
    }
};

/// Quantized momentum grid sigma_ell = sqrt(h) (pi ell / L + theta(h)).
struct FluxGrid {
    double theta = 0.0;
    double step = 0.0;  // sqrt(h) pi / L
    std::vector<long long> ells;
    Eigen::VectorXd sigmas;

    double sigma_of(long long ell, double h, double L) const {
        return std::sqrt(h) * (M_PI * ell / L + theta);
    }
};

enum class EntryOrder { leading2, matrix };

struct SpectrumEntry {
    int k = 0;
    int q = 0;
    long long ell = 0;
    double sigma = 0.0;
    double lambda = 0.0;
    EntryOrder order = EntryOrder::leading2;
};

struct EffectiveSpectrum {
    double window_lo = 0.0;  // h a
    double window_hi = 0.0;  // h b
    std::vector<SpectrumEntry> entries;  // sorted by lambda

    Eigen::VectorXd lambdas() const;
};

/// Reusable spectral context: window decomposition plus one BranchModel
/// (mu_k and C_k splines) per involved dispersion curve, valid for any
/// h <= h_max of the construction.
class EffectiveModel {
  public:
    EffectiveModel(const RobinParameter& gamma, const DomainGeometry& geom,
                   double a, double b, double h_max,
                   const degennes::WindowOptions& opts = {});

    const WindowDecomposition& window() const { return wd_; }
    const DomainGeometry& geom() const { return geom_; }
    const RobinParameter& gamma() const { return gamma_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double h_max() const { return h_max_; }
    const BranchModel& model_for(int k) const;
    double mean_kappa() const { return geom_.mean_curvature(); }

  private:
    RobinParameter gamma_;
    DomainGeometry geom_;
    double a_, b_, h_max_;
    WindowDecomposition wd_;
    std::vector<BranchModel> models_;  // indexed by k-1
};

FluxGrid flux_grid(const EffectiveModel& model, double h,
                   double theta_extra = 0.0);

/// Two-term spectrum h mu_k(sigma_ell) - h^{3/2} <kappa> C_k(sigma_ell),
/// restricted to [h(a - pad), h(b + pad)].
EffectiveSpectrum leading_spectrum(const EffectiveModel& model, double h,
                                   double theta_extra = 0.0,
                                   double window_pad = 0.0);

/// Weyl-quantized matrix of the two-term symbol of curve k in the
/// Floquet-Fourier basis, with the basis ell labels.
struct PdoMatrix {
    int k = 0;
    std::vector<long long> ells;
    Eigen::MatrixXd m;       // real symmetric representation
    bool complex_doubled = false;  // split-basis doubling applied
};

PdoMatrix pdo_matrix(const EffectiveModel& model, int k, double h,
                     double theta_extra = 0.0, double margin_factor = 1.0);

struct PdoSpectrum {
    int k = 0;
    Eigen::VectorXd values;          // eigenvalues in symbol units (lambda/h)
    std::vector<long long> labels;   // dominant basis index per eigenvalue
    Eigen::VectorXd sigma_dominant;  // sigma_ell of that index
};

/// Eigenvalues of the pdo matrix; verifies that in-window eigenvectors do
/// not touch the truncation edge, enlarging up to three times if they do.
PdoSpectrum pdo_spectrum(const EffectiveModel& model, int k, double h,
                         double theta_extra = 0.0);

/// EffectiveSpectrum assembled from the per-curve pdo matrices.
EffectiveSpectrum matrix_spectrum(const EffectiveModel& model, double h,
                                  double theta_extra = 0.0,
                                  double window_pad = 0.0);

/// Bohr-Sommerfeld series of one monotone component: f0 = mu_k, f1 =
/// -<kappa> C_k, and the quantized energies at the flux-grid points.
struct BSSeries {
    int k = 0;
    int q = 0;
    Eigen::VectorXd sigma_samples;
    Eigen::VectorXd f0;
    Eigen::VectorXd f1;
    std::vector<long long> ells;
    Eigen::VectorXd sigma_ell;
    Eigen::VectorXd energy;  // f0 + hbar f1 at sigma_ell (symbol units)
};

BSSeries bohr_sommerfeld(const EffectiveModel& model, int k, int q, double h,
                         double theta_extra = 0.0);

struct WeylCount {
    long long count = 0;
    double first_term = 0.0;   // (L / (pi sqrt(h))) sum |alpha - beta|
    double second_term = 0.0;  // (L <kappa> / pi) sum curvature corrections
};

WeylCount weyl_count(const EffectiveModel& model, double h);

/// One semiclassical eigenvalue branch h -> h f_{1,q}(sigma_ell(h), sqrt(h)).
struct BranchCurve {
    int q = 0;
    long long ell = 0;
    std::vector<double> hs;
    std::vector<double> values;
};

struct BranchCrossing {
    double h = 0.0;
    long long ell_rising = 0;   // branch increasing in h at the crossing
    long long ell_falling = 0;
    double lambda = 0.0;
    double gap_rate = 0.0;  // |d/dh (difference)| at the crossing
};

struct BranchDiagram {
    std::vector<BranchCurve> curves;
    std::vector<BranchCrossing> crossings;
    double c_hat = 0.0;  // empirical min |f'| over the window components
    double min_separation_ratio = 0.0;  // same-family gap / (h^{3/2} pi c/L)
    bool q1_increasing_in_h = false;    // empirical orientation of q = 1
};

/// Trace the two families of branches over [h_lo, h_hi] (window below the
/// first Landau level, a > Theta^[0](gamma)).
BranchDiagram trace_branches(const EffectiveModel& model, double h_lo,
                             double h_hi, int n_h_samples = 600);

struct LowLyingLadder {
    double gamma0 = 0.0;
    double epsilon = 0.0;  // sign(gamma0 - gamma)
    double theta0 = 0.0;
    double xi0 = 0.0;
    double c1 = 0.0;
    double mu2 = 0.0;
    double s_max = 0.0;
    double kappa_at_smax = 0.0;
    double k2 = 0.0;
    int well_multiplicity = 1;
    Eigen::VectorXd lambdas;  // j = 1..j_max
};

/// Three-term low-lying asymptotics
///   lambda_j = Theta0 h - kappa(s_max) C1 h^{3/2}
///              + h^{7/4} (2j-1)/2 sqrt(k2 |C1| mu2'').
LowLyingLadder lowlying_spectrum(const RobinParameter& gamma,
                                 const DomainGeometry& geom, double h,
                                 int j_max,
                                 std::optional<double> gamma0 = std::nullopt);

struct HarmonicCrosscheck {
    LowLyingLadder ladder;
    Eigen::VectorXd pdo_lambdas;      // matrix eigenvalues below the cutoff
    Eigen::VectorXd residuals;        // per ladder level j
    double max_residual_over_h74 = 0.0;
};

HarmonicCrosscheck harmonic_crosscheck(const RobinParameter& gamma,
                                       const DomainGeometry& geom, double h,
                                       int j_max,
                                       std::optional<double> gamma0 = std::nullopt);

/// Spectral comparison helpers (multisets of reals, ascending or not).
struct SpectraDistance {
    double hausdorff = 0.0;        // strict-window sets, symmetric
    double padded_hausdorff = 0.0; // strict elements matched into the
                                   // O(h^2)-dilated partner sets
    std::size_t count_a = 0;
    std::size_t count_b = 0;
};

SpectraDistance compare_spectra(const Eigen::VectorXd& a_strict,
                                const Eigen::VectorXd& a_padded,
                                const Eigen::VectorXd& b_strict,
                                const Eigen::VectorXd& b_padded);

}  // namespace magedge::effective
