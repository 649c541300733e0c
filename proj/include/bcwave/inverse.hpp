#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bcwave/control.hpp"
#include "bcwave/linalg.hpp"
#include "bcwave/spectral_data.hpp"
#include "bcwave/wave_model.hpp"

// The inverse pipeline reconstructs the potential from a spectral measure
// alone. Nothing in this header (or its includes) names a potential: the
// firewall is structural.

namespace bcwave {

struct ReconstructionConfig {
    double T_data = 3.0;
    std::size_t n_controls = 24;
    std::size_t n_tau = 96;
    std::vector<double> windows = {0.15, 0.10};
    double reg_eps = 1e-8; // Tikhonov shift relative to trace(G)
    double cond_tol = 1e6;
    std::size_t n_probes = 6;

    void validate() const;
    /// Flat key=value text; keys T_data, n_controls, n_tau, windows
    /// (comma-separated, decreasing), reg_eps, cond_tol, n_probes.
    static ReconstructionConfig load(const std::string& path);
};

/// Projection machinery onto the reachable subspaces: the span of the wave
/// images of a control basis at horizon T realizes P_{omega_0(T)}, and the
/// suffix of controls supported in (T-s, T) realizes P_{omega_0(s)} (time
/// invariance of the system). Projections are Tikhonov-regularized through
/// the Gram matrix of the images in L_{2,sigma}.
class DataProjection {
public:
    DataProjection(const SpectralMeasure& mu, double T, std::vector<Control> basis,
                   double reg_eps);

    double T() const { return T_; }
    std::size_t basis_size() const { return images_.size(); }
    const SpectralMeasure& measure() const { return mu_; }
    const std::vector<SpectralImage>& basis_images() const { return images_; }
    double reg_shift() const { return shift_; }
    std::size_t effective_rank() const { return rank_; }

    /// Number of basis elements spanning (the approximation of) L2([0,s)).
    std::size_t suffix_count(double s) const;

    /// (P_{omega_0(s)} u, v) in L_{2,sigma}; b_u, b_v are the precomputed
    /// vectors of inner products of u, v against the basis images.
    double project_inner(const std::vector<double>& b_u, const std::vector<double>& b_v,
                         double s) const;

    /// Inner products of an image against every basis image.
    std::vector<double> basis_inners(const SpectralImage& u) const;

    /// Full-span projection of an image (diagnostics).
    SpectralImage project(const SpectralImage& u) const;

    /// Effective position of the window element P_{omega_x(t)} e_check: the
    /// gauge-weighted centroid of its decomposition into horizon slices
    /// P_{omega_0(s_k)} - P_{omega_0(s_{k-1})}. The regularized projections
    /// displace the window away from x; ratios over the window recover the
    /// coordinate trace at this position, not at x.
    double window_centroid(double x, double t) const;

    /// Decomposition of the window element P_{omega_x(t)} e_check over the
    /// horizon slices P_{omega_0(s_k)} - P_{omega_0(s_{k-1})}: weight k is
    /// (e_check, D_k W e_check). The ratio over the window is the
    /// a-weighted quadrature of the coordinate trace at slice_positions().
    std::vector<double> slice_weights(double x, double t) const;
    const std::vector<double>& slice_positions() const;

private:
    void ensure_gauge_slices() const;
    const CholeskyFactor& factor(std::size_t count) const;

    SpectralMeasure mu_;
    double T_ = 0.0;
    std::vector<Control> basis_;
    std::vector<double> starts_; // support start of each basis control
    std::vector<SpectralImage> images_;
    std::vector<double> G_;
    double shift_ = 0.0;
    std::size_t rank_ = 0;
    mutable std::vector<std::unique_ptr<CholeskyFactor>> factors_;
    mutable std::vector<std::vector<double>> gauge_c_; // P_{suffix k} e_check coefficients
    mutable std::vector<double> horizons_;             // horizon of suffix size k
    mutable std::vector<double> slice_pos_;            // midpoints of the horizon slices
};

DataProjection data_projection(const SpectralMeasure& mu, double T,
                               const std::vector<Control>& basis, double reg_eps);

/// (P_{omega_x(t)} u, v) = (P_{omega_0(x+t)} u, v) - (P_{omega_0((x-t)+)} u, v);
/// the second term is absent for t >= x.
double atom_inner(const DataProjection& dp, double x, double t, const std::vector<double>& b_u,
                  const std::vector<double>& b_v);

/// Image of the gauge element e = phi: e_check(lambda) = 1/lambda.
SpectralImage gauge_image(const SpectralMeasure& mu);

/// Values of the coordinate image of the wave with image u at the atoms of
/// x_grid: window ratios (P_{omega_x(t)} u, e_check)/(P_{omega_x(t)} e_check,
/// e_check), Richardson-extrapolated over the two smallest windows.
std::vector<double> recover_values_image(const DataProjection& dp, const SpectralImage& u,
                                         const std::vector<double>& x_grid,
                                         const std::vector<double>& windows);

/// Same for the wave driven by the control f at horizon dp.T().
std::vector<double> recover_values(const DataProjection& dp, const Control& f,
                                   const std::vector<double>& x_grid,
                                   const std::vector<double>& windows);

/// Window ratios tagged with the true positions they sample: one data point
/// per (atom, window), valued (P_{omega_x(t)} u, e_check)/(P_{omega_x(t)}
/// e_check, e_check) and located at the window centroid. Positions depend on
/// the projection geometry only, so they are shared across images.
struct LocatedValues {
    std::vector<double> pos;
    std::vector<double> val;
    std::vector<double> win; // window size that produced each sample
};
LocatedValues recover_values_located(const DataProjection& dp, const SpectralImage& u,
                                     const std::vector<double>& x_grid,
                                     const std::vector<double>& windows);

struct InversionResult {
    ModelCoefficients mc;
    double trusted_lo = 0.0;
    double trusted_hi = 0.0;
    std::map<std::string, double> diagnostics;
};

/// The end-to-end inverse: spectral measure -> (p, Q, e, q_rec) on the tau
/// grid. Reads nothing but (mu, cfg).
InversionResult recover_potential(const SpectralMeasure& mu, const ReconstructionConfig& cfg);

/// The smooth bump-control basis used by recover_potential (exposed for
/// diagnostics and tests): n disjoint bumps tiling (0, T).
std::vector<Control> bump_basis(double T, std::size_t n, double h);

/// Probe controls spanning (0, T]: smooth ramp times sin((k + 1/2) pi t / T),
/// all nonzero at t = T.
std::vector<Control> probe_controls(double T, std::size_t n, double h);

} // namespace bcwave
