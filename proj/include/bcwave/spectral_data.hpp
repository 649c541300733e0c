#pragma once

#include <string>
#include <vector>

#include "bcwave/control.hpp"

namespace bcwave {

/// Discrete quadrature approximation (nodes lambda_n, weights rho_n) of the
/// spectral function sigma. The inverse problem's sole input.
struct SpectralMeasure {
    std::vector<double> nodes;
    std::vector<double> weights;
    enum class Kind { closed_form, truncated_discrete } kind = Kind::truncated_discrete;

    std::size_t size() const { return nodes.size(); }
    void validate() const;

    static SpectralMeasure load_csv(const std::string& path);
    void save_csv(const std::string& path) const;
};

/// Values of a transform image at the measure nodes. All data handled by this
/// artifact is real-valued (real potential, real controls, trivial gauge
/// phase), so images are stored as real arrays.
struct SpectralImage {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

/// Entire extension of lambda^{-1/2} sin(lambda^{1/2} t): power series for
/// |lambda| t^2 below the switch threshold, sinh branch for lambda < 0.
double sine_kernel(double lambda, double t);

/// sigma-space inner product sum_n a_n b_n rho_n.
double measure_inner(const SpectralImage& a, const SpectralImage& b, const SpectralMeasure& mu);

/// Fourier image of the wave u^f(.,t):
/// u_check(lambda, t) = int_0^t lambda^{-1/2} sin[lambda^{1/2} (t-s)] f(s) ds.
/// Contains no reference to the potential.
SpectralImage wave_image(const Control& f, double T, const SpectralMeasure& mu);

/// Image of the model operator applied to u_check: -u_check^{f_tt}(., T),
/// with f'' taken by central differences on the control grid.
SpectralImage wave_image_second(const Control& f, double T, const SpectralMeasure& mu);

/// Gram matrix G_ij = sum_n u_i(lambda_n) u_j(lambda_n) rho_n (row-major,
/// symmetric positive semidefinite).
std::vector<double> gram(const std::vector<SpectralImage>& images, const SpectralMeasure& mu);

} // namespace bcwave
