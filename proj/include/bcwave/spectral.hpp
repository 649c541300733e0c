#pragma once

#include "bcwave/potential.hpp"
#include "bcwave/spectral_data.hpp"

namespace bcwave {

/// Truncated-interval approximation of the spectral measure: Dirichlet
/// eigenvalues lambda_n <= Lambda_max of -y'' + q y on [0,X] located by
/// bisection on sign changes of psi(X, lambda), weights
/// rho_n = 1 / int_0^X psi(x, lambda_n)^2 dx.
SpectralMeasure truncated_measure(const Potential& q, double X, double Lambda_max);

/// Transform image u_check(lambda_n) = int y psi(., lambda_n) dx by trapezoid
/// quadrature; y sampled on the potential grid.
SpectralImage phi_transform(const std::vector<double>& y, const Potential& q,
                            const SpectralMeasure& mu);

} // namespace bcwave
