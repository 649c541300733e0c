#pragma once

#include <vector>

#include "bcwave/control.hpp"
#include "bcwave/spectral_data.hpp"

// Grid-sampled Sturm-Liouville solvers: the potential enters as a raw sample
// vector q[i] = q(i h). The Potential-facing wrappers delegate here, and the
// inverse calibration drives these routines with candidate sample vectors it
// builds from spectral data alone, so none of this depends on the Potential
// type.

namespace bcwave {

/// Truncated spectral measure of -d^2/dx^2 + q on [0, X] with Dirichlet
/// cutoff at X: nodes are the eigenvalues below Lambda_max, weights are
/// 1 / ||psi_n||^2 for psi_n normalized by psi_n'(0) = 1.
SpectralMeasure grid_truncated_measure(const std::vector<double>& q, double h, double X,
                                       double Lambda_max);

/// Final time slice u(., T) of the boundary-controlled wave u_tt = u_xx - q u,
/// u(0, t) = f(t), zero initial data, explicit scheme at CFL = 1 (the control
/// step must equal h, and T must be a multiple of h).
std::vector<double> grid_boundary_trace(const std::vector<double>& q, double h, const Control& f,
                                        double T);

/// Decaying solution phi of -phi'' + q phi = 0 normalized to phi(0) = 1,
/// integrated backward from the far end of the grid.
std::vector<double> grid_decaying_gauge(const std::vector<double>& q, double h);

} // namespace bcwave
