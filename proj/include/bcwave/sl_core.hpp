#pragma once

#include <complex>
#include <vector>

#include "bcwave/potential.hpp"

namespace bcwave {

/// The gauge solution phi (-phi'' + q phi = 0, phi(0) = 1, L2 branch) and the
/// auxiliary eta = L^{-1} phi (eta(0) = 0, decaying, eta'(0) != 0).
struct GaugeSolution {
    std::vector<double> phi;
    double phi_prime0 = 0.0;
    std::vector<double> eta;
    double eta_prime0 = 0.0;
    double h = 0.0;
};

/// Coefficients of phi in the concrete boundary operators:
/// Gamma1 y = -y(0) phi, Gamma2 y = [(y'(0) - y(0) phi'(0)) / eta'(0)] phi.
struct BoundaryData {
    std::complex<double> gamma1_coeff;
    std::complex<double> gamma2_coeff;
};

/// Decaying solution of -phi'' + q phi = 0 normalized by phi(0) = 1.
/// Integrates backward from X_max with a WKB-consistent decaying seed and
/// rescales; throws NoDecayingSolution when the rescaling degenerates.
/// Accuracy claims exclude the buffer zone [0.8 X_max, X_max].
GaugeSolution solve_phi(const Potential& q);

/// Fills in eta = L^{-1} phi by shooting on eta'(0) with decay matching at
/// X_max. Returns the completed GaugeSolution.
GaugeSolution solve_eta(const Potential& q, GaugeSolution g);

BoundaryData boundary_operators(std::complex<double> y0, std::complex<double> y0prime,
                                const GaugeSolution& g);

/// IVP solution of -psi'' + q psi = lambda psi, psi(0) = 0, psi'(0) = 1,
/// classical RK4 with the potential's fixed step.
struct PsiSolution {
    std::vector<double> psi;
    std::vector<double> psi_prime;
};
PsiSolution solve_psi(const Potential& q, double lambda);

} // namespace bcwave
