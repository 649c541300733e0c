#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace bcwave {

/// Atom of the wave spectrum: the family t -> L2({x}^t), identified by its
/// coordinate x >= 0. The boundary atom is x = 0.
struct Atom {
    double x = 0.0;
};

/// Coefficients of the coordinate model operator -y'' + p y' + Q y, the gauge
/// amplitude e and the recovered potential, all on tau_grid. mask[i] != 0
/// flags nodes whose (p, Q) came from interpolation rather than the local
/// solve.
struct ModelCoefficients {
    std::vector<double> tau_grid;
    std::vector<double> p;
    std::vector<double> Q;
    std::vector<double> e;
    std::vector<double> q_rec;
    std::vector<int> mask;
};

/// Eikonal of the atom: multiplication by dist(x, x_omega) on the space grid.
std::vector<double> eikonal_apply(const Atom& omega, const std::vector<double>& y, double h);

/// Riemann-sum realization of the eikonal integral t dP_{omega(t)} over a
/// uniform partition of [0, t_max] with `rank` cells; converges to
/// eikonal_apply at rate O(1/rank) on y supported in the t_max-ball.
std::vector<double> eikonal_riemann(const Atom& omega, const std::vector<double>& y, double h,
                                    double t_max, std::size_t rank);

/// Metric of the wave spectrum: tau(omega, omega') = |x - x'| exactly.
double atom_metric(const Atom& a, const Atom& b);

/// Measure of the metric ball: nu(B_r[omega]) = r + min(r, x_omega).
double ball_measure(const Atom& omega, double r);

/// Value of the wave on the atom: window ratios
/// int_{{x}^t} u e dx / int_{{x}^t} e^2 dx for each window t, Richardson
/// extrapolated t -> 0; approximates u(x_omega)/e(x_omega). Throws GaugeZero
/// when |e(x_omega)| < 1e-8 * max|e|.
double value_on_atom(const std::vector<double>& u, const std::vector<double>& e, double h,
                     const Atom& omega, const std::vector<double>& windows);

/// Coordinate map (Yy)(tau) = y(tau)/e(tau) and the measure density |e|^2.
/// Throws GaugeZero on zeros of e.
std::pair<std::vector<double>, std::vector<double>> y_map(const std::vector<double>& y,
                                                          const std::vector<double>& e);

/// Extracts (p, Q) of the model operator from graph pairs (y_i, g_i = L~ y_i)
/// sampled on tau_grid: per node solves p y_i' + Q y_i = g_i + y_i'' in the
/// least-squares sense. Ill-conditioned and margin nodes are masked and filled
/// by interpolation. Derivatives are taken by difference stencils on tau_grid.
ModelCoefficients model_coefficients(
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs,
    const std::vector<double>& tau_grid, double cond_tol = 1e6);

/// Graph sample with derivatives computed upstream (e.g. read off a local
/// polynomial fit of scattered data): y, y', y'' and g = L~ y on tau_grid.
struct GraphJet {
    std::vector<double> y;
    std::vector<double> yp;
    std::vector<double> ypp;
    std::vector<double> g;
};

/// Same extraction from jets; no difference stencils, so no margin nodes.
ModelCoefficients model_coefficients(const std::vector<GraphJet>& jets,
                                     const std::vector<double>& tau_grid, double cond_tol = 1e6);

/// Completes the chain of the inverse step: e = exp(-int p/2) with e(0) = 1,
/// q_rec = Q + e''/e. Fills mc.e and mc.q_rec, returns q_rec.
std::vector<double> recover_q_from_pQ(ModelCoefficients& mc);

/// Coordinate boundary operators: Gamma_1c y = -y(0), Gamma_2c y = y'(0)/eta'(0).
std::pair<std::complex<double>, std::complex<double>> green_ops_coord(
    std::complex<double> y0, std::complex<double> y0prime, double eta_prime0);

} // namespace bcwave
