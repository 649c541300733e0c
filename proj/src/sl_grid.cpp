#include "bcwave/sl_grid.hpp"

#include <algorithm>
#include <cmath>

#include "bcwave/errors.hpp"
#include "bcwave/grid.hpp"

namespace bcwave {

namespace {

// endpoint-only RK4 for -psi'' + q psi = lambda psi, psi(0)=0, psi'(0)=1
double psi_at(const std::vector<double>& q, double h, double lambda, std::size_t n_nodes) {
    double y = 0.0, yp = 1.0;
    for (std::size_t i = 0; i + 1 < n_nodes; ++i) {
        const double x = double(i) * h;
        const double a0 = q[i] - lambda;
        const double am = grid_interp_cubic(q, h, x + 0.5 * h) - lambda;
        const double a1 = q[i + 1] - lambda;
        const double k1y = yp, k1p = a0 * y;
        const double k2y = yp + 0.5 * h * k1p, k2p = am * (y + 0.5 * h * k1y);
        const double k3y = yp + 0.5 * h * k2p, k3p = am * (y + 0.5 * h * k2y);
        const double k4y = yp + h * k3p, k4p = a1 * (y + h * k3y);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        yp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    }
    return y;
}

// same RK4, storing the whole profile on the first n_nodes grid points
std::vector<double> psi_profile(const std::vector<double>& q, double h, double lambda,
                                std::size_t n_nodes) {
    std::vector<double> psi(n_nodes, 0.0);
    double y = 0.0, yp = 1.0;
    for (std::size_t i = 0; i + 1 < n_nodes; ++i) {
        const double x = double(i) * h;
        const double a0 = q[i] - lambda;
        const double am = grid_interp_cubic(q, h, x + 0.5 * h) - lambda;
        const double a1 = q[i + 1] - lambda;
        const double k1y = yp, k1p = a0 * y;
        const double k2y = yp + 0.5 * h * k1p, k2p = am * (y + 0.5 * h * k1y);
        const double k3y = yp + 0.5 * h * k2p, k3p = am * (y + 0.5 * h * k2y);
        const double k4y = yp + h * k3p, k4p = a1 * (y + h * k3y);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        yp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        psi[i + 1] = y;
    }
    return psi;
}

} // namespace

SpectralMeasure grid_truncated_measure(const std::vector<double>& q, double h, double X,
                                       double Lambda_max) {
    if (q.size() < 2 || h <= 0.0) throw GridMismatch("potential samples do not form a grid");
    const auto n_nodes = std::size_t(std::lround(X / h)) + 1;
    if (n_nodes > q.size()) throw GridMismatch("X exceeds the potential grid");

    // scan in k with lambda = qmin + k^2: the Dirichlet eigenvalues are
    // spaced ~pi/X apart in k, so a pi/(2X) scan step cannot skip one
    const double qmin = *std::min_element(q.begin(), q.end());
    const double kmax = Lambda_max > qmin ? std::sqrt(Lambda_max - qmin) : 0.0;
    const double dk = 0.45 * M_PI / X;

    SpectralMeasure mu;
    mu.kind = SpectralMeasure::Kind::truncated_discrete;
    double k_prev = 0.0;
    double g_prev = psi_at(q, h, qmin, n_nodes);
    for (double k = dk; k <= kmax + 0.5 * dk; k += dk) {
        const double kk = std::min(k, kmax);
        const double g = psi_at(q, h, qmin + kk * kk, n_nodes);
        if (g * g_prev < 0.0) {
            double lo = k_prev, hi = kk;
            double glo = g_prev;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double gm = psi_at(q, h, qmin + mid * mid, n_nodes);
                if (gm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (gm * glo < 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    glo = gm;
                }
                if (hi - lo < 1e-13 * std::max(1.0, hi)) break;
            }
            const double kr = 0.5 * (lo + hi);
            const double lambda = qmin + kr * kr;
            if (lambda <= Lambda_max) mu.nodes.push_back(lambda);
        }
        k_prev = kk;
        g_prev = g;
        if (kk >= kmax) break;
    }
    if (mu.nodes.empty()) throw NoEigenvalues("no Dirichlet eigenvalue below Lambda_max");

    mu.weights.resize(mu.nodes.size());
    for (std::size_t n = 0; n < mu.nodes.size(); ++n) {
        const std::vector<double> psi = psi_profile(q, h, mu.nodes[n], n_nodes);
        mu.weights[n] = 1.0 / trapezoid_product(psi, psi, h);
    }
    mu.validate();
    return mu;
}

std::vector<double> grid_boundary_trace(const std::vector<double>& q, double h, const Control& f,
                                        double T) {
    if (q.size() < 2 || h <= 0.0) throw GridMismatch("potential samples do not form a grid");
    if (std::abs(f.h - h) > 1e-12 * std::max(1.0, h))
        throw GridMismatch("control time step differs from the space step (CFL = 1 required)");
    const double m = T / h;
    const auto M = std::size_t(std::lround(m));
    if (std::abs(m - double(M)) > 1e-9 * std::max(1.0, m))
        throw GridMismatch("T is not a multiple of the grid step");
    const std::size_t N = q.size() - 1;
    if (T > double(N) * h + 1e-12) throw GridMismatch("T exceeds the spatial extent");

    const double h2 = h * h;
    std::vector<double> um(N + 1, 0.0), u0(N + 1, 0.0), up(N + 1, 0.0);
    u0[0] = f.at(1);
    for (std::size_t j = 1; j < M; ++j) {
        for (std::size_t i = 1; i < N; ++i)
            up[i] = u0[i + 1] + u0[i - 1] - um[i] - h2 * q[i] * u0[i];
        up[N] = 0.0; // beyond the light cone for T <= N h
        up[0] = f.at(j + 1);
        std::swap(um, u0);
        std::swap(u0, up);
    }
    return u0;
}

std::vector<double> grid_decaying_gauge(const std::vector<double>& q, double h) {
    if (q.size() < 2 || h <= 0.0) throw GridMismatch("potential samples do not form a grid");
    const std::size_t M = q.size();
    const double q_end = std::max(q.back(), 1e-12);
    // integrate backward from the far end with the decaying asymptotics
    // phi' = -sqrt(q) phi; the growing mode is damped in this direction
    std::vector<double> phi(M);
    phi[M - 1] = 1.0;
    double dphi = -std::sqrt(q_end);
    for (std::size_t i = M - 1; i > 0; --i) {
        // RK4 in the backward direction (step -h)
        const double x = double(i) * h;
        auto qa = [&](double xx) { return grid_interp_cubic(q, h, xx); };
        const double y = phi[i], v = dphi;
        const double k1y = -v, k1v = -qa(x) * y;
        const double k2y = -(v + 0.5 * h * k1v), k2v = -qa(x - 0.5 * h) * (y + 0.5 * h * k1y);
        const double k3y = -(v + 0.5 * h * k2v), k3v = -qa(x - 0.5 * h) * (y + 0.5 * h * k2y);
        const double k4y = -(v + h * k3v), k4v = -qa(x - h) * (y + h * k3y);
        phi[i - 1] = y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        dphi = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    const double phi0 = phi[0];
    if (phi0 == 0.0) throw GaugeZero("decaying gauge vanishes at the origin");
    for (double& v : phi) v /= phi0;
    return phi;
}

} // namespace bcwave
