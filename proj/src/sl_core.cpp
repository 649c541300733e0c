#include "bcwave/sl_core.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "bcwave/errors.hpp"
#include "bcwave/grid.hpp"

namespace bcwave {

namespace {

// One RK4 step for y'' = a(x) y + b(x); state is (y, y'). `step` may be
// negative for backward integration.
struct State {
    double y;
    double yp;
};

using Coeff = std::function<double(double)>;

State rk4_step(const State& s, double x, double step, const Coeff& a, const Coeff& b) {
    auto f = [&](double xx, const State& st) -> State {
        return {st.yp, a(xx) * st.y + b(xx)};
    };
    const State k1 = f(x, s);
    const State k2 = f(x + 0.5 * step, {s.y + 0.5 * step * k1.y, s.yp + 0.5 * step * k1.yp});
    const State k3 = f(x + 0.5 * step, {s.y + 0.5 * step * k2.y, s.yp + 0.5 * step * k2.yp});
    const State k4 = f(x + step, {s.y + step * k3.y, s.yp + step * k3.yp});
    return {s.y + step / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
            s.yp + step / 6.0 * (k1.yp + 2.0 * k2.yp + 2.0 * k3.yp + k4.yp)};
}

// Forward integration of y'' = a y + b over the full grid; returns samples
// of y and y' at the nodes.
void integrate_forward(const Coeff& a, const Coeff& b, double h, std::size_t n, State s0,
                       std::vector<double>& y, std::vector<double>& yp) {
    y.assign(n, 0.0);
    yp.assign(n, 0.0);
    State s = s0;
    y[0] = s.y;
    yp[0] = s.yp;
    for (std::size_t i = 1; i < n; ++i) {
        s = rk4_step(s, double(i - 1) * h, h, a, b);
        y[i] = s.y;
        yp[i] = s.yp;
    }
}

} // namespace

GaugeSolution solve_phi(const Potential& q) {
    if (!q.certified())
        throw std::invalid_argument("solve_phi needs a positivity-certified potential");
    const double h = q.h();
    const std::size_t n = q.nodes();
    const double X = q.X_max();
    const double kappa = q.kappa_floor();

    const Coeff a = [&q](double x) { return q(x); };
    const Coeff zero = [](double) { return 0.0; };

    // Backward integration of the decaying branch, WKB-consistent seed.
    std::vector<double> phi(n, 0.0), phip(n, 0.0);
    State s{1.0, -std::sqrt(std::max(q(X), kappa))};
    phi[n - 1] = s.y;
    phip[n - 1] = s.yp;
    for (std::size_t i = n - 1; i > 0; --i) {
        s = rk4_step(s, double(i) * h, -h, a, zero);
        phi[i - 1] = s.y;
        phip[i - 1] = s.yp;
        const double mag = std::abs(s.y);
        if (!std::isfinite(mag))
            throw NoDecayingSolution("backward integration blew up; reduce X_max");
        if (mag > 1e250) {
            // renormalize; the decaying branch is defined up to scale
            for (std::size_t j = i - 1; j < n; ++j) {
                phi[j] /= mag;
                phip[j] /= mag;
            }
            s.y /= mag;
            s.yp /= mag;
        }
    }
    const double scale = phi[0];
    if (!(std::abs(scale) > 1e-300))
        throw NoDecayingSolution("phi(0) vanished; q is not positive definite or X_max is bad");
    for (std::size_t i = 0; i < n; ++i) {
        phi[i] /= scale;
        phip[i] /= scale;
    }
    phi[0] = 1.0;

    GaugeSolution g;
    g.phi = std::move(phi);
    g.phi_prime0 = phip[0];
    g.h = h;
    return g;
}

GaugeSolution solve_eta(const Potential& q, GaugeSolution g) {
    const double h = q.h();
    const std::size_t n = q.nodes();
    const double X = q.X_max();
    if (g.phi.size() != n) throw GridMismatch("phi grid does not match potential grid");

    const Coeff a = [&q](double x) { return q(x); };
    const Coeff zero = [](double) { return 0.0; };
    const std::vector<double>& phi = g.phi;
    const Coeff minus_phi = [&phi, h](double x) { return -grid_interp_cubic(phi, h, x); };

    // eta = eta_p + s * z with z the homogeneous solution (z(0)=0, z'(0)=1);
    // s kills the growing component: decay functional D(s) = eta'(X) + k eta(X).
    std::vector<double> ep, epp, z, zp;
    integrate_forward(a, minus_phi, h, n, {0.0, 0.0}, ep, epp);
    integrate_forward(a, zero, h, n, {0.0, 1.0}, z, zp);

    const double k = std::sqrt(std::max(q(X), q.kappa_floor()));
    const double denom = zp[n - 1] + k * z[n - 1];
    if (denom == 0.0) throw DegenerateEta("homogeneous solution does not grow; bad grid");
    const double s = -(epp[n - 1] + k * ep[n - 1]) / denom;

    std::vector<double> eta(n);
    for (std::size_t i = 0; i < n; ++i) eta[i] = ep[i] + s * z[i];
    const double residual = std::abs(epp[n - 1] + s * zp[n - 1] + k * eta[n - 1]);
    const double growth_scale = std::abs(zp[n - 1]) * std::abs(s) + std::abs(epp[n - 1]);
    if (growth_scale > 0.0 && residual > 1e-10 * growth_scale)
        throw DegenerateEta("decay matching residual above tolerance");
    if (std::abs(s) < 1e-12)
        throw DegenerateEta("eta'(0) numerically zero, contradicts eta'(0) != 0");

    g.eta = std::move(eta);
    g.eta_prime0 = s;
    return g;
}

BoundaryData boundary_operators(std::complex<double> y0, std::complex<double> y0prime,
                                const GaugeSolution& g) {
    BoundaryData bd;
    bd.gamma1_coeff = -y0;
    bd.gamma2_coeff = (y0prime - y0 * g.phi_prime0) / g.eta_prime0;
    return bd;
}

PsiSolution solve_psi(const Potential& q, double lambda) {
    const double h = q.h();
    const std::size_t n = q.nodes();
    const Coeff a = [&q, lambda](double x) { return q(x) - lambda; };
    const Coeff zero = [](double) { return 0.0; };
    PsiSolution out;
    integrate_forward(a, zero, h, n, {0.0, 1.0}, out.psi, out.psi_prime);
    return out;
}

} // namespace bcwave
