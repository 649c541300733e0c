#include "bcwave/wave_model.hpp"

#include <algorithm>
#include <cmath>

#include "bcwave/errors.hpp"
#include "bcwave/grid.hpp"
#include "bcwave/linalg.hpp"

namespace bcwave {

std::vector<double> eikonal_apply(const Atom& omega, const std::vector<double>& y, double h) {
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        out[i] = std::abs(double(i) * h - omega.x) * y[i];
    return out;
}

std::vector<double> eikonal_riemann(const Atom& omega, const std::vector<double>& y, double h,
                                    double t_max, std::size_t rank) {
    if (rank == 0 || t_max <= 0.0) throw GridMismatch("eikonal partition must be non-trivial");
    const double dt = t_max / double(rank);
    std::vector<double> out(y.size(), 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = std::abs(double(i) * h - omega.x);
        if (d >= t_max) continue; // outside the largest window: no contribution
        // the node enters the (open) neighborhood at the first partition
        // point exceeding its distance
        const double t = dt * std::floor(d / dt + 1.0);
        out[i] = t * y[i];
    }
    return out;
}

double atom_metric(const Atom& a, const Atom& b) { return std::abs(a.x - b.x); }

double ball_measure(const Atom& omega, double r) {
    if (r <= 0.0) throw GridMismatch("ball radius must be positive");
    return r + std::min(r, omega.x);
}

double value_on_atom(const std::vector<double>& u, const std::vector<double>& e, double h,
                     const Atom& omega, const std::vector<double>& windows) {
    if (u.size() != e.size()) throw GridMismatch("wave and gauge grids differ");
    if (windows.empty()) throw GridMismatch("at least one window is required");

    double emax = 0.0;
    for (double v : e) emax = std::max(emax, std::abs(v));
    if (std::abs(grid_interp_cubic(e, h, omega.x)) < 1e-8 * emax)
        throw GaugeZero("gauge amplitude vanishes at the atom");

    std::vector<double> ue(u.size()), ee(e.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        ue[i] = u[i] * e[i];
        ee[i] = e[i] * e[i];
    }
    auto ratio = [&](double t) {
        const double lo = std::max(0.0, omega.x - t);
        const double hi = omega.x + t;
        const double den = trapezoid_window(ee, h, lo, hi);
        if (den <= 0.0) throw GaugeZero("window mass of the gauge is not positive");
        return trapezoid_window(ue, h, lo, hi) / den;
    };

    if (windows.size() == 1) return ratio(windows[0]);
    // two-point Richardson on the two smallest windows
    const double t1 = windows[windows.size() - 2];
    const double t2 = windows[windows.size() - 1];
    const double r1 = ratio(t1), r2 = ratio(t2);
    return (t1 * r2 - t2 * r1) / (t1 - t2);
}

std::pair<std::vector<double>, std::vector<double>> y_map(const std::vector<double>& y,
                                                          const std::vector<double>& e) {
    if (y.size() != e.size()) throw GridMismatch("y and gauge grids differ");
    double emax = 0.0;
    for (double v : e) emax = std::max(emax, std::abs(v));
    std::vector<double> img(y.size()), dens(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (std::abs(e[i]) < 1e-8 * emax) throw GaugeZero("gauge amplitude vanishes on the grid");
        img[i] = y[i] / e[i];
        dens[i] = e[i] * e[i];
    }
    return {std::move(img), std::move(dens)};
}

namespace {

ModelCoefficients solve_model(const std::vector<GraphJet>& jets,
                              const std::vector<double>& tau_grid, double cond_tol,
                              std::size_t margin) {
    const std::size_t n = tau_grid.size();
    if (n < 11) throw GridMismatch("tau grid too short for the model solve");
    if (jets.empty()) throw IllConditioned("no graph pairs supplied");
    for (const GraphJet& j : jets)
        if (j.y.size() != n || j.yp.size() != n || j.ypp.size() != n || j.g.size() != n)
            throw GridMismatch("graph jet not sampled on tau_grid");

    ModelCoefficients mc;
    mc.tau_grid = tau_grid;
    mc.p.assign(n, 0.0);
    mc.Q.assign(n, 0.0);
    mc.mask.assign(n, 1);

    const std::size_t m = jets.size();
    std::vector<double> a(m), b(m), r(m);
    for (std::size_t i = margin; i + margin < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            a[k] = jets[k].yp[i];
            b[k] = jets[k].y[i];
            r[k] = jets[k].g[i] + jets[k].ypp[i];
        }
        try {
            const Fit2 fit = lstsq2(a, b, r);
            if (fit.cond > cond_tol) continue;
            mc.p[i] = fit.z0;
            mc.Q[i] = fit.z1;
            mc.mask[i] = 0;
        } catch (const IllConditioned&) {
            // node stays masked, filled by interpolation below
        }
    }

    const auto first = std::find(mc.mask.begin(), mc.mask.end(), 0);
    if (first == mc.mask.end())
        throw IllConditioned("every tau node is rank-deficient; no coefficients recoverable");

    // fill masked nodes: linear interpolation between unmasked neighbors,
    // constant extension at the ends
    std::ptrdiff_t prev = -1;
    for (std::size_t i = 0; i < n; ++i) {
        if (mc.mask[i]) continue;
        const auto cur = std::ptrdiff_t(i);
        if (prev < 0) {
            for (std::ptrdiff_t j = 0; j < cur; ++j) {
                mc.p[std::size_t(j)] = mc.p[i];
                mc.Q[std::size_t(j)] = mc.Q[i];
            }
        } else {
            for (std::ptrdiff_t j = prev + 1; j < cur; ++j) {
                const double w = double(j - prev) / double(cur - prev);
                mc.p[std::size_t(j)] = (1.0 - w) * mc.p[std::size_t(prev)] + w * mc.p[i];
                mc.Q[std::size_t(j)] = (1.0 - w) * mc.Q[std::size_t(prev)] + w * mc.Q[i];
            }
        }
        prev = cur;
    }
    for (std::size_t j = std::size_t(prev) + 1; j < n; ++j) {
        mc.p[j] = mc.p[std::size_t(prev)];
        mc.Q[j] = mc.Q[std::size_t(prev)];
    }
    return mc;
}

} // namespace

ModelCoefficients model_coefficients(
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs,
    const std::vector<double>& tau_grid, double cond_tol) {
    const std::size_t n = tau_grid.size();
    if (n < 11) throw GridMismatch("tau grid too short for the difference stencils");
    if (pairs.empty()) throw IllConditioned("no graph pairs supplied");
    const double h = tau_grid[1] - tau_grid[0];

    std::vector<GraphJet> jets;
    for (const auto& pr : pairs) {
        if (pr.first.size() != n || pr.second.size() != n)
            throw GridMismatch("graph pair not sampled on tau_grid");
        GraphJet j;
        j.y = pr.first;
        j.yp = derivative1(pr.first, h);
        j.ypp = derivative2(pr.first, h);
        j.g = pr.second;
        jets.push_back(std::move(j));
    }
    // one-sided difference artifacts at the ends
    return solve_model(jets, tau_grid, cond_tol, 5);
}

ModelCoefficients model_coefficients(const std::vector<GraphJet>& jets,
                                     const std::vector<double>& tau_grid, double cond_tol) {
    return solve_model(jets, tau_grid, cond_tol, 0);
}

std::vector<double> recover_q_from_pQ(ModelCoefficients& mc) {
    const std::size_t n = mc.tau_grid.size();
    if (n < 2 || mc.p.size() != n || mc.Q.size() != n)
        throw GridMismatch("model coefficients not sampled on tau_grid");
    const double h = mc.tau_grid[1] - mc.tau_grid[0];

    std::vector<double> half_p(n);
    for (std::size_t i = 0; i < n; ++i) half_p[i] = -0.5 * mc.p[i];
    const std::vector<double> I = cumtrapz(half_p, h);
    mc.e.resize(n);
    for (std::size_t i = 0; i < n; ++i) mc.e[i] = std::exp(I[i]);

    const std::vector<double> epp = derivative2(mc.e, h);
    mc.q_rec.resize(n);
    for (std::size_t i = 0; i < n; ++i) mc.q_rec[i] = mc.Q[i] + epp[i] / mc.e[i];
    return mc.q_rec;
}

std::pair<std::complex<double>, std::complex<double>> green_ops_coord(
    std::complex<double> y0, std::complex<double> y0prime, double eta_prime0) {
    if (eta_prime0 == 0.0) throw DegenerateEta("eta'(0) must be nonzero");
    return {-y0, y0prime / eta_prime0};
}

} // namespace bcwave
