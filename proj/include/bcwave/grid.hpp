#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace bcwave {

/// Composite trapezoid over uniformly sampled values.
inline double trapezoid(const std::vector<double>& f, double h) {
    if (f.size() < 2) return 0.0;
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * h;
}

/// Trapezoid of f*g on the shared grid.
inline double trapezoid_product(const std::vector<double>& f, const std::vector<double>& g,
                                double h) {
    const std::size_t n = std::min(f.size(), g.size());
    if (n < 2) return 0.0;
    double s = 0.5 * (f[0] * g[0] + f[n - 1] * g[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) s += f[i] * g[i];
    return s * h;
}

/// Trapezoid of grid samples over the sub-window [lo,hi], with linear
/// interpolation of the integrand at the fractional end cells.
double trapezoid_window(const std::vector<double>& f, double h, double lo, double hi);

inline double l2_norm(const std::vector<double>& f, double h) {
    double s = 0.0;
    if (!f.empty()) s = 0.5 * (f.front() * f.front() + f.back() * f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i] * f[i];
    return std::sqrt(s * h);
}

/// Linear interpolation of a uniform grid sample at x = t/h in index units.
double grid_interp_linear(const std::vector<double>& f, double h, double x);

/// 4-point Lagrange (cubic) interpolation on a uniform grid, clamped stencils
/// at the ends.
double grid_interp_cubic(const std::vector<double>& f, double h, double x);

/// Central finite differences on a uniform grid. Interior nodes use the
/// 4th-order 5-point stencils; the outermost two nodes fall back to one-sided
/// 2nd-order formulas (callers mask a margin anyway).
std::vector<double> derivative1(const std::vector<double>& f, double h);
std::vector<double> derivative2(const std::vector<double>& f, double h);

/// Cumulative trapezoid: out[i] = integral of f over [0, i*h], out[0] = 0.
std::vector<double> cumtrapz(const std::vector<double>& f, double h);

} // namespace bcwave
