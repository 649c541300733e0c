#include "bcwave/grid.hpp"

#include <algorithm>

namespace bcwave {

double grid_interp_linear(const std::vector<double>& f, double h, double x) {
    if (f.empty()) return 0.0;
    const double u = x / h;
    if (u <= 0.0) return f.front();
    if (u >= double(f.size() - 1)) return f.back();
    const std::size_t i = std::size_t(u);
    const double t = u - double(i);
    return (1.0 - t) * f[i] + t * f[i + 1];
}

double grid_interp_cubic(const std::vector<double>& f, double h, double x) {
    const std::ptrdiff_t n = std::ptrdiff_t(f.size());
    if (n == 0) return 0.0;
    if (n < 4) return grid_interp_linear(f, h, x);
    const double u = x / h;
    if (u <= 0.0) return f.front();
    if (u >= double(n - 1)) return f.back();
    std::ptrdiff_t i = std::ptrdiff_t(u);
    i = std::clamp<std::ptrdiff_t>(i - 1, 0, n - 4);
    const double t = u - double(i); // in [0,3] relative to the stencil start
    // Lagrange basis on nodes 0,1,2,3
    const double l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    const double l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    const double l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    const double l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    return l0 * f[i] + l1 * f[i + 1] + l2 * f[i + 2] + l3 * f[i + 3];
}

double trapezoid_window(const std::vector<double>& f, double h, double lo, double hi) {
    if (f.size() < 2) return 0.0;
    const double xmax = h * double(f.size() - 1);
    lo = std::clamp(lo, 0.0, xmax);
    hi = std::clamp(hi, 0.0, xmax);
    if (hi <= lo) return 0.0;
    const std::size_t i0 = std::size_t(std::ceil(lo / h - 1e-12));
    const std::size_t i1 = std::size_t(std::floor(hi / h + 1e-12));
    double s = 0.0;
    if (i0 > i1 || i0 >= f.size()) {
        // window inside a single cell
        const double fl = grid_interp_linear(f, h, lo);
        const double fh = grid_interp_linear(f, h, hi);
        return 0.5 * (fl + fh) * (hi - lo);
    }
    for (std::size_t i = i0; i + 1 <= i1; ++i) s += 0.5 * (f[i] + f[i + 1]) * h;
    const double xl = double(i0) * h;
    if (xl > lo) s += 0.5 * (grid_interp_linear(f, h, lo) + f[i0]) * (xl - lo);
    const double xr = double(i1) * h;
    if (hi > xr) s += 0.5 * (f[i1] + grid_interp_linear(f, h, hi)) * (hi - xr);
    return s;
}

std::vector<double> derivative1(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n, 0.0);
    if (n < 5) {
        for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        return d;
    }
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[1] = (f[2] - f[0]) / (2.0 * h);
    d[n - 2] = (f[n - 1] - f[n - 3]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return d;
}

std::vector<double> derivative2(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n, 0.0);
    const double h2 = h * h;
    if (n < 5) {
        for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
        return d;
    }
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (-f[i + 2] + 16.0 * f[i + 1] - 30.0 * f[i] + 16.0 * f[i - 1] - f[i - 2]) /
               (12.0 * h2);
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    d[1] = (f[2] - 2.0 * f[1] + f[0]) / h2;
    d[n - 2] = (f[n - 1] - 2.0 * f[n - 2] + f[n - 3]) / h2;
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    return d;
}

std::vector<double> cumtrapz(const std::vector<double>& f, double h) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i)
        out[i] = out[i - 1] + 0.5 * (f[i - 1] + f[i]) * h;
    return out;
}

} // namespace bcwave
