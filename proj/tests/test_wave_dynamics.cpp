#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bcwave/grid.hpp"
#include "bcwave/potential.hpp"
#include "bcwave/wave_dynamics.hpp"

using namespace bcwave;

namespace {

double unit_bump(double z) {
    if (z <= 0.0 || z >= 1.0) return 0.0;
    return std::exp(4.0 - 1.0 / (z * (1.0 - z)));
}

Control bump_control(double T, double h, double c, double w) {
    Control f;
    f.h = h;
    const auto M = std::size_t(std::lround(T / h));
    f.samples.assign(M + 1, 0.0);
    for (std::size_t j = 0; j <= M; ++j) f.samples[j] = unit_bump((double(j) * h - c) / w);
    return f;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace

TEST_CASE("finite-difference wave respects finite speed of propagation") {
    const double h = 1.0 / 200.0, T = 1.0;
    const Potential q = Potential::constant(1.0, 2.0, h);
    const Control f = bump_control(T, h, 0.3, 0.4);
    const WaveField u = forward_fd(q, f, T);
    // u(x, T) must vanish for x > T (zero initial data, boundary control)
    for (std::size_t i = 0; i < u.space_nodes(); ++i)
        if (double(i) * h > T + 2.0 * h) CHECK(u.final_slice()[i] == doctest::Approx(0.0));
    CHECK(u.final_slice()[0] == doctest::Approx(f.samples.back()));
}

TEST_CASE("goursat kernel diagonal carries -(1/2) int q") {
    const double h = 1.0 / 100.0, T = 2.0;
    const Potential q = Potential::bump(1.0, 0.5, 0.7, 0.1, T, h);
    const GoursatKernel w = goursat_kernel(q, T);
    // the kernel samples q on the half-step characteristic grid
    std::vector<double> qh(2 * (w.levels() - 1) + 1);
    for (std::size_t l = 0; l < qh.size(); ++l) qh[l] = q(double(l) * h / 2.0);
    const std::vector<double> I = cumtrapz(qh, h / 2.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < w.levels(); ++i)
        worst = std::max(worst, std::abs(w.at(i, i) + 0.5 * I[2 * i]));
    CHECK(worst < 1e-10);
    // w(0, s) = 0 on the boundary characteristic
    for (std::size_t j = 1; j < w.levels(); ++j) CHECK(w.at(0, j) == doctest::Approx(0.0));
}

TEST_CASE("kernel representation agrees with the finite-difference solver") {
    const double h = 1.0 / 200.0, T = 2.0;
    const Potential q = Potential::bump(1.0, 0.5, 0.8, 0.15, T, h);
    const GoursatKernel w = goursat_kernel(q, T);
    const Control f = bump_control(T, h, 0.4, 0.5);
    const WaveField fd = forward_fd(q, f, T);
    const WaveField ker = forward_kernel(w, f, T);
    CHECK(sup_diff(ker.final_slice(), fd.final_slice()) < 2e-4);
    CHECK(sup_diff(forward_kernel_slice(w, f, T), ker.final_slice()) == doctest::Approx(0.0));
}

TEST_CASE("free space: kernel representation reduces to d'Alembert shift") {
    const double h = 1.0 / 200.0, T = 1.5;
    std::vector<double> zeros(std::size_t(std::lround(T / h)) + 1, 0.0);
    Potential q(zeros, h);
    q.set_kappa(1e-6);
    const GoursatKernel w = goursat_kernel(q, T);
    const Control f = bump_control(T, h, 0.3, 0.4);
    const WaveField u = forward_kernel(w, f, T);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.space_nodes(); ++i) {
        const double x = double(i) * h;
        const double exact = x <= T ? grid_interp_linear(f.samples, h, T - x) : 0.0;
        worst = std::max(worst, std::abs(u.final_slice()[i] - exact));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("solve_control steers the wave to a prescribed final slice") {
    const double h = 1.0 / 200.0, T = 2.0;
    const Potential q = Potential::bump(1.0, 0.4, 0.9, 0.2, T, h);
    const GoursatKernel w = goursat_kernel(q, T);
    const auto N = std::size_t(std::lround(T / h));
    std::vector<double> y(N + 1, 0.0);
    for (std::size_t i = 0; i <= N; ++i) y[i] = unit_bump((double(i) * h - 0.5) / 0.8);
    const Control f = solve_control(w, y, T);
    const WaveField u = forward_fd(q, f, T);
    CHECK(sup_diff(u.final_slice(), y) < 5e-4);
    CHECK(f.samples[0] == doctest::Approx(0.0));
}

TEST_CASE("control-to-state round trip is the identity on controls") {
    const double h = 1.0 / 200.0, T = 1.5;
    const Potential q = Potential::constant(2.0, T, h);
    const GoursatKernel w = goursat_kernel(q, T);
    const Control f = bump_control(T, h, 0.3, 0.6);
    const std::vector<double> y = forward_kernel_slice(w, f, T);
    const Control f2 = solve_control(w, y, T);
    CHECK(sup_diff(f.samples, f2.samples) < 1e-10);
}

TEST_CASE("duality: (g, W y) = -(v_g(T), y)") {
    const double h = 1.0 / 100.0, T = 1.5, X = 2.5;
    const Potential q = Potential::bump(1.0, 0.5, 1.0, 0.2, X, h);
    const auto M = std::size_t(std::lround(T / h));
    const auto N = std::size_t(std::lround(X / h));
    std::vector<std::vector<double>> g(M + 1, std::vector<double>(N + 1, 0.0));
    std::vector<double> y(N + 1, 0.0);
    for (std::size_t j = 0; j <= M; ++j)
        for (std::size_t i = 0; i <= N; ++i)
            g[j][i] = unit_bump((double(i) * h - 0.8) / 0.6) * unit_bump(double(j) * h / T);
    for (std::size_t i = 0; i <= N; ++i) y[i] = unit_bump((double(i) * h - 1.2) / 0.7);

    const WaveField wy = dual_backward(q, y, T);
    const WaveField vg = dual_forward(q, g, T);
    std::vector<double> rows(M + 1);
    for (std::size_t j = 0; j <= M; ++j) rows[j] = trapezoid_product(g[j], wy.values[j], h);
    const double lhs = trapezoid(rows, h);
    const double rhs = -trapezoid_product(vg.final_slice(), y, h);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("backward dual field satisfies its final conditions") {
    const double h = 1.0 / 100.0, T = 1.0, X = 2.0;
    const Potential q = Potential::constant(1.0, X, h);
    const auto N = std::size_t(std::lround(X / h));
    std::vector<double> y(N + 1, 0.0);
    for (std::size_t i = 0; i <= N; ++i) y[i] = unit_bump((double(i) * h - 0.5) / 0.8);
    const WaveField w = dual_backward(q, y, T);
    // w(T) = 0; discrete velocity at T approximates y
    for (double v : w.final_slice()) CHECK(std::abs(v) < 1e-12);
    const auto M = w.time_levels() - 1;
    double worst = 0.0;
    for (std::size_t i = 1; i < N; ++i) {
        const double vel = (w.values[M][i] - w.values[M - 1][i]) / h;
        worst = std::max(worst, std::abs(vel - y[i]));
    }
    CHECK(worst < 0.05);
}
