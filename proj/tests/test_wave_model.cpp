#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bcwave/errors.hpp"
#include "bcwave/grid.hpp"
#include "bcwave/wave_model.hpp"

using namespace bcwave;

TEST_CASE("atom metric and ball measure are exact") {
    CHECK(atom_metric({1.5}, {4.0}) == 2.5);
    CHECK(atom_metric({3.0}, {3.0}) == 0.0);
    CHECK(ball_measure({2.0}, 1.0) == 2.0);       // interior ball: 2r
    CHECK(ball_measure({0.5}, 2.0) == 2.5);       // clipped at the origin: r + x
    CHECK(ball_measure({0.0}, 3.0) == 3.0);       // boundary atom
}

TEST_CASE("eikonal multiplies by the distance to the atom") {
    const double h = 0.01;
    std::vector<double> y(301, 1.0);
    const std::vector<double> out = eikonal_apply({1.0}, y, h);
    for (std::size_t i = 0; i < y.size(); ++i)
        CHECK(out[i] == doctest::Approx(std::abs(double(i) * h - 1.0)));
}

TEST_CASE("Riemann realization of the eikonal converges at rate O(1/rank)") {
    const double h = 1.0 / 200.0, t_max = 3.0;
    std::vector<double> y(std::size_t(std::lround(2.5 / h)) + 1);
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double z = double(i) * h / 2.5;
        y[i] = std::sin(3.0 * z) * z * (1.0 - z);
    }
    const Atom om{0.8};
    const std::vector<double> exact = eikonal_apply(om, y, h);
    double prev = 0.0;
    for (std::size_t rank : {40u, 80u, 160u}) {
        const std::vector<double> approx = eikonal_riemann(om, y, h, t_max, rank);
        double err = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i)
            err = std::max(err, std::abs(approx[i] - exact[i]));
        CHECK(err <= t_max / double(rank) + 1e-12);
        if (prev > 0.0) CHECK(prev / err > 1.5);
        prev = err;
    }
}

TEST_CASE("value on the atom reproduces u/e for smooth data") {
    const double h = 1.0 / 400.0;
    std::vector<double> u(1201), e(1201);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double x = double(i) * h;
        u[i] = std::sin(2.0 * x) + 0.3 * x;
        e[i] = std::exp(-0.5 * x);
    }
    for (double x0 : {0.4, 1.0, 2.0}) {
        // two-point Richardson leaves an O(window^2) curvature residual
        const double v = value_on_atom(u, e, h, {x0}, {0.1, 0.05});
        CHECK(v == doctest::Approx(u[std::size_t(std::lround(x0 / h))] /
                                   e[std::size_t(std::lround(x0 / h))])
                       .epsilon(1e-2));
    }
}

TEST_CASE("value on the atom refuses a vanishing gauge") {
    const double h = 0.01;
    std::vector<double> u(201, 1.0), e(201, 0.0);
    e[0] = 1.0; // e collapses away from the origin
    CHECK_THROWS_AS(value_on_atom(u, e, h, {1.0}, {0.1, 0.05}), GaugeZero);
}

TEST_CASE("y_map divides by the gauge and returns |e|^2") {
    std::vector<double> y = {1.0, 2.0, 3.0};
    std::vector<double> e = {1.0, 0.5, 2.0};
    const auto [yy, dens] = y_map(y, e);
    CHECK(yy[1] == doctest::Approx(4.0));
    CHECK(dens[2] == doctest::Approx(4.0));
    std::vector<double> e0 = {1.0, 0.0, 2.0};
    CHECK_THROWS_AS(y_map(y, e0), GaugeZero);
}

namespace {

/// Manufactured coordinate model for q = c: y_a = sin(a tau) e^{sqrt(c) tau},
/// g_a = (-u'' + c u) e^{sqrt(c) tau} with u = sin(a tau) e^{... the
/// physical solution}. Model coefficients must come out p = 2 sqrt(c), Q = 0.
std::pair<std::vector<double>, std::vector<double>> graph_pair(double a, double c,
                                                               const std::vector<double>& tau) {
    const double sc = std::sqrt(c);
    std::vector<double> y(tau.size()), g(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) {
        const double x = tau[i];
        const double ex = std::exp(-sc * x), conj = std::exp(sc * x);
        const double u = std::sin(a * x) * ex;
        const double upp =
            ex * ((sc * sc - a * a) * std::sin(a * x) - 2.0 * a * sc * std::cos(a * x));
        y[i] = u * conj;
        g[i] = (-upp + c * u) * conj;
    }
    return {std::move(y), std::move(g)};
}

} // namespace

TEST_CASE("model coefficients from graph pairs recover (p, Q) = (2 sqrt(c), 0)") {
    const double c = 2.0, h = 1.0 / 100.0;
    std::vector<double> tau(251);
    for (std::size_t i = 0; i < tau.size(); ++i) tau[i] = double(i) * h;
    std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
    for (double a : {1.0, 2.0, 3.0}) pairs.push_back(graph_pair(a, c, tau));
    ModelCoefficients mc = model_coefficients(pairs, tau);
    recover_q_from_pQ(mc);
    const double sc = std::sqrt(c);
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (mc.mask[i] || tau[i] < 0.1 || tau[i] > 2.3) continue;
        CHECK(mc.p[i] == doctest::Approx(2.0 * sc).epsilon(1e-4));
        CHECK(std::abs(mc.Q[i]) < 1e-4);
        CHECK(mc.q_rec[i] == doctest::Approx(c).epsilon(1e-3));
        CHECK(mc.e[i] == doctest::Approx(std::exp(-sc * tau[i])).epsilon(1e-3));
    }
}

TEST_CASE("jet-based extraction agrees and leaves no margin mask") {
    const double c = 1.0, h = 1.0 / 100.0;
    std::vector<double> tau(201);
    for (std::size_t i = 0; i < tau.size(); ++i) tau[i] = double(i) * h;
    std::vector<GraphJet> jets;
    for (double a : {1.0, 2.5, 4.0}) {
        auto [y, g] = graph_pair(a, c, tau);
        GraphJet j;
        j.yp = derivative1(y, h);
        j.ypp = derivative2(y, h);
        j.y = std::move(y);
        j.g = std::move(g);
        jets.push_back(std::move(j));
    }
    ModelCoefficients mc = model_coefficients(jets, tau);
    recover_q_from_pQ(mc);
    // difference-stencil jets are 4th order in the interior, 2nd order in the
    // two-node margins; the coefficients inherit that accuracy
    for (std::size_t i = 4; i + 4 < tau.size(); ++i) {
        CHECK(mc.mask[i] == 0);
        CHECK(mc.p[i] == doctest::Approx(2.0).epsilon(5e-3));
        CHECK(std::abs(mc.Q[i]) < 5e-3);
    }
}

TEST_CASE("degenerate graph pairs are masked, not extrapolated blindly") {
    const double h = 1.0 / 100.0;
    std::vector<double> tau(101);
    for (std::size_t i = 0; i < tau.size(); ++i) tau[i] = double(i) * h;
    // two proportional samples cannot determine (p, Q): everything masks
    std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
    std::vector<double> y(tau.size()), g(tau.size(), 0.0);
    for (std::size_t i = 0; i < tau.size(); ++i) y[i] = 1.0;
    pairs.emplace_back(y, g);
    pairs.emplace_back(y, g);
    CHECK_THROWS_AS(model_coefficients(pairs, tau, 1e6), IllConditioned);
}

TEST_CASE("coordinate boundary operators") {
    const auto [g1, g2] = green_ops_coord({2.0, 1.0}, {3.0, -1.0}, 0.5);
    CHECK(std::abs(g1 - std::complex<double>(-2.0, -1.0)) < 1e-15);
    CHECK(std::abs(g2 - std::complex<double>(6.0, -2.0)) < 1e-15);
}
