#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bcwave/errors.hpp"
#include "bcwave/grid.hpp"
#include "bcwave/potential.hpp"
#include "bcwave/sl_core.hpp"

using namespace bcwave;

TEST_CASE("potential factories and interpolation") {
    const Potential q = Potential::bump(1.0, 0.5, 1.0, 0.08, 4.0, 1.0 / 100.0);
    CHECK(q.nodes() == 401);
    CHECK(q(1.0) == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(q(3.9) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(q.min_value() > 0.0);
    CHECK(q.certified());

    const Potential named = Potential::named("bump:1,0.5,1,0.08", 4.0, 1.0 / 100.0);
    CHECK(named(1.3) == doctest::Approx(q(1.3)));
}

TEST_CASE("gauge solution matches exp(-sqrt(c) x) for constant q") {
    for (double c : {1.0, 4.0}) {
        const double h = 1.0 / 200.0, X = 8.0;
        const Potential q = Potential::constant(c, X, h);
        const GaugeSolution g = solve_phi(q);
        CHECK(g.phi[0] == doctest::Approx(1.0));
        CHECK(g.phi_prime0 == doctest::Approx(-std::sqrt(c)).epsilon(1e-6));
        double worst = 0.0;
        for (std::size_t i = 0; i < q.nodes(); ++i) {
            const double x = double(i) * h;
            if (x > 0.8 * X) break; // buffer zone near the seeding end
            worst = std::max(worst, std::abs(g.phi[i] - std::exp(-std::sqrt(c) * x)));
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("eta solves L eta = phi with eta(0) = 0") {
    const double c = 1.0, h = 1.0 / 200.0, X = 8.0;
    const Potential q = Potential::constant(c, X, h);
    const GaugeSolution g = solve_eta(q, solve_phi(q));
    CHECK(g.eta[0] == doctest::Approx(0.0));
    CHECK(g.eta_prime0 != 0.0);
    // exact eta for q = 1: -eta'' + eta = e^{-x}, eta(0) = 0, decaying
    // => eta = (x/2) e^{-x}
    double worst = 0.0;
    for (std::size_t i = 0; i < q.nodes(); ++i) {
        const double x = double(i) * h;
        if (x > 0.8 * X) break;
        worst = std::max(worst, std::abs(g.eta[i] - 0.5 * x * std::exp(-x)));
    }
    CHECK(worst < 1e-4);
    CHECK(g.eta_prime0 == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("boundary operators read off the Cauchy data") {
    const double h = 1.0 / 200.0;
    const Potential q = Potential::constant(1.0, 8.0, h);
    const GaugeSolution g = solve_eta(q, solve_phi(q));
    const std::complex<double> y0(2.0, -1.0), y0p(0.5, 3.0);
    const BoundaryData bd = boundary_operators(y0, y0p, g);
    CHECK(std::abs(bd.gamma1_coeff - (-y0)) < 1e-12);
    const std::complex<double> expect = (y0p - y0 * g.phi_prime0) / g.eta_prime0;
    CHECK(std::abs(bd.gamma2_coeff - expect) < 1e-12);
}

TEST_CASE("psi solver matches the constant-q sine solution") {
    const double c = 1.0, h = 1.0 / 200.0, X = 6.0, lambda = 5.0;
    const Potential q = Potential::constant(c, X, h);
    const PsiSolution sol = solve_psi(q, lambda);
    const double k = std::sqrt(lambda - c);
    double worst = 0.0, worstp = 0.0;
    for (std::size_t i = 0; i < q.nodes(); ++i) {
        const double x = double(i) * h;
        worst = std::max(worst, std::abs(sol.psi[i] - std::sin(k * x) / k));
        worstp = std::max(worstp, std::abs(sol.psi_prime[i] - std::cos(k * x)));
    }
    CHECK(worst < 1e-8);
    CHECK(worstp < 1e-8);
}

TEST_CASE("psi solver handles lambda below the potential (hyperbolic branch)") {
    const double c = 4.0, h = 1.0 / 200.0, X = 3.0, lambda = 3.0;
    const Potential q = Potential::constant(c, X, h);
    const PsiSolution sol = solve_psi(q, lambda);
    const double k = std::sqrt(c - lambda);
    double worst = 0.0;
    for (std::size_t i = 0; i < q.nodes(); ++i) {
        const double x = double(i) * h;
        worst = std::max(worst, std::abs(sol.psi[i] - std::sinh(k * x) / k));
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("kappa certificate gates non-positive potentials") {
    std::vector<double> s(101, -0.5);
    Potential q(std::move(s), 1.0 / 100.0);
    CHECK(!q.certified());
    q.set_kappa(0.25);
    CHECK(q.certified());
    CHECK(q.kappa_floor() == doctest::Approx(0.25));
}
