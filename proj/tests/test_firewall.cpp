// Compile-time enforcement of the inverse-side firewall: everything the
// inverse pipeline needs must be reachable without the potential type. If any
// header in this include set (transitively) pulls in the potential, the
// translation unit fails to build.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bcwave/control.hpp"
#include "bcwave/grid.hpp"
#include "bcwave/intervals.hpp"
#include "bcwave/inverse.hpp"
#include "bcwave/linalg.hpp"
#include "bcwave/sl_grid.hpp"
#include "bcwave/spectral_data.hpp"
#include "bcwave/wave_model.hpp"

#ifdef BCWAVE_POTENTIAL_HPP
#error "inverse-side headers must not depend on the potential type"
#endif

using namespace bcwave;

TEST_CASE("inverse pipeline runs from a hand-written measure alone") {
    // the truncated measure of q = 1 on [0, X] in closed form; no potential
    // object or solver output anywhere in this translation unit
    const double c = 1.0, X = 20.0, Lmax = 400.0;
    SpectralMeasure mu;
    for (std::size_t n = 1;; ++n) {
        const double lam = c + std::pow(double(n) * M_PI / X, 2);
        if (lam > Lmax) break;
        mu.nodes.push_back(lam);
        mu.weights.push_back(2.0 * (lam - c) / X);
    }
    mu.validate();

    ReconstructionConfig cfg;
    const InversionResult res = recover_potential(mu, cfg);
    REQUIRE(!res.mc.q_rec.empty());
    for (double v : res.mc.q_rec) CHECK(std::isfinite(v));
    double worst = 0.0;
    for (std::size_t i = 0; i < res.mc.tau_grid.size(); ++i) {
        const double tau = res.mc.tau_grid[i];
        if (tau < res.trusted_lo || tau > res.trusted_hi) continue;
        worst = std::max(worst, std::abs(res.mc.q_rec[i] - c));
    }
    CHECK(worst < 0.05 * c);
}
