#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "bcwave/errors.hpp"
#include "bcwave/grid.hpp"
#include "bcwave/potential.hpp"
#include "bcwave/sl_grid.hpp"
#include "bcwave/spectral.hpp"
#include "bcwave/spectral_data.hpp"

using namespace bcwave;

TEST_CASE("truncated measure of a constant potential matches the closed form") {
    const double c = 1.0, X = 10.0, h = 1.0 / 100.0, Lmax = 100.0;
    const Potential q = Potential::constant(c, X, h);
    const SpectralMeasure mu = truncated_measure(q, X, Lmax);
    // lambda_n = c + (n pi / X)^2, rho_n = 2 (lambda_n - c) / X
    std::size_t n_exact = 0;
    while (c + std::pow(double(n_exact + 1) * M_PI / X, 2) <= Lmax) ++n_exact;
    REQUIRE(mu.size() == n_exact);
    for (std::size_t n = 0; n < mu.size(); ++n) {
        const double lam = c + std::pow(double(n + 1) * M_PI / X, 2);
        CHECK(mu.nodes[n] == doctest::Approx(lam).epsilon(1e-5));
        CHECK(mu.weights[n] == doctest::Approx(2.0 * (lam - c) / X).epsilon(1e-4));
    }
}

TEST_CASE("grid-sample oracle coincides with the Potential-facing wrapper") {
    const double X = 8.0, h = 1.0 / 100.0, Lmax = 60.0;
    const Potential q = Potential::bump(1.0, 0.5, 1.0, 0.08, X, h);
    const SpectralMeasure a = truncated_measure(q, X, Lmax);
    const SpectralMeasure b = grid_truncated_measure(q.samples(), q.h(), X, Lmax);
    REQUIRE(a.size() == b.size());
    for (std::size_t n = 0; n < a.size(); ++n) {
        CHECK(a.nodes[n] == doctest::Approx(b.nodes[n]));
        CHECK(a.weights[n] == doctest::Approx(b.weights[n]));
    }
}

TEST_CASE("measure CSV round trip is lossless") {
    const Potential q = Potential::constant(1.0, 6.0, 1.0 / 100.0);
    const SpectralMeasure mu = truncated_measure(q, 6.0, 50.0);
    const auto path = (std::filesystem::temp_directory_path() / "bcwave-mu.csv").string();
    mu.save_csv(path);
    const SpectralMeasure back = SpectralMeasure::load_csv(path);
    std::remove(path.c_str());
    REQUIRE(back.size() == mu.size());
    for (std::size_t n = 0; n < mu.size(); ++n) {
        CHECK(back.nodes[n] == mu.nodes[n]);   // 17 digits: byte-exact
        CHECK(back.weights[n] == mu.weights[n]);
    }
}

TEST_CASE("sine kernel: trigonometric, linear and hyperbolic branches agree") {
    CHECK(sine_kernel(4.0, 1.0) == doctest::Approx(std::sin(2.0) / 2.0));
    CHECK(sine_kernel(0.0, 0.7) == doctest::Approx(0.7));
    CHECK(sine_kernel(-4.0, 1.0) == doctest::Approx(std::sinh(2.0) / 2.0));
    // continuity across the series/closed-form switch
    for (double t : {0.01, 0.1, 1.0})
        for (double lam = -2.0; lam <= 2.0; lam += 0.01)
            CHECK(sine_kernel(lam, t) ==
                  doctest::Approx(sine_kernel(lam + 1e-9, t)).epsilon(1e-6));
}

TEST_CASE("wave image agrees with the physical transform route") {
    const double c = 1.0, X = 12.0, h = 1.0 / 100.0, Lmax = 80.0, T = 3.0;
    const Potential q = Potential::constant(c, X, h);
    const SpectralMeasure mu = truncated_measure(q, X, Lmax);
    Control f;
    f.h = h;
    const auto M = std::size_t(std::lround(T / h));
    f.samples.assign(M + 1, 0.0);
    for (std::size_t j = 0; j <= M; ++j) {
        const double z = double(j) * h / T;
        f.samples[j] = z * z * (1.0 - z) * std::sin(7.0 * z);
    }
    const std::vector<double> uT =
        grid_boundary_trace(q.samples(), h, f, T); // physical wave at time T
    const SpectralImage phys = phi_transform(uT, q, mu);
    const SpectralImage free = wave_image(f, T, mu);
    double d2 = 0.0, n2 = 0.0;
    for (std::size_t n = 0; n < mu.size(); ++n) {
        const double d = free.values[n] - phys.values[n];
        d2 += d * d * mu.weights[n];
        n2 += phys.values[n] * phys.values[n] * mu.weights[n];
    }
    CHECK(std::sqrt(d2 / n2) < 0.01);
}

TEST_CASE("wave_image_second is the image of the second time derivative") {
    const double T = 2.0, h = 1.0 / 100.0;
    SpectralMeasure mu;
    mu.nodes = {1.5, 4.0, 9.5};
    mu.weights = {0.3, 0.5, 0.7};
    Control f;
    f.h = h;
    const auto M = std::size_t(std::lround(T / h));
    f.samples.assign(M + 1, 0.0);
    for (std::size_t j = 0; j <= M; ++j) {
        const double z = double(j) * h / T;
        f.samples[j] = z * z * std::sin(3.0 * z);
    }
    Control fdd; // 3-point central second difference, zero at the endpoints
    fdd.h = h;
    fdd.samples.assign(M + 1, 0.0);
    for (std::size_t j = 1; j < M; ++j)
        fdd.samples[j] = (f.samples[j + 1] - 2.0 * f.samples[j] + f.samples[j - 1]) / (h * h);
    const SpectralImage a = wave_image_second(f, T, mu);
    const SpectralImage b = wave_image(fdd, T, mu);
    for (std::size_t n = 0; n < mu.size(); ++n)
        CHECK(a.values[n] == doctest::Approx(-b.values[n]).epsilon(1e-9));
}

TEST_CASE("gram matrices are symmetric positive semidefinite") {
    std::mt19937 rng(3);
    std::normal_distribution<double> g01;
    SpectralMeasure mu;
    for (int n = 0; n < 12; ++n) {
        mu.nodes.push_back(1.0 + 0.9 * double(n));
        mu.weights.push_back(0.1 + 0.05 * double(n));
    }
    std::vector<SpectralImage> imgs(5);
    for (auto& im : imgs) {
        im.values.resize(mu.size());
        for (auto& v : im.values) v = g01(rng);
    }
    const std::vector<double> G = gram(imgs, mu);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(G[i * 5 + j] == doctest::Approx(G[j * 5 + i]));
    // quadratic form equals the sigma-norm of the combination
    std::vector<double> cvec = {0.3, -1.0, 0.7, 0.2, -0.4};
    SpectralImage comb;
    comb.values.assign(mu.size(), 0.0);
    for (std::size_t k = 0; k < 5; ++k)
        for (std::size_t n = 0; n < mu.size(); ++n)
            comb.values[n] += cvec[k] * imgs[k].values[n];
    double quad = 0.0;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) quad += cvec[i] * cvec[j] * G[i * 5 + j];
    CHECK(quad == doctest::Approx(measure_inner(comb, comb, mu)));
    CHECK(quad >= 0.0);
}

TEST_CASE("Plancherel for the truncated transform on interior data") {
    const double c = 1.0, X = 14.0, h = 1.0 / 100.0, Lmax = 200.0;
    const Potential q = Potential::constant(c, X, h);
    const SpectralMeasure mu = truncated_measure(q, X, Lmax);
    std::vector<double> y(q.nodes(), 0.0);
    for (std::size_t i = 0; i < q.nodes(); ++i) {
        const double z = (double(i) * h - 2.0) / 5.0;
        y[i] = (z > 0.0 && z < 1.0) ? std::exp(-1.0 / (z * (1.0 - z))) : 0.0;
    }
    const SpectralImage img = phi_transform(y, q, mu);
    const double n2 = measure_inner(img, img, mu);
    const double yn = l2_norm(y, h);
    CHECK(n2 / (yn * yn) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("measure validation rejects malformed data") {
    SpectralMeasure mu;
    mu.nodes = {2.0, 1.0};
    mu.weights = {0.1, 0.1};
    CHECK_THROWS_AS(mu.validate(), std::invalid_argument); // nodes must increase
    mu.nodes = {1.0, 2.0};
    mu.weights = {0.1, -0.1};
    CHECK_THROWS_AS(mu.validate(), std::invalid_argument); // weights must be positive
    mu.weights = {0.1};
    CHECK_THROWS_AS(mu.validate(), std::invalid_argument); // length mismatch
}

TEST_CASE("no eigenvalue below the cutoff raises the typed error") {
    const Potential q = Potential::constant(5.0, 4.0, 1.0 / 100.0);
    CHECK_THROWS_AS(truncated_measure(q, 4.0, 5.1), NoEigenvalues);
}
