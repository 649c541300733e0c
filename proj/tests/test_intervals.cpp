#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bcwave/intervals.hpp"

using namespace bcwave;

TEST_CASE("constructor normalizes: sorts, merges overlaps, drops degenerate pieces") {
    ElementarySet E = ElementarySet::from_pairs({{3.0, 4.0}, {1.0, 2.0}, {1.5, 2.5}, {5.0, 5.0}});
    REQUIRE(E.size() == 2);
    CHECK(E.intervals()[0].a == doctest::Approx(1.0));
    CHECK(E.intervals()[0].b == doctest::Approx(2.5));
    CHECK(E.intervals()[1].a == doctest::Approx(3.0));
    CHECK(E.intervals()[1].b == doctest::Approx(4.0));
}

TEST_CASE("touching components merge") {
    ElementarySet E = ElementarySet::from_pairs({{0.0, 1.0}, {1.0, 2.0}});
    CHECK(E.size() == 1);
    CHECK(E.intervals()[0].length() == doctest::Approx(2.0));
}

TEST_CASE("measure_upto clips at the window") {
    ElementarySet E = ElementarySet::from_pairs({{1.0, 2.0}, {3.0, 5.0}});
    CHECK(E.measure_upto(0.5) == doctest::Approx(0.0));
    CHECK(E.measure_upto(1.5) == doctest::Approx(0.5));
    CHECK(E.measure_upto(4.0) == doctest::Approx(2.0));
    CHECK(E.measure_upto(100.0) == doctest::Approx(3.0));
}

TEST_CASE("distance to a set and to the empty set") {
    ElementarySet E = ElementarySet::from_pairs({{1.0, 2.0}, {4.0, 6.0}});
    CHECK(E.distance(1.5) == doctest::Approx(0.0));
    CHECK(E.distance(0.0) == doctest::Approx(1.0));
    CHECK(E.distance(3.1) == doctest::Approx(0.9));
    CHECK(E.distance(8.0) == doctest::Approx(2.0));
    CHECK(std::isinf(ElementarySet{}.distance(1.0)));
}

TEST_CASE("neighborhood dilates, clips at zero and merges") {
    ElementarySet E = ElementarySet::from_pairs({{0.5, 1.0}, {2.0, 3.0}});
    ElementarySet Er = neighborhood(E, 0.6);
    REQUIRE(Er.size() == 1); // gap 1.0 closes under r = 0.6
    CHECK(Er.intervals()[0].a == doctest::Approx(0.0));
    CHECK(Er.intervals()[0].closed_left); // clipped at the origin
    CHECK(Er.intervals()[0].b == doctest::Approx(3.6));
}

TEST_CASE("neighborhood of radius zero returns the set itself") {
    ElementarySet E = ElementarySet::from_pairs({{0.5, 1.0}, {2.0, 3.0}});
    CHECK(sym_diff_measure(E, neighborhood(E, 0.0), 10.0) == doctest::Approx(0.0));
}

TEST_CASE("isotony agrees with the metric neighborhood and is monotone in T") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::pair<double, double>> pairs;
        for (int p = 0; p < 3; ++p) {
            const double a = u(rng);
            pairs.emplace_back(a, a + 0.3 + u(rng) * 0.3);
        }
        ElementarySet E = ElementarySet::from_pairs(pairs);
        const double r1 = 0.2 + 0.2 * u(rng), r2 = r1 + 0.1 + 0.1 * u(rng);
        ElementarySet E1 = isotony_apply({E}, r1).set;
        CHECK(sym_diff_measure(E1, neighborhood(E, r1), 50.0) == doctest::Approx(0.0));
        // semigroup domination: (E^{r1})^{r2-r1} contains E^{r2} (equality can
        // fail only through the origin clip, which only enlarges), and both
        // contain E
        ElementarySet E2 = isotony_apply({E}, r2).set;
        ElementarySet E12 = neighborhood(E1, r2 - r1);
        for (double x = 0.05; x < 10.0; x += 0.1) {
            if (E2.distance(x) == 0.0) CHECK(E12.distance(x) == 0.0);
            if (E.distance(x) == 0.0) CHECK(E1.distance(x) == 0.0);
        }
    }
}

TEST_CASE("isotony at T = 0 is the identity") {
    ElementarySet E = ElementarySet::from_pairs({{1.0, 2.0}});
    CHECK(sym_diff_measure(isotony_apply({E}, 0.0).set, E, 10.0) == doctest::Approx(0.0));
}

TEST_CASE("sym_diff_measure: identity, symmetry, triangle inequality") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    for (int trial = 0; trial < 200; ++trial) {
        auto rnd = [&] {
            std::vector<std::pair<double, double>> pairs;
            for (int p = 0; p < 2; ++p) {
                const double a = u(rng);
                pairs.emplace_back(a, a + 0.1 + u(rng) * 0.5);
            }
            return ElementarySet::from_pairs(pairs);
        };
        ElementarySet A = rnd(), B = rnd(), C = rnd();
        const double L = 10.0;
        CHECK(sym_diff_measure(A, A, L) == doctest::Approx(0.0));
        CHECK(sym_diff_measure(A, B, L) == doctest::Approx(sym_diff_measure(B, A, L)));
        CHECK(sym_diff_measure(A, C, L) <=
              sym_diff_measure(A, B, L) + sym_diff_measure(B, C, L) + 1e-12);
    }
}

TEST_CASE("unbounded components propagate through the calculus") {
    ElementarySet E = ElementarySet::from_pairs({{1.0, kInf}});
    CHECK(E.measure_upto(5.0) == doctest::Approx(4.0));
    ElementarySet Er = neighborhood(E, 0.5);
    REQUIRE(Er.size() == 1);
    CHECK(Er.intervals()[0].a == doctest::Approx(0.5));
    CHECK(std::isinf(Er.intervals()[0].b));
    CHECK(sym_diff_measure(E, Er, 10.0) == doctest::Approx(0.5));
}

TEST_CASE("converges detects shrinking symmetric differences") {
    ElementarySet E = ElementarySet::from_pairs({{1.0, 2.0}});
    std::vector<ElementarySet> good, bad;
    for (int n = 1; n <= 8; ++n) {
        good.push_back(ElementarySet::from_pairs({{1.0, 2.0 + 1.0 / double(n * n)}}));
        bad.push_back(ElementarySet::from_pairs({{1.0, 2.5}}));
    }
    CHECK(converges(good, E, {5.0, 10.0}, 0.05));
    CHECK(!converges(bad, E, {5.0, 10.0}, 0.05));
}
