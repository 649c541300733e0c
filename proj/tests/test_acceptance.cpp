// Acceptance harness: runs every numbered criterion and prints one PASS/FAIL
// line each, so the ctest log doubles as the acceptance report.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "bcwave/acceptance.hpp"

TEST_CASE("acceptance criteria") {
    for (int k = 1; k <= 9; ++k) {
        const bcwave::CriterionResult r = bcwave::run_criterion(k);
        std::printf("%s criterion %d %s metric=%.6g : %s\n", r.pass ? "PASS" : "FAIL", k,
                    r.name.c_str(), r.metric, r.detail.c_str());
        std::fflush(stdout);
        CHECK_MESSAGE(r.pass, r.name, ": ", r.detail);
    }
}
