#pragma once

#include <string>
#include <vector>

namespace bcwave {

struct CriterionResult {
    std::string name;
    bool pass = false;
    double metric = 0.0; // the headline number the criterion bounds
    std::string detail;
};

CriterionResult criterion1_solver_cross_validation();
CriterionResult criterion2_controllability_round_trip();
CriterionResult criterion3_duality();
CriterionResult criterion4_lattice_formulas();
CriterionResult criterion5_eikonal_riemann();
CriterionResult criterion6_spectral_identities();
CriterionResult criterion7_model_coefficients();
CriterionResult criterion8_end_to_end_inverse();
CriterionResult criterion9_firewall();

/// Runs criterion k (1-based); throws std::out_of_range for bad k.
CriterionResult run_criterion(int k);
std::vector<CriterionResult> run_all_criteria();

} // namespace bcwave
