#pragma once

#include <string>
#include <vector>

namespace pulseforge {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;  // one-line summary of measured values
};

// Runs one acceptance criterion (1..9). These are the end-to-end checks of
// the published coefficient table, robustness profiles and numerical
// cross-validations.
CriterionResult run_criterion(int id);

std::vector<CriterionResult> run_all_criteria();

}  // namespace pulseforge
