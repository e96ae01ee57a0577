#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace discovery {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// Run one acceptance criterion (1..11). The tolerances live here, pinned.
CriterionResult run_criterion(int id, std::uint64_t seed);

/// Named suites: closed-forms {1,6}, cutoffs {2,3,4,8}, regions {5,7},
/// noisy {9}, sequential {10}, nproject {11}, all {1..11}.
std::vector<int> suite_criteria(const std::string& suite);

std::vector<CriterionResult> run_suite(const std::string& suite, std::uint64_t seed);

} // namespace discovery
