#pragma once

#include <string>
#include <vector>

namespace ofbm::acceptance {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Names of all acceptance criteria, in execution order.
std::vector<std::string> criterion_names();

/// Directory holding the shipped parameter fixtures (compile-time default).
std::string default_fixtures_dir();

/// Runs every criterion; never throws (failures are reported in the results).
std::vector<CriterionResult> run_all(const std::string& fixtures_dir = default_fixtures_dir());

}  // namespace ofbm::acceptance
