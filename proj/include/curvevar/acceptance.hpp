#pragma once

#include <string>
#include <vector>

namespace curvevar {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    /// Measured values behind the verdict, one line.
    std::string detail;
    double seconds = 0.0;
};

/// Identifiers of the acceptance criteria, 1..14.
std::vector<int> acceptance_ids();
std::string acceptance_title(int id);

/// Runs one criterion; exceptions are reported as failures.
CriterionResult run_criterion(int id);
/// Runs the given criteria (all when empty) in order.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids = {});

/// "[PASS] 01 title | detail (0.4 s)"
std::string format_result(const CriterionResult& r);

} // namespace curvevar
