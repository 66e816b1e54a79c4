#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dfem {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    double worst_margin = 0.0;
    std::string detail;
};

struct AcceptanceOptions {
    double R0 = 1.0;
    double h_base = 0.05;
    double grading = 2.0;
    unsigned seed = 2024;
    std::string out_dir; // artifacts are written here when nonempty
};

/// Runs the full verification battery at desk scale and returns one result
/// per criterion. Detail lines go to `log`.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& log);

/// Prints `CHECK <name> PASS|FAIL margin=<value>` lines; true when all pass.
bool print_results(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace dfem
