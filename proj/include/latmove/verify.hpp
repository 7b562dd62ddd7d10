#ifndef LATMOVE_VERIFY_HPP
#define LATMOVE_VERIFY_HPP

#include <string>
#include <vector>

#include "latmove/graph.hpp"

namespace latmove {

struct CheckResult {
    std::string description;
    bool pass = false;
    std::string witness;  // offending object on failure, summary on success
};

struct VerifyReport {
    std::string suite;
    std::vector<CheckResult> checks;
    double elapsed_seconds = 0.0;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// The desk-scale reproductions, numbered 1 through 12. Each is deterministic
// (fixed seeds and tie breaks) and idempotent.
constexpr int kCriterionCount = 12;
VerifyReport run_criterion(int index, const std::string& cache_dir = "");

// Named suites exposed by the command line; each maps to one or two criteria.
const std::vector<std::string>& verify_suite_names();
bool is_verify_suite(const std::string& name);
VerifyReport run_suite(const std::string& name, const std::string& cache_dir = "");

std::string report_table(const VerifyReport& report);
std::string report_json(const VerifyReport& report);

}  // namespace latmove

#endif
