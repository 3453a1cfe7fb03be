#pragma once

// The acceptance suite: twelve end-to-end checks, each reporting one
// pass/fail line. Shared by the acceptance test binary and `verify`.

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace freelevy {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    int rmt_n = 1000;
    int rmt_seeds = 10;
    std::set<int> only;  // empty: run all
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {},
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  3  title  detail" (timing is left out so the table is reproducible).
std::string format_criterion(const CriterionResult& r);

} // namespace freelevy
