#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lps {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string expected_failure;  // non-empty: the reason this criterion is known not to hold as stated
    std::string detail;
    std::vector<std::string> info;  // side measurements that do not enter the verdict

    // "PASS", "FAIL", "FAIL (expected: ...)" or "PASS (unexpected: ...)".
    std::string verdict() const;
    // A FAIL with no recorded reason.
    bool unexpected_failure() const { return !pass && expected_failure.empty(); }
};

struct AcceptanceOptions {
    std::uint64_t seed = 20240601;
    // Multiplies every trial count (at least one trial each); 1 is the full run.
    double trial_scale = 1.0;
    // Criterion ids to run; empty runs 1..14.
    std::vector<int> only;
    // Called once per finished criterion.
    std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});
std::string format_result(const CriterionResult& r);

}  // namespace lps
