#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lps {

struct TrialRecord {
    std::uint64_t seed = 0;
    std::string params;
    double lhs = 0;
    double rhs = 0;
    double slack = 0;  // lhs - rhs in the direction the statement asserts
    bool pass = false;
};

struct VerificationReport {
    std::string suite;
    double tolerance = 0;  // pass <=> slack >= -tolerance
    bool relative = false; // slack is divided by |rhs| before comparing
    std::vector<TrialRecord> trials;
    std::vector<std::string> notes;

    // Appends a trial; slack and pass are derived from lhs, rhs and the tolerance mode.
    TrialRecord& add(std::uint64_t seed, std::string params, double lhs, double rhs);
    // Appends a trial with a precomputed slack.
    TrialRecord& add_slack(std::uint64_t seed, std::string params, double lhs, double rhs, double slack);
    void merge(const VerificationReport& other);

    double min_slack() const;
    bool passed() const;
    std::size_t failures() const;
    std::string to_csv() const;
    std::string summary() const;
};

}  // namespace lps
