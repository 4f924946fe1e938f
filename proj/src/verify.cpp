#include "lpsum/verify.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace lps {

TrialRecord& VerificationReport::add(std::uint64_t seed, std::string params, double lhs, double rhs) {
    double slack = lhs - rhs;
    if (relative) slack /= std::max(std::fabs(rhs), 1e-300);
    return add_slack(seed, std::move(params), lhs, rhs, slack);
}

TrialRecord& VerificationReport::add_slack(std::uint64_t seed, std::string params, double lhs, double rhs,
                                           double slack) {
    TrialRecord r;
    r.seed = seed;
    r.params = std::move(params);
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = slack;
    r.pass = std::isfinite(slack) ? slack >= -tolerance : slack > 0;
    trials.push_back(std::move(r));
    return trials.back();
}

void VerificationReport::merge(const VerificationReport& other) {
    trials.insert(trials.end(), other.trials.begin(), other.trials.end());
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

double VerificationReport::min_slack() const {
    double m = kInf;
    for (const auto& t : trials) m = std::min(m, t.slack);
    return m;
}

std::size_t VerificationReport::failures() const {
    return std::count_if(trials.begin(), trials.end(), [](const TrialRecord& t) { return !t.pass; });
}

bool VerificationReport::passed() const { return !trials.empty() && failures() == 0; }

namespace {
std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
std::string quoted(const std::string& s) {
    std::string r = "\"";
    for (char c : s) {
        if (c == '"') r += '"';
        r += c;
    }
    return r + "\"";
}
}  // namespace

std::string VerificationReport::to_csv() const {
    std::ostringstream out;
    out << "seed,params,lhs,rhs,slack,pass\n";
    for (const auto& t : trials)
        out << t.seed << ',' << quoted(t.params) << ',' << num(t.lhs) << ',' << num(t.rhs) << ',' << num(t.slack)
            << ',' << (t.pass ? 1 : 0) << '\n';
    out << "# suite=" << suite << " trials=" << trials.size() << " failures=" << failures()
        << " min_slack=" << num(min_slack()) << " tolerance=" << num(tolerance)
        << (relative ? " relative" : " absolute") << " verdict=" << (passed() ? "PASS" : "FAIL") << '\n';
    for (const auto& n : notes) out << "# " << n << '\n';
    return out.str();
}

std::string VerificationReport::summary() const {
    std::ostringstream out;
    out << suite << ": " << (passed() ? "PASS" : "FAIL") << " trials=" << trials.size()
        << " failures=" << failures() << " min_slack=" << num(min_slack()) << " tol=" << num(tolerance);
    return out.str();
}

}  // namespace lps
