// Runs every acceptance criterion at full size and prints one verdict line per criterion.
// Exit status is nonzero only for failures without a recorded reason.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "lpsum/acceptance.hpp"

int main(int argc, char** argv) {
    lps::AcceptanceOptions opt;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--scale" && i + 1 < argc) opt.trial_scale = std::atof(argv[++i]);
        else if (a == "--seed" && i + 1 < argc) opt.seed = std::strtoull(argv[++i], nullptr, 10);
        else opt.only.push_back(std::atoi(a.c_str()));
    }
    auto t0 = std::chrono::steady_clock::now();
    opt.on_result = [&](const lps::CriterionResult& r) {
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s\n    [%.1f s]\n", lps::format_result(r).c_str(), sec);
        std::fflush(stdout);
    };
    auto results = lps::run_acceptance(opt);
    int bad = 0;
    for (const auto& r : results) bad += r.unexpected_failure();
    std::printf("%zu criteria, %d unexpected failures\n", results.size(), bad);
    return bad == 0 ? 0 : 1;
}
