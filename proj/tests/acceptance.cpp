#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <string>

#include "gda/suite.hpp"

// Runs the acceptance criteria (all, or the ids given as arguments) and
// prints one PASS/FAIL line each. Exit code 1 when any criterion fails.
int main(int argc, char** argv)
{
    std::set<int> only;
    bool verbose = false;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "-v")
            verbose = true;
        else
            only.insert(std::atoi(argv[i]));
    }
    const std::uint64_t seed = 20240601;
    int failed = 0;
    for (const auto& c : gda::acceptance_criteria()) {
        if (!only.empty() && !only.count(c.id))
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        gda::TestReport r;
        std::string error;
        try {
            r = c.run(seed);
        } catch (const std::exception& e) {
            r.pass = false;
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !r.pass;
        std::printf("[%s] criterion %2d: %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs);
        if (!error.empty())
            std::printf("    error: %s\n", error.c_str());
        if (verbose || !r.pass)
            std::printf("    %s: statistic %g, threshold %g%s%s\n", r.id.c_str(), r.statistic, r.threshold,
                        r.detail.rfind('\n', 0) == 0 || r.detail.empty() ? "" : " ", r.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
