// Acceptance suite: runs every verification check at the pinned
// resolutions and tolerances, printing one pass/fail line per criterion.
// Exits non-zero if any criterion fails.

#include <cstdio>
#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "parsearch/checks.hpp"

using namespace parsearch;

namespace {

struct Criterion {
    int number;
    const char* title;
    const char* check;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> crits = {
        {1, "1-d smooth pasting", "smooth_pasting_1d"},
        {2, "axis asymptote 1/(4c)", "axis_distance"},
        {3, "diagonal lower bound", "diagonal_lower_bound"},
        {4, "asymptotic d_FB rate", "dfb_rate"},
        {5, "eta/phi sandwich", "sandwich"},
        {6, "star-shaped contact set", "star_shaped"},
        {7, "sequential inclusion", "sequential_inclusion"},
        {8, "sequential policy structure", "sequential_policy"},
        {9, "hybrid parallel regime", "hybrid_regime"},
        {10, "r_d radii and growth", "rd_values"},
        {11, "oracle/MC cross-validation", "mc_cross_validation"},
        {12, "property suite", "property_suite"},
    };
    return crits;
}

}  // namespace

int main(int argc, char** argv) {
    std::string only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = argv[++i];
    }

    VerificationSuite suite;
    int failures = 0;
    for (const auto& crit : criteria()) {
        if (!only.empty() && only != crit.check) continue;
        CheckResult result;
        try {
            result = suite.run(crit.check);
        } catch (const std::exception& e) {
            result.pass = false;
            result.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %2d: %s - %s\n", result.pass ? "PASS" : "FAIL", crit.number,
                    crit.title, result.detail.c_str());
        std::fflush(stdout);
        if (!result.pass) ++failures;
    }
    if (failures == 0) {
        std::printf("acceptance: all criteria passed\n");
    } else {
        std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
