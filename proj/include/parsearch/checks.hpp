// The verification suite behind `parsearch verify` and the acceptance
// tests: each named check solves what it needs (through a shared cache)
// and evaluates one family of closed-form or cross-validation bounds at
// pinned tolerances.

#ifndef PARSEARCH_CHECKS_HPP
#define PARSEARCH_CHECKS_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "parsearch/highdim.hpp"
#include "parsearch/reports.hpp"

namespace parsearch {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    json data;
};

json check_result_to_json(const CheckResult& result);

class VerificationSuite {
  public:
    struct Options {
        // Scales every numerical allowance; 0 turns each bound strict
        // (used to validate that the checkers can fail).
        double allowance_scale = 1.0;
        // > 1 coarsens every grid by that factor (smoke runs). The mesh
        // allowances follow the actual spacing.
        double resolution_scale = 1.0;
        long star_samples = 10000;
        long mc_paths = 200000;
        double mc_dt = 1e-4;
        std::uint64_t mc_seed = 42;
    };

    VerificationSuite();
    explicit VerificationSuite(Options opts);

    static const std::vector<std::string>& check_names();

    CheckResult run(const std::string& name);
    // `only` empty runs everything, otherwise the named subset.
    std::vector<CheckResult> run_all(const std::vector<std::string>& only = {});

    // Cached solves, shared across checks.
    const SolveResult& parallel_solve(double c, std::vector<double> lo, std::vector<double> hi,
                                      double h);
    const PolicySolveResult& policy_solve(SearchMode mode, const Cost& cost,
                                          std::vector<double> lo, std::vector<double> hi,
                                          double h);
    const WdSolution& wd_solve(int d, double c, double halfwidth, double h);

    const Options& options() const { return opts_; }

  private:
    double tol(double x) const { return opts_.allowance_scale * x; }
    double grid_h(double c) const { return opts_.resolution_scale / (80.0 * c); }

    CheckResult check_smooth_pasting_1d();
    CheckResult check_axis_distance();
    CheckResult check_diagonal_lower_bound();
    CheckResult check_dfb_rate();
    CheckResult check_sandwich();
    CheckResult check_star_shaped();
    CheckResult check_sequential_inclusion();
    CheckResult check_sequential_policy();
    CheckResult check_hybrid_regime();
    CheckResult check_rd_values();
    CheckResult check_mc_cross_validation();
    CheckResult check_property_suite();

    Options opts_;
    std::map<std::string, std::shared_ptr<SolveResult>> parallel_cache_;
    std::map<std::string, std::shared_ptr<PolicySolveResult>> policy_cache_;
    std::map<std::string, std::shared_ptr<WdSolution>> wd_cache_;
};

}  // namespace parsearch

#endif
