// Command-line driver: solve the search-stopping problems and emit
// field/boundary/policy artifacts, run the verification suite, or
// Monte-Carlo-simulate a solved policy.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "parsearch/checks.hpp"

namespace fs = std::filesystem;
using namespace parsearch;

namespace {

struct SolveOptions {
    std::string mode = "parallel";
    int d = 2;
    double c = 1.0;
    double cprime = 0.0;
    std::vector<double> xmin;
    std::vector<double> xmax;
    double h = 0.0;
    double tol = 0.0;
    double residual_tol = 0.0;
    double omega = 0.0;
    double eps_contact = 0.0;
    std::string out = "out";
};

struct SimulateOptions {
    std::vector<std::string> probes;
    long paths = 200000;
    std::uint64_t seed = 42;
    double dt = 1e-4;
    double t_cap = 0.0;
    bool solve_first = false;
    std::string out = "out";
};

struct VerifyOptions {
    std::vector<std::string> only;
    double allowance_scale = 1.0;
    double resolution_scale = 1.0;
    long star_samples = 10000;
    long mc_paths = 200000;
    double mc_dt = 1e-4;
    std::uint64_t seed = 42;
    std::string out = "out";
};

GridSpec default_grid(const SolveOptions& opt) {
    std::vector<double> lo = opt.xmin;
    std::vector<double> hi = opt.xmax;
    double h = opt.h;
    if (lo.empty()) {
        const double low = (opt.d >= 3) ? -2.0 / opt.c : (opt.d == 2 ? -4.0 / opt.c : -2.0 / opt.c);
        lo.assign(opt.d, low);
    }
    if (hi.empty()) {
        const double high = (opt.d >= 3) ? 4.0 / opt.c : (opt.d == 2 ? 8.0 / opt.c : 2.0 / opt.c);
        hi.assign(opt.d, high);
    }
    if (lo.size() == 1 && opt.d > 1) lo.assign(opt.d, lo[0]);
    if (hi.size() == 1 && opt.d > 1) hi.assign(opt.d, hi[0]);
    if (static_cast<int>(lo.size()) != opt.d || static_cast<int>(hi.size()) != opt.d) {
        throw std::invalid_argument("--xmin/--xmax must be given once or once per axis");
    }
    if (h <= 0.0) h = (opt.d >= 3) ? 1.0 / (20.0 * opt.c) : 1.0 / (80.0 * opt.c);
    return GridSpec(lo, hi, h);
}

json boundary_report(const ScalarField& u, const ScalarField& g, const ContactMask& mask,
                     double c, double eps_contact, long star_samples) {
    const GridSpec& grid = u.grid;
    json report;
    report["c"] = c;
    report["h"] = grid.spacing();
    report["eps_contact"] = eps_contact;
    report["gamma_node_count"] = static_cast<long>(boundary_nodes(mask).size());
    report["axis_distance"] = json::array();
    report["s_star"] = json::array();
    report["d_fb"] = json::array();
    if (grid.dimension() == 2) {
        try {
            for (const auto& band : axis_distance(mask, c, {-3.0 / c})) {
                report["axis_distance"].push_back(
                    {{"x2", band.x2}, {"left", band.left}, {"right", band.right}});
            }
        } catch (const std::invalid_argument&) {
            // probe row outside this domain; omit
        }
        const BoundaryProfile profile = diagonal_profile(mask, c);
        for (const auto& sw : profile.s_star) {
            report["s_star"].push_back({{"t", sw.t}, {"s", sw.s}});
        }
        for (double T : {1.0, 2.0, 4.0}) {
            if (T < 1.0 / (2.0 * c)) continue;
            try {
                report["d_fb"].push_back({{"T", T},
                                          {"value", dfb_distance(profile, T, c)},
                                          {"bound", dfb_upper_bound(T, c)}});
            } catch (const std::invalid_argument&) {
                break;  // no slices that far out
            }
        }
        report["skipped_slices"] = profile.skipped_slices;
    }
    const auto star = star_shaped_check(mask, u, g, star_samples, eps_contact);
    report["star_shaped"] = {{"checked", star.rays_checked},
                             {"sampled", star.sampled},
                             {"violations", static_cast<long>(star.violations.size())}};
    return report;
}

int cmd_solve(const SolveOptions& opt) {
    const SearchMode mode = mode_from_name(opt.mode);
    const Cost cost{opt.c, opt.cprime};
    const GridSpec grid = default_grid(opt);
    const ScalarField bc = truncation_boundary_values(grid, cost, mode);
    SolverConfig cfg;
    cfg.tol = opt.tol;
    cfg.residual_tol = opt.residual_tol;
    cfg.omega = opt.omega;

    ScalarField u(grid);
    SolveDiagnostics diag;
    std::optional<PolicyField> policy;
    if (mode == SearchMode::Parallel) {
        auto solved = solve_parallel(grid, cost, bc, cfg);
        u = std::move(solved.u);
        diag = std::move(solved.diagnostics);
    } else {
        auto solved = (mode == SearchMode::Sequential) ? solve_sequential(grid, cost, bc, cfg)
                                                       : solve_hybrid(grid, cost, bc, cfg);
        u = std::move(solved.u);
        policy = std::move(solved.policy);
        diag = std::move(solved.diagnostics);
    }

    const ScalarField g = build_obstacle(grid);
    const double cscale = (mode == SearchMode::Sequential) ? cost.cprime : cost.c;
    const double eps_contact =
        opt.eps_contact > 0.0 ? opt.eps_contact : default_eps_contact(cscale, grid.spacing());
    const ContactMask mask = contact_set(u, g, eps_contact);

    fs::create_directories(opt.out);
    write_field_csv(opt.out + "/field.csv", u, g, mask);
    if (policy) write_policy_csv(opt.out + "/policy.csv", *policy);
    write_boundary_nodes_csv(opt.out + "/boundary_nodes.csv", grid, boundary_nodes(mask), mask);

    json diagnostics;
    diagnostics["mode"] = opt.mode;
    diagnostics["d"] = grid.dimension();
    diagnostics["c"] = cost.c;
    diagnostics["cprime"] = cost.cprime;
    diagnostics["eps_contact"] = eps_contact;
    diagnostics["grid"] = grid_to_json(grid);
    diagnostics["solver"] = diagnostics_to_json(diag);
    if (grid.dimension() >= 3) {
        diagnostics["truncation_note"] =
            "d >= 3 uses surrogate far-field data on the diagonal faces; compare two domain"
            " sizes to control the truncation error";
    }
    write_report(opt.out + "/diagnostics.json",
                 report_envelope(diagnostics, {{"wall_seconds", diag.wall_seconds}}));
    write_report(opt.out + "/boundary.json",
                 report_envelope(boundary_report(u, g, mask, cscale, eps_contact, 10000)));
    std::cout << "solved " << opt.mode << " d=" << grid.dimension() << " in " << diag.sweeps
              << " sweeps (residual " << diag.final_residual << "); artifacts in " << opt.out
              << "\n";
    return 0;
}

int cmd_verify(const VerifyOptions& opt) {
    VerificationSuite::Options options;
    options.allowance_scale = opt.allowance_scale;
    options.resolution_scale = opt.resolution_scale;
    options.star_samples = opt.star_samples;
    options.mc_paths = opt.mc_paths;
    options.mc_dt = opt.mc_dt;
    options.mc_seed = opt.seed;
    VerificationSuite suite(options);

    std::vector<std::string> only;
    for (const auto& entry : opt.only) {
        std::stringstream ss(entry);
        std::string name;
        while (std::getline(ss, name, ',')) {
            if (!name.empty()) only.push_back(name);
        }
    }
    const auto results = suite.run_all(only);

    bool all_pass = true;
    json payload;
    payload["checks"] = json::array();
    for (const auto& result : results) {
        all_pass = all_pass && result.pass;
        payload["checks"].push_back(check_result_to_json(result));
        std::cout << (result.pass ? "[PASS] " : "[FAIL] ") << result.name << ": "
                  << result.detail << "\n";
    }
    payload["pass"] = all_pass;
    fs::create_directories(opt.out);
    write_report(opt.out + "/verify.json", report_envelope(payload));
    std::cout << (all_pass ? "verification passed" : "verification FAILED") << " ("
              << results.size() << " checks); report in " << opt.out << "/verify.json\n";
    return all_pass ? 0 : 1;
}

std::vector<double> parse_probe(const std::string& text, int d) {
    std::vector<double> point;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) point.push_back(std::stod(cell));
    if (static_cast<int>(point.size()) != d) {
        throw std::invalid_argument("probe '" + text + "' has wrong dimension");
    }
    return point;
}

int cmd_simulate(const SimulateOptions& opt, const SolveOptions& solve_opt) {
    if (opt.solve_first) {
        const int rc = cmd_solve(solve_opt);
        if (rc != 0) return rc;
    }
    const std::string dir = opt.out;
    if (!fs::exists(dir + "/diagnostics.json") || !fs::exists(dir + "/field.csv")) {
        throw std::invalid_argument("no solve artifacts in '" + dir +
                                    "'; run solve first or pass --solve-first");
    }
    const json diagnostics = read_report(dir + "/diagnostics.json");
    const json& data = diagnostics.at("data");
    const GridSpec grid = grid_from_json(data.at("grid"));
    const SearchMode mode = mode_from_name(data.at("mode").get<std::string>());
    const Cost cost{data.at("c").get<double>(), data.at("cprime").get<double>()};

    ScalarField g(grid);
    ContactMask mask(grid);
    const ScalarField u = read_field_csv(dir + "/field.csv", grid, &g, &mask);
    PolicyField policy(grid);
    if (mode == SearchMode::Parallel) {
        policy = policy_from_contact(u, g, data.at("eps_contact").get<double>());
    } else {
        policy = read_policy_csv(dir + "/policy.csv", grid);
    }

    const double t_cap = opt.t_cap > 0.0 ? opt.t_cap : 50.0 / cost.c;
    json payload;
    payload["mode"] = data.at("mode");
    payload["probes"] = json::array();
    for (const auto& text : opt.probes) {
        const auto probe = parse_probe(text, grid.dimension());
        const SimEstimate est =
            simulate_stopping(probe, policy, cost, opt.dt, opt.paths, opt.seed, t_cap);
        json entry = sim_estimate_to_json(est);
        entry["probe"] = probe;
        entry["solver_value"] = interpolate(u, probe);
        payload["probes"].push_back(std::move(entry));
    }
    write_report(dir + "/simulate.json", report_envelope(payload));
    std::cout << "simulated " << opt.probes.size() << " probe(s); report in " << dir
              << "/simulate.json\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"parsearch: free-boundary solvers for parallel, sequential and hybrid search"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");  // leave --h free for the grid spacing
    app.set_config("--config", "", "optional key=value config file; flags override");

    SolveOptions solve_opt;
    SimulateOptions sim_opt;
    VerifyOptions verify_opt;

    auto add_solve_flags = [&](CLI::App* cmd) {
        cmd->set_help_flag("--help", "print help");
        cmd->add_option("--mode", solve_opt.mode, "parallel | sequential | hybrid")
            ->check(CLI::IsMember({"parallel", "sequential", "hybrid"}));
        cmd->add_option("--d", solve_opt.d, "dimension (1..3 full solves)")->check(CLI::Range(1, 4));
        cmd->add_option("--c", solve_opt.c, "parallel search cost per unit time");
        cmd->add_option("--cprime", solve_opt.cprime, "single-alternative search cost");
        cmd->add_option("--xmin", solve_opt.xmin, "domain lower extent (repeat per axis)");
        cmd->add_option("--xmax", solve_opt.xmax, "domain upper extent (repeat per axis)");
        cmd->add_option("--h", solve_opt.h, "grid spacing (default 1/(80c), 1/(20c) for d>=3)");
        cmd->add_option("--tol", solve_opt.tol, "successive-change stop (default 1e-10 x scale)");
        cmd->add_option("--residual-tol", solve_opt.residual_tol,
                        "complementarity residual stop (default 1e-8 x c)");
        cmd->add_option("--omega", solve_opt.omega, "relaxation factor in [1,2); 0 = adaptive");
        cmd->add_option("--eps-contact", solve_opt.eps_contact,
                        "contact tolerance (default max(1e-8, c h^2))");
    };

    CLI::App* solve_cmd = app.add_subcommand("solve", "solve and write artifacts");
    add_solve_flags(solve_cmd);
    solve_cmd->add_option("--out", solve_opt.out, "output directory")->envname("PARSEARCH_OUT");

    CLI::App* verify_cmd = app.add_subcommand("verify", "run the verification suite");
    verify_cmd->set_help_flag("--help", "print help");
    verify_cmd->add_option("--only", verify_opt.only, "subset of checks (comma lists ok)");
    verify_cmd->add_option("--allowance-scale", verify_opt.allowance_scale,
                           "scale every numerical allowance (0 = strict bounds)");
    verify_cmd->add_option("--resolution-scale", verify_opt.resolution_scale,
                           "coarsen grids by this factor (>1 is faster, looser)");
    verify_cmd->add_option("--star-samples", verify_opt.star_samples, "star-shape sample cap");
    verify_cmd->add_option("--paths", verify_opt.mc_paths, "Monte Carlo paths");
    verify_cmd->add_option("--dt", verify_opt.mc_dt, "Monte Carlo time step");
    verify_cmd->add_option("--seed", verify_opt.seed, "Monte Carlo seed");
    verify_cmd->add_option("--out", verify_opt.out, "output directory")->envname("PARSEARCH_OUT");

    CLI::App* sim_cmd = app.add_subcommand("simulate", "simulate a solved policy");
    sim_cmd->add_option("--probe", sim_opt.probes, "start point 'x1,x2,...' (repeatable)")
        ->required();
    sim_cmd->add_option("--paths", sim_opt.paths, "number of paths");
    sim_cmd->add_option("--seed", sim_opt.seed, "seed");
    sim_cmd->add_option("--dt", sim_opt.dt, "Euler step");
    sim_cmd->add_option("--t-cap", sim_opt.t_cap, "force-stop time (default 50/c)");
    sim_cmd->add_flag("--solve-first", sim_opt.solve_first, "run the solve before simulating");
    sim_cmd->add_option("--out", sim_opt.out, "artifact directory")->envname("PARSEARCH_OUT");
    add_solve_flags(sim_cmd);

    try {
        app.parse(argc, argv);
        if (solve_cmd->parsed()) return cmd_solve(solve_opt);
        if (verify_cmd->parsed()) return cmd_verify(verify_opt);
        if (sim_cmd->parsed()) {
            solve_opt.out = sim_opt.out;
            return cmd_simulate(sim_opt, solve_opt);
        }
        return 2;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
