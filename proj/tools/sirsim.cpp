// sirsim: experiment driver for the nonlocal SIR solver.
//
//   sirsim simulate      --config run.json --out dir
//   sirsim bounds-table  --config table.json
//   sirsim convergence   --config conv.json
//   sirsim cubature-test --config cub.json
//   sirsim check         --config run.json --seed 7
//
// Exit status: 0 success, 1 usage or configuration error, 2 property
// violation with the abort policy (or any violation in `check`).

#include "nlsir/harness.hpp"
#include "nlsir/properties.hpp"
#include "nlsir/steppers.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

namespace fs = std::filesystem;
using namespace nlsir;

namespace {

struct CommonOptions {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config, "JSON experiment configuration")->check(CLI::ExistingFile);
    cmd->add_option("--out", opt.out, "output directory");
    cmd->add_option("--seed", opt.seed, "seed for randomized suites");
}

ExperimentConfig resolve(const CommonOptions& opt) {
    ExperimentConfig cfg = opt.config.empty() ? ExperimentConfig{} : load_config(opt.config);
    if (!opt.out.empty()) {
        cfg.out_dir = opt.out;
    }
    if (opt.seed) {
        cfg.seed = *opt.seed;
    }
    return cfg;
}

std::ofstream open_out(const ExperimentConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    std::ofstream out(fs::path(cfg.out_dir) / name);
    if (!out) {
        throw std::runtime_error("cannot write " + (fs::path(cfg.out_dir) / name).string());
    }
    return out;
}

int cmd_simulate(const ExperimentConfig& cfg) {
    const SirSystem sys = make_system(cfg);
    const State initial = initial_state(cfg);
    std::vector<double> pending = cfg.snapshot_times;
    std::sort(pending.begin(), pending.end());
    std::size_t next = 0;
    const double slack = 1e-12 * cfg.t_final;
    // initial and final states always; each scheduled time at the first
    // state reaching it, named by that state's actual time
    const SimulationResult res = run(cfg, sys, initial, [&](const State& u, std::size_t step) {
        bool due = step == 0;
        while (next < pending.size() && u.t >= pending[next] - slack) {
            due = true;
            ++next;
        }
        if (due) {
            write_snapshot(cfg.out_dir, u);
        }
    });
    write_snapshot(cfg.out_dir, res.final_state);

    std::ofstream props = open_out(cfg, "properties.csv");
    props << report_csv_header() << '\n';
    for (const PropertyReport& r : res.violations) {
        props << to_csv_line(r) << '\n';
    }

    std::printf("stepper=%s steps=%zu t=%.17g min_tau=%.17g max_tau=%.17g violations=%zu\n",
                std::string(to_string(cfg.stepper)).c_str(), res.steps, res.final_state.t, res.min_tau,
                res.max_tau, res.violations.size());
    std::printf("max S=%.17g max I=%.17g max R=%.17g\n", res.final_state.s.max(), res.final_state.i.max(),
                res.final_state.r.max());
    if (res.aborted) {
        const PropertyReport& r = res.violations.back();
        std::fprintf(stderr, "property violation at step %zu", r.step_index);
        if (r.location) {
            std::fprintf(stderr, " (%s at k=%d, l=%d)", std::string(to_string(r.location->species)).c_str(),
                         r.location->k, r.location->l);
        }
        std::fprintf(stderr, "\n");
        return 2;
    }
    return 0;
}

int cmd_bounds(ExperimentConfig cfg, bool threshold) {
    if (cfg.sweep_values.empty()) {
        cfg.sweep_values = cfg.sweep_param == "delta" ? std::vector<double>{0.05, 0.075, 0.1, 0.25, 0.5}
                                                      : std::vector<double>{50.0, 100.0, 150.0, 200.0};
    }
    const auto rows = bounds_table(cfg, threshold);
    std::ofstream out = open_out(cfg, "bounds.csv");
    write_bounds_csv(out, cfg.sweep_param, rows);
    write_bounds_csv(std::cout, cfg.sweep_param, rows);
    return 0;
}

int cmd_convergence(const ExperimentConfig& cfg) {
    const std::vector<double> ladder = cfg.tau_ladder.empty() ? halving_ladder(0.429, 5) : cfg.tau_ladder;
    const auto rows = convergence_table(cfg, ladder);
    std::ofstream out = open_out(cfg, "convergence_" + std::string(to_string(cfg.stepper)) + ".csv");
    write_convergence_csv(out, rows);
    write_convergence_csv(std::cout, rows);
    return 0;
}

int cmd_cubature(const ExperimentConfig& cfg) {
    const std::vector<int> ns = cfg.cubature_n.empty() ? std::vector<int>{1, 2, 3, 5, 8, 13, 20} : cfg.cubature_n;
    const std::vector<double> deltas =
        cfg.cubature_delta.empty() ? std::vector<double>{0.2, 0.1, 0.05, 0.025, 0.0125} : cfg.cubature_delta;
    const auto rows = cubature_error_study(cfg.rule, ns, deltas, cfg.cubature_sigma);
    std::ofstream out = open_out(cfg, "cubature.csv");
    write_cubature_csv(out, rows);
    write_cubature_csv(std::cout, rows);
    return 0;
}

// One step of every stepper from random nonnegative states at its
// admissible step size.
int cmd_check(const ExperimentConfig& cfg) {
    const SirSystem sys = make_system(cfg);
    std::mt19937_64 rng(cfg.seed);
    std::ofstream out = open_out(cfg, "check.csv");
    out << "stepper," << report_csv_header() << '\n';
    std::size_t failures = 0;
    const StepperKind kinds[] = {StepperKind::ForwardEuler, StepperKind::SSPRK22, StepperKind::SSPRK33,
                                 StepperKind::SSPRK104, StepperKind::Integral};
    for (int n = 0; n < cfg.random_states; ++n) {
        const State u = random_state(sys.grid(), rng, cfg.initial.s0);
        const StepBounds b = improved_bound(u, sys);
        for (StepperKind kind : kinds) {
            const double tau = kind == StepperKind::ForwardEuler ? b.adaptive : ssp_coefficient(kind) * b.improved;
            const State v = step(kind, u, tau, sys);
            const PropertyReport r = check_step(u, v, default_tol_neg(u), default_tol_cons,
                                                static_cast<std::size_t>(n));
            out << to_string(kind) << ',' << to_csv_line(r) << '\n';
            failures += r.ok() ? 0 : 1;
        }
    }
    std::printf("states=%d failures=%zu\n", cfg.random_states, failures);
    return failures == 0 ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structure-preserving solver for the nonlocal SIR model"};
    app.require_subcommand(1);

    CommonOptions sim_opt, bounds_opt, conv_opt, cub_opt, check_opt;
    bool no_threshold = false;
    CLI::App* sim = app.add_subcommand("simulate", "run one trajectory and write snapshots");
    CLI::App* bounds = app.add_subcommand("bounds-table", "step-size bounds and bisected thresholds");
    CLI::App* conv = app.add_subcommand("convergence", "temporal convergence table");
    CLI::App* cub = app.add_subcommand("cubature-test", "cubature error on the erf test integral");
    CLI::App* check = app.add_subcommand("check", "randomized one-step property suite");
    add_common(sim, sim_opt);
    add_common(bounds, bounds_opt);
    add_common(conv, conv_opt);
    add_common(cub, cub_opt);
    add_common(check, check_opt);
    bounds->add_flag("--no-threshold", no_threshold, "skip the bisection for tau_e");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*sim) {
            return cmd_simulate(resolve(sim_opt));
        }
        if (*bounds) {
            return cmd_bounds(resolve(bounds_opt), !no_threshold);
        }
        if (*conv) {
            return cmd_convergence(resolve(conv_opt));
        }
        if (*cub) {
            return cmd_cubature(resolve(cub_opt));
        }
        if (*check) {
            return cmd_check(resolve(check_opt));
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
