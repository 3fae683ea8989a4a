#pragma once

#include "nlsir/disk_cubature.hpp"
#include "nlsir/grid.hpp"
#include "nlsir/interp.hpp"
#include "nlsir/model.hpp"
#include "nlsir/steppers.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace nlsir {

struct GridSpec {
    int p1 = 20;
    int p2 = 20;
    double l1 = 1.0;
    double l2 = 1.0;
};

/// n_angular = 0 means n_angular = n (square n x n product rules, as in the
/// experiments); the Elhay-Kautsky rule always uses 2n angles.
struct RuleSpec {
    RuleKind kind = RuleKind::GaussLegendreProduct;
    int n = 20;
    int n_angular = 0;
    RadialWeighting radial = RadialWeighting::Gaussian;
};

struct InitialSpec {
    double s0 = 20.0;
    double sigma = 0.0; // 0: min(l1, l2) / 10
};

enum class TauChoice {
    Fixed,    // config.tau
    Bound,    // tau_factor * ssp_c * improved bound
    Adaptive, // fe only
};

struct ExperimentConfig {
    Params params;
    GridSpec grid;
    RuleSpec rule;
    InterpMethod interp = InterpMethod::Bilinear;
    StepperKind stepper = StepperKind::ForwardEuler;
    TauChoice tau_choice = TauChoice::Bound;
    double tau = 0.0;
    double tau_factor = 1.0;
    double t_final = 80.0;
    InitialSpec initial;
    ViolationPolicy on_violation = ViolationPolicy::Record;
    std::vector<double> snapshot_times;
    std::string out_dir = "out";
    std::uint64_t seed = 0;

    // convergence
    std::vector<double> tau_ladder;

    // bounds table: sweep over "a" or "delta"
    std::string sweep_param = "a";
    std::vector<double> sweep_values;

    // cubature study
    std::vector<int> cubature_n;
    std::vector<double> cubature_delta;
    double cubature_sigma = 0.1;

    // property suite
    int random_states = 100;

    /// Throws std::invalid_argument.
    void validate() const;
};

/// Keys mirror the struct; unknown keys are rejected. Throws
/// std::invalid_argument on malformed input.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

Grid make_grid(const GridSpec& spec);
CubatureRule make_rule(const RuleSpec& spec, double delta);
SirSystem make_system(const ExperimentConfig& cfg);

/// S = s0, R = 0, I the normalized Gaussian centred in the domain.
State initial_state(const Grid& grid, const InitialSpec& spec);
State initial_state(const ExperimentConfig& cfg);

/// Random nonnegative state; each entry is 0 with probability 1/5, else
/// uniform on [0, scale).
State random_state(const Grid& grid, std::mt19937_64& rng, double scale);

enum class Norm { L1, L2, Max };

/// Norm of the difference summed over S, I, R. L1 and L2 carry the cell
/// area h1 h2. Throws std::invalid_argument on grid mismatch.
double error_norm(const State& field, const State& reference, Norm p);

/// Step size the config asks for (resolves TauChoice::Bound).
double resolve_tau(const ExperimentConfig& cfg, const SirSystem& sys, const State& initial);

SimulationResult run(const ExperimentConfig& cfg, const SirSystem& sys, const State& initial,
                     std::function<void(const State&, std::size_t)> observer = {});

std::vector<double> halving_ladder(double tau0, int levels);

struct ConvergenceRow {
    double tau;
    double error;
    std::optional<double> order;
};

/// solve(tau) returns the state at t_final. The reference uses the smallest
/// tau halved. Throws std::invalid_argument unless the ladder halves.
std::vector<ConvergenceRow> convergence_table(const std::vector<double>& ladder,
                                              const std::function<State(double)>& solve, Norm p = Norm::L1);
std::vector<ConvergenceRow> convergence_table(const ExperimentConfig& cfg, const std::vector<double>& ladder);

struct Threshold {
    double tau_e = 0.0;
    bool lower_fails = false; // properties already violated at the lower end
    bool upper_passes = false; // still fine at the upper end; tau_e is the bracket top
};

/// Largest fixed forward-Euler step keeping D1-D4 over the whole run,
/// bisected on [lo, hi] to relative width rel_tol.
Threshold empirical_threshold(const ExperimentConfig& cfg, double lo, double hi, double rel_tol = 1e-3);

/// True when a forward-Euler run with step tau keeps D1-D4 at every step.
bool fe_preserves_properties(const ExperimentConfig& cfg, const SirSystem& sys, const State& initial, double tau);

struct BoundsRow {
    double param;
    double tau_tilde;
    double tau;
    Threshold threshold;

    double tau_tilde_ratio() const { return tau_tilde / threshold.tau_e; }
    double tau_ratio() const { return tau / threshold.tau_e; }
};

/// One row per sweep value; tau_e is bisected on [tau, 4 tau].
std::vector<BoundsRow> bounds_table(const ExperimentConfig& cfg, bool with_threshold = true);

/// One row of bounds_table for a single sweep value.
BoundsRow bounds_row(const ExperimentConfig& cfg, double value, bool with_threshold = true);

/// Integral over the delta-disk of 100 (delta - r) (1 + sin theta) times
/// 100 / (2 pi sigma^2) exp(-r^2 / (2 sigma^2)).
double erf_test_exact(double delta, double sigma);
double erf_test_integrand(double delta, double sigma, const CubaturePoint& p);

struct CubatureRow {
    int n;
    double delta;
    double value;
    double exact;
    double error;
};

std::vector<CubatureRow> cubature_error_study(const RuleSpec& rule, const std::vector<int>& n_list,
                                              const std::vector<double>& delta_list, double sigma);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);
void write_bounds_csv(std::ostream& out, const std::string& param, const std::vector<BoundsRow>& rows);
void write_cubature_csv(std::ostream& out, const std::vector<CubatureRow>& rows);

/// S_<t>.csv, I_<t>.csv, R_<t>.csv in dir.
void write_snapshot(const std::filesystem::path& dir, const State& state);

} // namespace nlsir
