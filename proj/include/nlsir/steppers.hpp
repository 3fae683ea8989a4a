#pragma once

#include "nlsir/model.hpp"
#include "nlsir/properties.hpp"
#include "nlsir/rk_method.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace nlsir {

/// A step size outside the range where the scheme's guarantees hold.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// u + tau F(u). The overload taking t_field reuses an already assembled T.
State euler_step(const State& state, double tau, const SirSystem& sys);
State euler_step(const State& state, double tau, const SirSystem& sys, const Field& t_field);

/// Dense Shu-Osher evaluation. A stage value Q(j) + tau/C F(Q(j)) is kept only
/// until the last row that references it.
State ssp_rk_step(const State& state, double tau, const RKMethod& rk, const SirSystem& sys);

/// SSPRK104 with two working registers besides the input state.
State ssprk104_low_storage_step(const State& state, double tau, const SirSystem& sys);

/// S <- S exp(-tau (T + c)), R <- R + b tau I + c tau S_new, I from
/// conservation. Throws PreconditionError for tau > 1/b.
State integral_scheme_step(const State& state, double tau, const SirSystem& sys);

/// min(min_kl 1 / (T_kl + c), 1 / b)
double adaptive_bound(const Field& t_field, const Params& params);

struct StepBounds {
    double adaptive = 0.0;            // at the initial state
    double improved = 0.0;            // min(1 / (T~ + c), 1 / b)
    double pessimistic = 0.0;         // T~ replaced by w N g1(delta/sqrt2) kappa2 m on the four-point rule
    double pessimistic_literal = 0.0; // T~ replaced by w_max kappa^2 m N on the supplied rule
    double rk_scaled = 0.0;           // ssp_c * improved
    double t_tilde_value = 0.0;       // (sum_m w_m g1 g2) * max(S0 + I0 + R0)
};

/// Throws std::invalid_argument for an empty rule.
StepBounds improved_bound(const State& initial, const SirSystem& sys, double ssp_c = 1.0);

enum class StepperKind { ForwardEuler, SSPRK22, SSPRK33, SSPRK104, Integral };

/// "fe", "ssprk22", "ssprk33", "ssprk104", "integral"; throws
/// std::invalid_argument otherwise.
StepperKind parse_stepper(std::string_view spec);
std::string_view to_string(StepperKind kind);
double ssp_coefficient(StepperKind kind);
int stepper_order(StepperKind kind);

State step(StepperKind kind, const State& state, double tau, const SirSystem& sys);

enum class TauPolicy { Fixed, Adaptive };
enum class ViolationPolicy { Ignore, Record, Abort };

struct SimulationOptions {
    double t_final = 80.0;
    StepperKind stepper = StepperKind::ForwardEuler;
    TauPolicy policy = TauPolicy::Fixed;
    double tau = 0.0;                   // fixed policy
    ViolationPolicy on_violation = ViolationPolicy::Ignore;
    double tol_neg = -1.0;              // negative: default_tol_neg(initial)
    double tol_cons = default_tol_cons;
    std::function<void(const State&, std::size_t)> observer; // initial state and after every step
};

struct SimulationResult {
    State final_state;
    std::size_t steps = 0;
    bool aborted = false;
    std::vector<PropertyReport> violations;
    double min_tau = 0.0;
    double max_tau = 0.0;
};

/// Throws std::invalid_argument for t_final < initial.t, a non-positive
/// fixed tau, or the adaptive policy with a multistage stepper.
SimulationResult simulate(const State& initial, const SirSystem& sys, const SimulationOptions& options);

} // namespace nlsir
