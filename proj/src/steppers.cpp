#include "nlsir/steppers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace nlsir {

namespace {

void require_positive_tau(double tau, const char* who) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument(std::string(who) + ": tau must be positive and finite");
    }
}

// out = u + h d, elementwise on all species
State forward(const State& u, double h, const Derivatives& d) {
    State out{Field(u.grid()), Field(u.grid()), Field(u.grid()), u.t + h};
    const Field* src[] = {&u.s, &u.i, &u.r};
    const Field* der[] = {&d.ds, &d.di, &d.dr};
    Field* dst[] = {&out.s, &out.i, &out.r};
    for (int f = 0; f < 3; ++f) {
        const auto x = src[f]->values();
        const auto dx = der[f]->values();
        auto y = dst[f]->values();
        for (std::size_t n = 0; n < y.size(); ++n) {
            y[n] = x[n] + h * dx[n];
        }
    }
    return out;
}

// out (+)= coef * x; `assign` starts a new accumulation. coef == 1 copies.
void accumulate(State& out, double coef, const State& x, bool assign) {
    const Field* src[] = {&x.s, &x.i, &x.r};
    Field* dst[] = {&out.s, &out.i, &out.r};
    for (int f = 0; f < 3; ++f) {
        const auto a = src[f]->values();
        auto y = dst[f]->values();
        if (assign) {
            if (coef == 1.0) {
                std::copy(a.begin(), a.end(), y.begin());
            } else {
                for (std::size_t n = 0; n < y.size(); ++n) {
                    y[n] = coef * a[n];
                }
            }
        } else {
            for (std::size_t n = 0; n < y.size(); ++n) {
                y[n] += coef * a[n];
            }
        }
    }
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return out;
}

} // namespace

State euler_step(const State& state, double tau, const SirSystem& sys) {
    require_positive_tau(tau, "euler_step");
    return forward(state, tau, sys.rhs(state));
}

State euler_step(const State& state, double tau, const SirSystem& sys, const Field& t_field) {
    require_positive_tau(tau, "euler_step");
    return forward(state, tau, sys.rhs(state, t_field));
}

State ssp_rk_step(const State& state, double tau, const RKMethod& rk, const SirSystem& sys) {
    require_positive_tau(tau, "ssp_rk_step");
    rk.validate();
    const auto m = static_cast<std::size_t>(rk.m);
    const double h = tau / rk.ssp_c;

    std::vector<std::size_t> last_use(m, 0);
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (rk.alpha[i][j] != 0.0) {
                last_use[j] = i;
            }
        }
    }

    std::vector<std::optional<State>> euler(m);
    euler[0] = forward(state, h, sys.rhs(state));
    State q = state;
    for (std::size_t i = 1; i <= m; ++i) {
        bool assign = true;
        if (rk.v[i] != 0.0) {
            accumulate(q, rk.v[i], state, assign);
            assign = false;
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (rk.alpha[i][j] != 0.0) {
                accumulate(q, rk.alpha[i][j], *euler[j], assign);
                assign = false;
            }
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (last_use[j] == i) {
                euler[j].reset();
            }
        }
        if (i < m && last_use[i] != 0) {
            euler[i] = forward(q, h, sys.rhs(q));
        }
    }
    q.t = state.t + tau;
    return q;
}

State ssprk104_low_storage_step(const State& state, double tau, const SirSystem& sys) {
    require_positive_tau(tau, "ssprk104_low_storage_step");
    const double h = tau / 6.0;
    State q1 = state;
    State q2 = state;
    for (int k = 0; k < 5; ++k) {
        q1 = forward(q1, h, sys.rhs(q1));
    }
    accumulate(q2, 1.0 / 25.0, state, true);
    accumulate(q2, 9.0 / 25.0, q1, false);
    // 3/5 u + 2/5 q1 taken from the input; the register form 15 q2 - 5 q1
    // raises the round-off floor about fourfold
    accumulate(q1, 2.0 / 5.0, q1, true);
    accumulate(q1, 3.0 / 5.0, state, false);
    for (int k = 0; k < 4; ++k) {
        q1 = forward(q1, h, sys.rhs(q1));
    }
    const Derivatives d = sys.rhs(q1);
    State out = q2;
    accumulate(out, 3.0 / 5.0, q1, false);
    const Field* der[] = {&d.ds, &d.di, &d.dr};
    Field* dst[] = {&out.s, &out.i, &out.r};
    for (int f = 0; f < 3; ++f) {
        const auto dx = der[f]->values();
        auto y = dst[f]->values();
        for (std::size_t n = 0; n < y.size(); ++n) {
            y[n] += tau / 10.0 * dx[n];
        }
    }
    out.t = state.t + tau;
    return out;
}

State integral_scheme_step(const State& state, double tau, const SirSystem& sys) {
    require_positive_tau(tau, "integral_scheme_step");
    const double b = sys.params().b;
    const double c = sys.params().c;
    if (tau > 1.0 / b) {
        throw PreconditionError("integral_scheme_step: tau exceeds 1/b");
    }
    require_consistent(state);
    const Field t_field = sys.infection_term(state.i);
    State out{Field(state.grid()), Field(state.grid()), Field(state.grid()), state.t + tau};
    const auto s = state.s.values(), i = state.i.values(), r = state.r.values(), t = t_field.values();
    auto sn = out.s.values(), in = out.i.values(), rn = out.r.values();
    for (std::size_t n = 0; n < sn.size(); ++n) {
        sn[n] = s[n] * std::exp(-tau * (t[n] + c));
        rn[n] = r[n] + b * tau * i[n] + c * tau * sn[n];
        in[n] = (s[n] + i[n] + r[n]) - sn[n] - rn[n];
    }
    return out;
}

double adaptive_bound(const Field& t_field, const Params& params) {
    double bound = 1.0 / params.b;
    for (double t : t_field.values()) {
        bound = std::min(bound, 1.0 / (t + params.c));
    }
    return bound;
}

StepBounds improved_bound(const State& initial, const SirSystem& sys, double ssp_c) {
    const CubatureRule& rule = sys.rule();
    if (rule.empty()) {
        throw std::invalid_argument("improved_bound: empty cubature rule");
    }
    const Params& p = sys.params();
    const Kernel& kernel = sys.kernel();
    const double m_tilde = total_density(initial).max();

    StepBounds out;
    out.adaptive = adaptive_bound(sys.infection_term(initial.i), p);
    out.t_tilde_value = sys.infection().kernel_mass() * m_tilde;
    out.improved = std::min(1.0 / (out.t_tilde_value + p.c), 1.0 / p.b);
    out.rk_scaled = ssp_c * out.improved;

    const CubatureRule four = four_point_disk_rule(p.delta);
    const double t_four = four.max_weight() * static_cast<double>(four.size()) *
                          kernel.g1(p.delta / std::numbers::sqrt2) * kernel.kappa2() * m_tilde;
    out.pessimistic = std::min(1.0 / (t_four + p.c), 1.0 / p.b);

    const double kappa = std::max(kernel.kappa1(), kernel.kappa2());
    const double t_literal = rule.max_weight() * kappa * kappa * m_tilde * static_cast<double>(rule.size());
    out.pessimistic_literal = std::min(1.0 / (t_literal + p.c), 1.0 / p.b);
    return out;
}

StepperKind parse_stepper(std::string_view spec) {
    const std::string s = lower(spec);
    if (s == "fe") {
        return StepperKind::ForwardEuler;
    }
    if (s == "ssprk22") {
        return StepperKind::SSPRK22;
    }
    if (s == "ssprk33") {
        return StepperKind::SSPRK33;
    }
    if (s == "ssprk104") {
        return StepperKind::SSPRK104;
    }
    if (s == "integral") {
        return StepperKind::Integral;
    }
    throw std::invalid_argument("unknown stepper: " + std::string(spec));
}

std::string_view to_string(StepperKind kind) {
    switch (kind) {
    case StepperKind::ForwardEuler:
        return "fe";
    case StepperKind::SSPRK22:
        return "ssprk22";
    case StepperKind::SSPRK33:
        return "ssprk33";
    case StepperKind::SSPRK104:
        return "ssprk104";
    case StepperKind::Integral:
        return "integral";
    }
    return "unknown";
}

double ssp_coefficient(StepperKind kind) { return kind == StepperKind::SSPRK104 ? 6.0 : 1.0; }

int stepper_order(StepperKind kind) {
    switch (kind) {
    case StepperKind::SSPRK22:
        return 2;
    case StepperKind::SSPRK33:
        return 3;
    case StepperKind::SSPRK104:
        return 4;
    default:
        return 1;
    }
}

State step(StepperKind kind, const State& state, double tau, const SirSystem& sys) {
    switch (kind) {
    case StepperKind::ForwardEuler:
        return euler_step(state, tau, sys);
    case StepperKind::SSPRK22:
        return ssp_rk_step(state, tau, find_method("SSPRK22"), sys);
    case StepperKind::SSPRK33:
        return ssp_rk_step(state, tau, find_method("SSPRK33"), sys);
    case StepperKind::SSPRK104:
        return ssprk104_low_storage_step(state, tau, sys);
    case StepperKind::Integral:
        return integral_scheme_step(state, tau, sys);
    }
    throw std::invalid_argument("step: bad stepper");
}

SimulationResult simulate(const State& initial, const SirSystem& sys, const SimulationOptions& opt) {
    require_consistent(initial);
    const double t0 = initial.t;
    const double tf = opt.t_final;
    if (!(tf >= t0) || !std::isfinite(tf)) {
        throw std::invalid_argument("simulate: t_final before the initial time");
    }
    if (opt.policy == TauPolicy::Adaptive && opt.stepper != StepperKind::ForwardEuler) {
        throw std::invalid_argument("simulate: the adaptive policy is available for fe only");
    }
    if (opt.policy == TauPolicy::Fixed && tf > t0) {
        require_positive_tau(opt.tau, "simulate");
    }
    const double tol_neg = opt.tol_neg >= 0.0 ? opt.tol_neg : default_tol_neg(initial);
    const bool checking = opt.on_violation != ViolationPolicy::Ignore;

    SimulationResult res{initial, 0, false, {}, std::numeric_limits<double>::infinity(), 0.0};
    if (opt.observer) {
        opt.observer(res.final_state, 0);
    }

    // Fixed steps land on t0 + k tau; the last one is clipped to hit tf.
    std::size_t planned = 0;
    if (opt.policy == TauPolicy::Fixed && tf > t0) {
        planned = static_cast<std::size_t>(std::ceil((tf - t0) / opt.tau - 1e-9));
        planned = std::max<std::size_t>(planned, 1);
    }

    State& u = res.final_state;
    while (true) {
        double tau = 0.0;
        std::optional<Field> t_field;
        bool last = false;
        if (opt.policy == TauPolicy::Fixed) {
            if (res.steps >= planned) {
                break;
            }
            last = res.steps + 1 == planned;
            tau = last ? tf - (t0 + static_cast<double>(res.steps) * opt.tau) : opt.tau;
        } else {
            if (!(u.t < tf)) {
                break;
            }
            t_field = sys.infection_term(u.i);
            tau = adaptive_bound(*t_field, sys.params());
            if (u.t + tau >= tf) {
                tau = tf - u.t;
                last = true;
            }
        }
        if (!(tau > 0.0)) {
            break;
        }
        State next = t_field ? euler_step(u, tau, sys, *t_field) : step(opt.stepper, u, tau, sys);
        next.t = last ? tf : (opt.policy == TauPolicy::Fixed ? t0 + static_cast<double>(res.steps + 1) * opt.tau
                                                             : u.t + tau);
        ++res.steps;
        res.min_tau = std::min(res.min_tau, tau);
        res.max_tau = std::max(res.max_tau, tau);
        bool stop = false;
        if (checking) {
            PropertyReport rep = check_step(u, next, tol_neg, opt.tol_cons, res.steps);
            if (!rep.ok()) {
                res.violations.push_back(rep);
                stop = opt.on_violation == ViolationPolicy::Abort;
            }
        }
        u = std::move(next);
        if (opt.observer) {
            opt.observer(u, res.steps);
        }
        if (stop) {
            res.aborted = true;
            break;
        }
        if (last) {
            break;
        }
    }
    if (res.steps == 0) {
        res.min_tau = 0.0;
    }
    return res;
}

} // namespace nlsir
