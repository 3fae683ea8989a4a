#include "nlsir/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nlsir {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
    if (!j.is_object()) {
        throw std::invalid_argument(std::string("config: ") + where + " must be an object");
    }
    const std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& item : j.items()) {
        if (!allowed.contains(item.key())) {
            throw std::invalid_argument(std::string("config: unknown key '") + item.key() + "' in " + where);
        }
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        out = j.at(key).get<T>();
    }
}

RuleKind parse_rule_kind(const std::string& s) {
    if (s == "gauss-legendre" || s == "product") {
        return RuleKind::GaussLegendreProduct;
    }
    if (s == "elhay-kautsky") {
        return RuleKind::ElhayKautsky;
    }
    if (s == "four-point") {
        return RuleKind::FourPointSymmetric;
    }
    throw std::invalid_argument("config: unknown rule kind '" + s + "'");
}

RadialWeighting parse_radial(const std::string& s) {
    if (s == "gaussian") {
        return RadialWeighting::Gaussian;
    }
    if (s == "legendre") {
        return RadialWeighting::Legendre;
    }
    throw std::invalid_argument("config: unknown radial weighting '" + s + "'");
}

ViolationPolicy parse_policy(const std::string& s) {
    if (s == "ignore") {
        return ViolationPolicy::Ignore;
    }
    if (s == "record") {
        return ViolationPolicy::Record;
    }
    if (s == "abort") {
        return ViolationPolicy::Abort;
    }
    throw std::invalid_argument("config: unknown violation policy '" + s + "'");
}

ExperimentConfig parse(const json& j) {
    reject_unknown(j,
                   {"params", "grid", "rule", "interp", "stepper", "tau", "tau_factor", "t_final", "initial",
                    "on_violation", "snapshots", "out", "seed", "tau_ladder", "ladder", "sweep", "cubature",
                    "random_states"},
                   "top level");
    ExperimentConfig cfg;
    if (j.contains("params")) {
        const json& p = j.at("params");
        reject_unknown(p, {"a", "b", "c", "delta", "alpha", "beta"}, "params");
        read(p, "a", cfg.params.a);
        read(p, "b", cfg.params.b);
        read(p, "c", cfg.params.c);
        read(p, "delta", cfg.params.delta);
        read(p, "alpha", cfg.params.alpha);
        read(p, "beta", cfg.params.beta);
    }
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        reject_unknown(g, {"p1", "p2", "l1", "l2"}, "grid");
        read(g, "p1", cfg.grid.p1);
        read(g, "p2", cfg.grid.p2);
        read(g, "l1", cfg.grid.l1);
        read(g, "l2", cfg.grid.l2);
    }
    if (j.contains("rule")) {
        const json& r = j.at("rule");
        reject_unknown(r, {"kind", "n", "n_angular", "radial"}, "rule");
        if (r.contains("kind")) {
            cfg.rule.kind = parse_rule_kind(r.at("kind").get<std::string>());
        }
        read(r, "n", cfg.rule.n);
        read(r, "n_angular", cfg.rule.n_angular);
        if (r.contains("radial")) {
            cfg.rule.radial = parse_radial(r.at("radial").get<std::string>());
        }
    }
    if (j.contains("interp")) {
        cfg.interp = parse_interp_method(j.at("interp").get<std::string>());
    }
    if (j.contains("stepper")) {
        cfg.stepper = parse_stepper(j.at("stepper").get<std::string>());
    }
    if (j.contains("tau")) {
        const json& t = j.at("tau");
        if (t.is_number()) {
            cfg.tau_choice = TauChoice::Fixed;
            cfg.tau = t.get<double>();
        } else if (t == "bound") {
            cfg.tau_choice = TauChoice::Bound;
        } else if (t == "adaptive") {
            cfg.tau_choice = TauChoice::Adaptive;
        } else {
            throw std::invalid_argument("config: tau must be a number, \"bound\" or \"adaptive\"");
        }
    }
    read(j, "tau_factor", cfg.tau_factor);
    read(j, "t_final", cfg.t_final);
    if (j.contains("initial")) {
        const json& i = j.at("initial");
        reject_unknown(i, {"s0", "sigma"}, "initial");
        read(i, "s0", cfg.initial.s0);
        read(i, "sigma", cfg.initial.sigma);
    }
    if (j.contains("on_violation")) {
        cfg.on_violation = parse_policy(j.at("on_violation").get<std::string>());
    }
    read(j, "snapshots", cfg.snapshot_times);
    read(j, "out", cfg.out_dir);
    read(j, "seed", cfg.seed);
    read(j, "tau_ladder", cfg.tau_ladder);
    if (j.contains("ladder")) {
        const json& l = j.at("ladder");
        reject_unknown(l, {"tau0", "levels"}, "ladder");
        cfg.tau_ladder = halving_ladder(l.at("tau0").get<double>(), l.at("levels").get<int>());
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        reject_unknown(s, {"param", "values"}, "sweep");
        read(s, "param", cfg.sweep_param);
        read(s, "values", cfg.sweep_values);
    }
    if (j.contains("cubature")) {
        const json& c = j.at("cubature");
        reject_unknown(c, {"n", "delta", "sigma"}, "cubature");
        read(c, "n", cfg.cubature_n);
        read(c, "delta", cfg.cubature_delta);
        read(c, "sigma", cfg.cubature_sigma);
    }
    read(j, "random_states", cfg.random_states);
    cfg.validate();
    return cfg;
}

std::string format_time(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", t);
    return buf;
}

void write_csv_number(std::ostream& out, double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << buf;
}

} // namespace

void ExperimentConfig::validate() const {
    params.validate();
    if (grid.p1 < 2 || grid.p2 < 2 || !(grid.l1 > 0.0) || !(grid.l2 > 0.0)) {
        throw std::invalid_argument("config: bad grid");
    }
    if (rule.n < 1 || rule.n_angular < 0) {
        throw std::invalid_argument("config: bad rule size");
    }
    if (!(t_final > 0.0)) {
        throw std::invalid_argument("config: t_final must be positive");
    }
    if (tau_choice == TauChoice::Fixed && !(tau > 0.0)) {
        throw std::invalid_argument("config: tau must be positive");
    }
    if (tau_choice == TauChoice::Adaptive && stepper != StepperKind::ForwardEuler) {
        throw std::invalid_argument("config: adaptive steps are available for fe only");
    }
    if (!(tau_factor > 0.0)) {
        throw std::invalid_argument("config: tau_factor must be positive");
    }
    if (!(initial.s0 >= 0.0) || initial.sigma < 0.0) {
        throw std::invalid_argument("config: bad initial condition");
    }
    if (sweep_param != "a" && sweep_param != "delta") {
        throw std::invalid_argument("config: sweep param must be \"a\" or \"delta\"");
    }
    if (random_states < 0) {
        throw std::invalid_argument("config: random_states must be non-negative");
    }
}

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
        return parse(j);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("config: cannot open " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

Grid make_grid(const GridSpec& spec) { return Grid::spanning(spec.p1, spec.p2, spec.l1, spec.l2); }

CubatureRule make_rule(const RuleSpec& spec, double delta) {
    switch (spec.kind) {
    case RuleKind::GaussLegendreProduct:
        return product_disk_rule(spec.n, delta, spec.n_angular > 0 ? spec.n_angular : spec.n);
    case RuleKind::ElhayKautsky:
        return elhay_kautsky_rule(spec.n, delta, spec.radial);
    case RuleKind::FourPointSymmetric:
        return four_point_disk_rule(delta);
    }
    throw std::invalid_argument("make_rule: bad kind");
}

SirSystem make_system(const ExperimentConfig& cfg) {
    return SirSystem(make_grid(cfg.grid), cfg.params, make_rule(cfg.rule, cfg.params.delta), cfg.interp);
}

State initial_state(const Grid& grid, const InitialSpec& spec) {
    const double sigma = spec.sigma > 0.0 ? spec.sigma : std::min(grid.l1(), grid.l2()) / 10.0;
    const double xc = grid.l1() / 2.0;
    const double yc = grid.l2() / 2.0;
    State st{Field(grid, spec.s0), Field(grid), Field(grid), 0.0};
    for (int k = 0; k < grid.p1(); ++k) {
        for (int l = 0; l < grid.p2(); ++l) {
            const double u = (grid.x(k) - xc) / sigma;
            const double v = (grid.y(l) - yc) / sigma;
            st.i(k, l) = std::exp(-0.5 * (u * u + v * v)) / (2.0 * kPi * sigma * sigma);
        }
    }
    return st;
}

State initial_state(const ExperimentConfig& cfg) { return initial_state(make_grid(cfg.grid), cfg.initial); }

State random_state(const Grid& grid, std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> value(0.0, scale);
    std::uniform_int_distribution<int> zero(0, 4);
    State st{Field(grid), Field(grid), Field(grid), 0.0};
    for (Field* f : {&st.s, &st.i, &st.r}) {
        for (double& x : f->values()) {
            const bool is_zero = zero(rng) == 0;
            const double draw = value(rng);
            x = is_zero ? 0.0 : draw;
        }
    }
    return st;
}

double error_norm(const State& field, const State& reference, Norm p) {
    require_consistent(field);
    require_consistent(reference);
    require_same_grid(field.s, reference.s, "error_norm");
    const Grid& g = field.grid();
    const double area = g.h1() * g.h2();
    double acc = 0.0;
    const Field* a[] = {&field.s, &field.i, &field.r};
    const Field* b[] = {&reference.s, &reference.i, &reference.r};
    for (int f = 0; f < 3; ++f) {
        const auto x = a[f]->values();
        const auto y = b[f]->values();
        for (std::size_t n = 0; n < x.size(); ++n) {
            const double d = std::abs(x[n] - y[n]);
            switch (p) {
            case Norm::L1:
                acc += d;
                break;
            case Norm::L2:
                acc += d * d;
                break;
            case Norm::Max:
                acc = std::max(acc, d);
                break;
            }
        }
    }
    switch (p) {
    case Norm::L1:
        return area * acc;
    case Norm::L2:
        return std::sqrt(area * acc);
    case Norm::Max:
        return acc;
    }
    return acc;
}

double resolve_tau(const ExperimentConfig& cfg, const SirSystem& sys, const State& initial) {
    switch (cfg.tau_choice) {
    case TauChoice::Fixed:
        return cfg.tau;
    case TauChoice::Bound:
        return cfg.tau_factor * improved_bound(initial, sys, ssp_coefficient(cfg.stepper)).rk_scaled;
    case TauChoice::Adaptive:
        return 0.0;
    }
    return 0.0;
}

SimulationResult run(const ExperimentConfig& cfg, const SirSystem& sys, const State& initial,
                     std::function<void(const State&, std::size_t)> observer) {
    SimulationOptions opt;
    opt.t_final = cfg.t_final;
    opt.stepper = cfg.stepper;
    opt.policy = cfg.tau_choice == TauChoice::Adaptive ? TauPolicy::Adaptive : TauPolicy::Fixed;
    opt.tau = resolve_tau(cfg, sys, initial);
    opt.on_violation = cfg.on_violation;
    opt.observer = std::move(observer);
    return simulate(initial, sys, opt);
}

std::vector<double> halving_ladder(double tau0, int levels) {
    if (!(tau0 > 0.0) || levels < 1) {
        throw std::invalid_argument("halving_ladder: need tau0 > 0 and at least one level");
    }
    std::vector<double> ladder{tau0};
    for (int k = 1; k < levels; ++k) {
        ladder.push_back(ladder.back() / 2.0);
    }
    return ladder;
}

std::vector<ConvergenceRow> convergence_table(const std::vector<double>& ladder,
                                              const std::function<State(double)>& solve, Norm p) {
    if (ladder.empty()) {
        throw std::invalid_argument("convergence_table: empty ladder");
    }
    for (std::size_t n = 0; n < ladder.size(); ++n) {
        if (!(ladder[n] > 0.0)) {
            throw std::invalid_argument("convergence_table: steps must be positive");
        }
        if (n > 0 && std::abs(ladder[n - 1] - 2.0 * ladder[n]) > 1e-12 * ladder[n - 1]) {
            throw std::invalid_argument("convergence_table: ladder must halve at every row");
        }
    }
    const State reference = solve(ladder.back() / 2.0);
    std::vector<ConvergenceRow> rows;
    for (double tau : ladder) {
        ConvergenceRow row{tau, error_norm(solve(tau), reference, p), std::nullopt};
        if (!rows.empty()) {
            const double prev = rows.back().error;
            if (prev > 0.0 && row.error > 0.0) {
                row.order = std::log2(prev / row.error);
            }
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<ConvergenceRow> convergence_table(const ExperimentConfig& cfg, const std::vector<double>& ladder) {
    const SirSystem sys = make_system(cfg);
    const State initial = initial_state(cfg);
    return convergence_table(ladder, [&](double tau) {
        SimulationOptions opt;
        opt.t_final = cfg.t_final;
        opt.stepper = cfg.stepper;
        opt.tau = tau;
        return simulate(initial, sys, opt).final_state;
    });
}

bool fe_preserves_properties(const ExperimentConfig& cfg, const SirSystem& sys, const State& initial, double tau) {
    SimulationOptions opt;
    opt.t_final = cfg.t_final;
    opt.stepper = StepperKind::ForwardEuler;
    opt.tau = tau;
    opt.on_violation = ViolationPolicy::Abort;
    return !simulate(initial, sys, opt).aborted;
}

Threshold empirical_threshold(const ExperimentConfig& cfg, double lo, double hi, double rel_tol) {
    if (!(lo > 0.0) || !(hi > lo)) {
        throw std::invalid_argument("empirical_threshold: need 0 < lo < hi");
    }
    const SirSystem sys = make_system(cfg);
    const State initial = initial_state(cfg);
    Threshold out;
    if (!fe_preserves_properties(cfg, sys, initial, lo)) {
        out.lower_fails = true;
        out.tau_e = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    if (fe_preserves_properties(cfg, sys, initial, hi)) {
        out.upper_passes = true;
        out.tau_e = hi;
        return out;
    }
    while (hi - lo > rel_tol * lo) {
        const double mid = 0.5 * (lo + hi);
        if (fe_preserves_properties(cfg, sys, initial, mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.tau_e = lo;
    return out;
}

BoundsRow bounds_row(const ExperimentConfig& cfg, double value, bool with_threshold) {
    ExperimentConfig row_cfg = cfg;
    if (cfg.sweep_param == "delta") {
        row_cfg.params.delta = value;
    } else {
        row_cfg.params.a = value;
    }
    const SirSystem sys = make_system(row_cfg);
    const StepBounds b = improved_bound(initial_state(row_cfg), sys);
    BoundsRow row{value, b.pessimistic, b.improved, {}};
    if (with_threshold) {
        row.threshold = empirical_threshold(row_cfg, b.improved, 4.0 * b.improved);
    } else {
        row.threshold.tau_e = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

std::vector<BoundsRow> bounds_table(const ExperimentConfig& cfg, bool with_threshold) {
    std::vector<BoundsRow> rows;
    for (double value : cfg.sweep_values) {
        rows.push_back(bounds_row(cfg, value, with_threshold));
    }
    return rows;
}

double erf_test_exact(double delta, double sigma) {
    return 5000.0 * (2.0 * delta - std::sqrt(2.0 * kPi) * sigma * std::erf(delta / (std::numbers::sqrt2 * sigma)));
}

double erf_test_integrand(double delta, double sigma, const CubaturePoint& p) {
    const double g1 = 100.0 * (delta - p.r);
    const double g2 = 1.0 + std::sin(p.theta);
    const double i0 = 100.0 / (2.0 * kPi * sigma * sigma) * std::exp(-p.r * p.r / (2.0 * sigma * sigma));
    return g1 * g2 * i0;
}

std::vector<CubatureRow> cubature_error_study(const RuleSpec& spec, const std::vector<int>& n_list,
                                              const std::vector<double>& delta_list, double sigma) {
    std::vector<CubatureRow> rows;
    for (int n : n_list) {
        RuleSpec s = spec;
        s.n = n;
        for (double delta : delta_list) {
            const CubatureRule rule = make_rule(s, delta);
            const double value =
                integrate(rule, [&](const CubaturePoint& p) { return erf_test_integrand(delta, sigma, p); });
            const double exact = erf_test_exact(delta, sigma);
            rows.push_back({n, delta, value, exact, std::abs(value - exact)});
        }
    }
    return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("loglog_slope: need two or more matching points");
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
        mx += std::log(x[n]);
        my += std::log(y[n]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
        const double dx = std::log(x[n]) - mx;
        sxy += dx * (std::log(y[n]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
    out << "tau,error,order\n";
    for (const ConvergenceRow& r : rows) {
        write_csv_number(out, r.tau);
        out << ',';
        write_csv_number(out, r.error);
        out << ',';
        if (r.order) {
            write_csv_number(out, *r.order);
        }
        out << '\n';
    }
}

void write_bounds_csv(std::ostream& out, const std::string& param, const std::vector<BoundsRow>& rows) {
    out << param << ",tau_tilde,tau_tilde_over_tau_e,tau,tau_over_tau_e,tau_e\n";
    for (const BoundsRow& r : rows) {
        for (double x : {r.param, r.tau_tilde, r.tau_tilde_ratio(), r.tau, r.tau_ratio()}) {
            write_csv_number(out, x);
            out << ',';
        }
        write_csv_number(out, r.threshold.tau_e);
        out << '\n';
    }
}

void write_cubature_csv(std::ostream& out, const std::vector<CubatureRow>& rows) {
    out << "n,delta,value,exact,error\n";
    for (const CubatureRow& r : rows) {
        out << r.n << ',';
        write_csv_number(out, r.delta);
        out << ',';
        write_csv_number(out, r.value);
        out << ',';
        write_csv_number(out, r.exact);
        out << ',';
        write_csv_number(out, r.error);
        out << '\n';
    }
}

void write_snapshot(const std::filesystem::path& dir, const State& state) {
    std::filesystem::create_directories(dir);
    const std::string t = format_time(state.t);
    const std::pair<const char*, const Field*> files[] = {{"S_", &state.s}, {"I_", &state.i}, {"R_", &state.r}};
    for (const auto& [prefix, field] : files) {
        std::ofstream out(dir / (std::string(prefix) + t + ".csv"));
        if (!out) {
            throw std::runtime_error("cannot write snapshot in " + dir.string());
        }
        write_field_csv(out, *field);
    }
}

} // namespace nlsir
