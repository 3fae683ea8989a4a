#include "nlsir/properties.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace nlsir {

namespace {

struct Extreme {
    double value;
    std::size_t at;
};

Offense offense_at(const Grid& g, Species species, std::size_t n) {
    const auto p2 = static_cast<std::size_t>(g.p2());
    return {species, static_cast<int>(n / p2), static_cast<int>(n % p2)};
}

} // namespace

std::string_view to_string(Species s) {
    switch (s) {
    case Species::S:
        return "S";
    case Species::I:
        return "I";
    case Species::R:
        return "R";
    case Species::Total:
        return "S+I+R";
    }
    return "?";
}

PropertyReport check_step(const State& prev, const State& next, double tol_neg, double tol_cons,
                          std::size_t step_index) {
    require_consistent(prev);
    require_consistent(next);
    require_same_grid(prev.s, next.s, "check_step");
    const Grid& g = prev.grid();

    PropertyReport rep;
    rep.step_index = step_index;

    // D1
    Extreme low{std::numeric_limits<double>::infinity(), 0};
    Species low_species = Species::S;
    const Field* fields[] = {&next.s, &next.i, &next.r};
    const Species names[] = {Species::S, Species::I, Species::R};
    for (int f = 0; f < 3; ++f) {
        const auto v = fields[f]->values();
        for (std::size_t n = 0; n < v.size(); ++n) {
            if (v[n] < low.value) {
                low = {v[n], n};
                low_species = names[f];
            }
        }
    }
    rep.worst_negative = std::min(0.0, low.value);
    rep.d1_ok = low.value >= -tol_neg;

    // D2
    const auto ps = prev.s.values(), pi = prev.i.values(), pr = prev.r.values();
    const auto ns = next.s.values(), ni = next.i.values(), nr = next.r.values();
    double scale = 0.0;
    Extreme drift{0.0, 0};
    Extreme s_up{-std::numeric_limits<double>::infinity(), 0};
    Extreme r_down{-std::numeric_limits<double>::infinity(), 0};
    for (std::size_t n = 0; n < ps.size(); ++n) {
        const double before = ps[n] + pi[n] + pr[n];
        const double after = ns[n] + ni[n] + nr[n];
        scale = std::max(scale, std::abs(before));
        if (std::abs(after - before) > drift.value) {
            drift = {std::abs(after - before), n};
        }
        if (ns[n] - ps[n] > s_up.value) {
            s_up = {ns[n] - ps[n], n};
        }
        if (pr[n] - nr[n] > r_down.value) {
            r_down = {pr[n] - nr[n], n};
        }
    }
    rep.conservation_drift = scale > 0.0 ? drift.value / scale : drift.value;
    rep.d2_ok = rep.conservation_drift <= tol_cons;

    // D3, D4
    rep.monotonicity_violation_s = std::max(0.0, s_up.value);
    rep.monotonicity_violation_r = std::max(0.0, r_down.value);
    rep.d3_ok = s_up.value <= tol_neg;
    rep.d4_ok = r_down.value <= tol_neg;

    if (!rep.d1_ok) {
        rep.location = offense_at(g, low_species, low.at);
    } else if (!rep.d2_ok) {
        rep.location = offense_at(g, Species::Total, drift.at);
    } else if (!rep.d3_ok) {
        rep.location = offense_at(g, Species::S, s_up.at);
    } else if (!rep.d4_ok) {
        rep.location = offense_at(g, Species::R, r_down.at);
    }
    return rep;
}

double default_tol_neg(const State& reference) { return 1e-12 * total_density(reference).max(); }

std::string report_csv_header() { return "step,d1,d2,d3,d4,worst_negative,conservation_drift"; }

std::string to_csv_line(const PropertyReport& r) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu,%d,%d,%d,%d,%.17g,%.17g", r.step_index, r.d1_ok ? 1 : 0, r.d2_ok ? 1 : 0,
                  r.d3_ok ? 1 : 0, r.d4_ok ? 1 : 0, r.worst_negative, r.conservation_drift);
    return buf;
}

} // namespace nlsir
