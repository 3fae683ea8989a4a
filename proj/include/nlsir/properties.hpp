#pragma once

#include "nlsir/model.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace nlsir {

enum class Species { S, I, R, Total };

std::string_view to_string(Species s);

struct Offense {
    Species species;
    int k;
    int l;
};

/// D1: nonnegativity, D2: pointwise conservation of S + I + R,
/// D3: S non-increasing, D4: R non-decreasing.
struct PropertyReport {
    bool d1_ok = true;
    bool d2_ok = true;
    bool d3_ok = true;
    bool d4_ok = true;
    double worst_negative = 0.0;           // min(0, smallest entry of S, I, R)
    double conservation_drift = 0.0;       // max |d(S+I+R)| / max |S+I+R| of prev
    double monotonicity_violation_s = 0.0; // max(0, max(S_next - S_prev))
    double monotonicity_violation_r = 0.0; // max(0, max(R_prev - R_next))
    std::optional<Offense> location;       // worst point of the first failed check
    std::size_t step_index = 0;

    bool ok() const noexcept { return d1_ok && d2_ok && d3_ok && d4_ok; }
};

/// Throws std::invalid_argument when the states live on different grids.
PropertyReport check_step(const State& prev, const State& next, double tol_neg, double tol_cons,
                          std::size_t step_index = 0);

/// 1e-12 times the largest total density of `reference`.
double default_tol_neg(const State& reference);
inline constexpr double default_tol_cons = 1e-12;

std::string report_csv_header();
std::string to_csv_line(const PropertyReport& report);

} // namespace nlsir
