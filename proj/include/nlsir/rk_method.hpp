#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nlsir {

/// Explicit RK method in canonical Shu-Osher form
///
///   Q(0) = u,
///   Q(i) = v_i u + sum_{j<i} alpha_ij (Q(j) + tau/C F(Q(j))),   i = 1..m,
///
/// with Q(m) the new solution. Row 0 is the trivial stage (v_0 = 1).
struct RKMethod {
    std::string name;
    int m = 0;
    std::vector<std::vector<double>> alpha; // (m+1) x m, lower triangular
    std::vector<double> v;                  // m+1
    double ssp_c = 1.0;
    int order = 1;

    /// Throws std::invalid_argument on bad shape, negative entries, a
    /// nonzero entry on or above the diagonal, or a row sum off 1 by more
    /// than `tol`.
    void validate(double tol = 1e-14) const;

    /// max_i |v_i + sum_j alpha_ij - 1|
    double consistency_residual() const;
};

struct ButcherTableau {
    std::vector<std::vector<double>> a; // m x m
    std::vector<double> b;
    std::vector<double> c;
};

ButcherTableau to_butcher(const RKMethod& rk);

/// Largest residual among the rooted-tree order conditions of orders
/// 1..p (p <= 4).
double order_condition_residual(const ButcherTableau& t, int p);

RKMethod forward_euler_method();

/// SSPRK22, SSPRK33 and SSPRK104.
const std::vector<RKMethod>& method_registry();

/// Case-insensitive lookup in the registry; throws std::out_of_range.
const RKMethod& find_method(std::string_view name);

} // namespace nlsir
