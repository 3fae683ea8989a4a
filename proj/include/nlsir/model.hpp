#pragma once

#include "nlsir/disk_cubature.hpp"
#include "nlsir/grid.hpp"
#include "nlsir/interp.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace nlsir {

/// Model constants. g1(r) = a (delta - r) on [0, delta), g2(theta) =
/// beta sin(theta + alpha) + beta.
struct Params {
    double a = 100.0;     // infection rate
    double b = 0.1;       // recovery rate
    double c = 0.01;      // vaccination rate
    double delta = 0.05;  // interaction radius
    double alpha = 0.0;   // wind phase
    double beta = 1.0;    // wind amplitude

    /// Throws std::invalid_argument on a, b <= 0, c < 0, delta <= 0 or beta < 0.
    void validate() const;
};

class Kernel {
public:
    explicit Kernel(const Params& params);

    const Params& params() const noexcept { return params_; }

    /// Throws std::invalid_argument for negative r.
    double g1(double r) const;
    double g2(double theta) const noexcept;
    double kappa1() const noexcept { return params_.a * params_.delta; }
    double kappa2() const noexcept { return 2.0 * params_.beta; }

private:
    Params params_;
};

struct State {
    Field s;
    Field i;
    Field r;
    double t = 0.0;

    const Grid& grid() const noexcept { return s.grid(); }
};

/// Throws std::invalid_argument unless s, i and r share one grid.
void require_consistent(const State& state);

/// Elementwise S + I + R.
Field total_density(const State& state);

/// The discrete nonlocal infection term
///   T_kl = sum_m w_m g1(r_m) g2(theta_m) I~(x_k + dx_m, y_l + dy_m).
///
/// Evaluation points are shared by every time level, so their cell lookups
/// are computed once here. For bilinear interpolation the whole map is
/// folded into a sparse matrix acting on the grid values of I.
class InfectionOperator {
public:
    InfectionOperator(const Grid& grid, const Kernel& kernel, const CubatureRule& rule, InterpMethod method);

    const Grid& grid() const noexcept { return grid_; }
    InterpMethod method() const noexcept { return method_; }
    int ghost_rings() const noexcept { return rings_; }

    /// Sum over the rule of w_m g1(r_m) g2(theta_m).
    double kernel_mass() const noexcept { return kernel_mass_; }

    Field apply(const Field& infected) const;

private:
    struct Tap {
        CellLocation loc;
        double coeff;
    };

    Grid grid_;
    InterpMethod method_;
    int rings_;
    double kernel_mass_ = 0.0;

    // bilinear: CSR rows over grid nodes
    std::vector<std::size_t> row_start_;
    std::vector<std::uint32_t> col_;
    std::vector<double> val_;

    // other methods: per grid node, the in-band cubature taps
    std::vector<std::size_t> tap_start_;
    std::vector<Tap> taps_;
};

/// T field for one infected field (builds a throwaway operator).
/// Throws std::invalid_argument when rule.delta() differs from the kernel's.
Field assemble_T(const Field& infected, const Kernel& kernel, const CubatureRule& rule, InterpMethod method);

struct Derivatives {
    Field ds;
    Field di;
    Field dr;
};

/// The semi-discrete method-of-lines system for one configuration.
class SirSystem {
public:
    SirSystem(const Grid& grid, const Params& params, const CubatureRule& rule, InterpMethod method);

    const Grid& grid() const noexcept { return op_.grid(); }
    const Params& params() const noexcept { return kernel_.params(); }
    const Kernel& kernel() const noexcept { return kernel_; }
    const CubatureRule& rule() const noexcept { return rule_; }
    InterpMethod method() const noexcept { return op_.method(); }
    const InfectionOperator& infection() const noexcept { return op_; }

    Field infection_term(const Field& infected) const { return op_.apply(infected); }

    /// ds = -S T - c S, di = S T - b I, dr = b I + c S.
    Derivatives rhs(const State& state) const;
    Derivatives rhs(const State& state, const Field& t_field) const;

private:
    Kernel kernel_;
    CubatureRule rule_;
    InfectionOperator op_;
};

Derivatives rhs(const State& state, const Kernel& kernel, const CubatureRule& rule, InterpMethod method);

} // namespace nlsir
