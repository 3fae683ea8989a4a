#pragma once

#include "nlsir/grid.hpp"

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace nlsir {

enum class InterpMethod {
    Bilinear,
    CubicSpline,
    MonotoneCubic,
};

constexpr bool positivity_preserving(InterpMethod m) noexcept { return m != InterpMethod::CubicSpline; }

std::string_view to_string(InterpMethod m);
InterpMethod parse_interp_method(std::string_view name);

/// Cell of the ghost-padded lattice containing a point, with local
/// coordinates u, v in [0, 1]. Indices are padded-lattice indices.
struct CellLocation {
    int i;
    int j;
    double u;
    double v;
};

/// The grid surrounded by `rings` layers of zero-valued ghost nodes.
class PaddedLattice {
public:
    PaddedLattice(const Grid& grid, int rings);

    const Grid& grid() const noexcept { return grid_; }
    int rings() const noexcept { return rings_; }
    int n1() const noexcept { return grid_.p1() + 2 * rings_; }
    int n2() const noexcept { return grid_.p2() + 2 * rings_; }
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n2()) + static_cast<std::size_t>(j);
    }

    /// Empty when (x, y) is beyond the ghost band. A point on a cell edge is
    /// attributed to the lower-index cell.
    std::optional<CellLocation> locate(double x, double y) const;

    /// Padded copy of the field values, zeros in the ghost rings.
    std::vector<double> pad(const Field& field) const;

private:
    Grid grid_;
    int rings_;
};

/// Piecewise interpolant of a field with zero exterior data.
///
/// Bilinear and MonotoneCubic work on the padded lattice. MonotoneCubic uses
/// modified-Akima slopes clipped by a monotonicity limiter, applied along x
/// and then along y, so every sample stays within the range of the data.
/// CubicSpline is the tensor-product not-a-knot spline of the grid values,
/// evaluated as a bicubic Hermite patch; ghost nodes carry zero value and
/// zero derivatives.
class Interpolant {
public:
    Interpolant(const Field& field, InterpMethod method, int ghost_rings = 1);

    const PaddedLattice& lattice() const noexcept { return lattice_; }
    InterpMethod method() const noexcept { return method_; }

    double operator()(double x, double y) const;
    double eval(const CellLocation& loc) const;

private:
    double eval_bilinear(const CellLocation& loc) const;
    double eval_hermite(const CellLocation& loc) const;
    double eval_monotone(const CellLocation& loc) const;

    PaddedLattice lattice_;
    InterpMethod method_;
    std::vector<double> values_;
    std::vector<double> fx_;  // d/dx at padded nodes (spline, monotone x pass)
    std::vector<double> fy_;  // spline only
    std::vector<double> fxy_; // spline only
};

/// Bilinear weights of the four corners of a cell, ordered
/// (i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1).
std::array<double, 4> bilinear_weights(double u, double v) noexcept;

double sample(const Field& field, InterpMethod method, double x, double y);
std::vector<double> sample_many(const Field& field, InterpMethod method,
                                std::span<const std::pair<double, double>> points);

namespace detail {

/// First derivatives at the nodes of the not-a-knot cubic spline through
/// equally spaced samples.
std::vector<double> not_a_knot_slopes(std::span<const double> values, double h);

/// Modified-Akima slopes with a monotonicity limiter: zero at local extrema,
/// magnitude at most three times the smaller adjacent secant.
std::vector<double> limited_akima_slopes(std::span<const double> values, double h);

/// Limited modified-Akima slope at node `at` of equally spaced values. Missing
/// secants beyond either end are extrapolated linearly, so a window cut at
/// the true end of a line gives the same slopes as the whole line.
double limited_akima_slope(std::span<const double> values, int at, double h);

double hermite(double y0, double y1, double s0, double s1, double h, double t) noexcept;

} // namespace detail

} // namespace nlsir
