#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace nlsir {

/// Uniform P1 x P2 lattice over [0, L1] x [0, L2]. Node (k, l), 0-based,
/// sits at (k * h1, l * h2).
class Grid {
public:
    Grid(int p1, int p2, double h1, double h2);

    /// P1 x P2 nodes spanning [0, l1] x [0, l2].
    static Grid spanning(int p1, int p2, double l1 = 1.0, double l2 = 1.0);

    int p1() const noexcept { return p1_; }
    int p2() const noexcept { return p2_; }
    double h1() const noexcept { return h1_; }
    double h2() const noexcept { return h2_; }
    double l1() const noexcept { return (p1_ - 1) * h1_; }
    double l2() const noexcept { return (p2_ - 1) * h2_; }
    double x(int k) const noexcept { return k * h1_; }
    double y(int l) const noexcept { return l * h2_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(p1_) * static_cast<std::size_t>(p2_); }
    std::size_t index(int k, int l) const noexcept {
        return static_cast<std::size_t>(k) * static_cast<std::size_t>(p2_) + static_cast<std::size_t>(l);
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int p1_;
    int p2_;
    double h1_;
    double h2_;
};

/// One species on a grid. Values are stored row-major with the x index k
/// selecting the row.
class Field {
public:
    explicit Field(const Grid& grid, double fill = 0.0);
    Field(const Grid& grid, std::vector<double> values);

    const Grid& grid() const noexcept { return grid_; }

    double& operator()(int k, int l) noexcept { return values_[grid_.index(k, l)]; }
    double operator()(int k, int l) const noexcept { return values_[grid_.index(k, l)]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    double max() const;
    double min() const;
    double max_abs() const;
    bool all_finite() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Throws std::invalid_argument unless both fields live on the same grid.
void require_same_grid(const Field& a, const Field& b, const char* what);

/// Row-major CSV, comma separated, %.17g, no header.
void write_field_csv(std::ostream& out, const Field& field);
Field read_field_csv(std::istream& in, const Grid& grid);

} // namespace nlsir
