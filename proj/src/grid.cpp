#include "nlsir/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace nlsir {

Grid::Grid(int p1, int p2, double h1, double h2) : p1_(p1), p2_(p2), h1_(h1), h2_(h2) {
    if (p1 < 2 || p2 < 2) {
        throw std::invalid_argument("Grid: need at least two points per axis");
    }
    if (!(h1 > 0.0) || !(h2 > 0.0) || !std::isfinite(h1) || !std::isfinite(h2)) {
        throw std::invalid_argument("Grid: spacings must be positive and finite");
    }
}

Grid Grid::spanning(int p1, int p2, double l1, double l2) {
    if (p1 < 2 || p2 < 2) {
        throw std::invalid_argument("Grid: need at least two points per axis");
    }
    return Grid(p1, p2, l1 / (p1 - 1), l2 / (p2 - 1));
}

Field::Field(const Grid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

Field::Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw std::invalid_argument("Field: value count does not match grid");
    }
}

double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

bool Field::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void require_same_grid(const Field& a, const Field& b, const char* what) {
    if (!(a.grid() == b.grid())) {
        throw std::invalid_argument(std::string(what) + ": fields live on different grids");
    }
}

void write_field_csv(std::ostream& out, const Field& field) {
    const Grid& g = field.grid();
    char buf[32];
    for (int k = 0; k < g.p1(); ++k) {
        for (int l = 0; l < g.p2(); ++l) {
            std::snprintf(buf, sizeof buf, "%.17g", field(k, l));
            if (l > 0) {
                out << ',';
            }
            out << buf;
        }
        out << '\n';
    }
}

Field read_field_csv(std::istream& in, const Grid& grid) {
    Field field(grid);
    std::string line;
    int k = 0;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (k >= grid.p1()) {
            throw std::invalid_argument("read_field_csv: too many rows");
        }
        std::istringstream row(line);
        std::string cell;
        int l = 0;
        while (std::getline(row, cell, ',')) {
            if (l >= grid.p2()) {
                throw std::invalid_argument("read_field_csv: too many columns");
            }
            field(k, l++) = std::stod(cell);
        }
        if (l != grid.p2()) {
            throw std::invalid_argument("read_field_csv: too few columns");
        }
        ++k;
    }
    if (k != grid.p1()) {
        throw std::invalid_argument("read_field_csv: too few rows");
    }
    return field;
}

} // namespace nlsir
