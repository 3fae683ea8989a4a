#include "nlsir/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nlsir {

std::string_view to_string(InterpMethod m) {
    switch (m) {
    case InterpMethod::Bilinear:
        return "bilinear";
    case InterpMethod::CubicSpline:
        return "spline";
    case InterpMethod::MonotoneCubic:
        return "monotone";
    }
    return "unknown";
}

InterpMethod parse_interp_method(std::string_view name) {
    if (name == "bilinear") {
        return InterpMethod::Bilinear;
    }
    if (name == "spline" || name == "cubic-spline") {
        return InterpMethod::CubicSpline;
    }
    if (name == "monotone" || name == "makima") {
        return InterpMethod::MonotoneCubic;
    }
    throw std::invalid_argument("unknown interpolation method: " + std::string(name));
}

PaddedLattice::PaddedLattice(const Grid& grid, int rings) : grid_(grid), rings_(rings) {
    if (rings < 1) {
        throw std::invalid_argument("PaddedLattice: need at least one ghost ring");
    }
}

std::optional<CellLocation> PaddedLattice::locate(double x, double y) const {
    const double sx = x / grid_.h1() + rings_;
    const double sy = y / grid_.h2() + rings_;
    if (!(sx >= 0.0) || !(sy >= 0.0) || sx > n1() - 1 || sy > n2() - 1) {
        return std::nullopt;
    }
    const int i = std::max(static_cast<int>(std::ceil(sx)) - 1, 0);
    const int j = std::max(static_cast<int>(std::ceil(sy)) - 1, 0);
    return CellLocation{i, j, sx - i, sy - j};
}

std::vector<double> PaddedLattice::pad(const Field& field) const {
    std::vector<double> out(static_cast<std::size_t>(n1()) * static_cast<std::size_t>(n2()), 0.0);
    for (int k = 0; k < grid_.p1(); ++k) {
        for (int l = 0; l < grid_.p2(); ++l) {
            out[index(k + rings_, l + rings_)] = field(k, l);
        }
    }
    return out;
}

std::array<double, 4> bilinear_weights(double u, double v) noexcept {
    return {(1.0 - u) * (1.0 - v), u * (1.0 - v), (1.0 - u) * v, u * v};
}

namespace detail {

double hermite(double y0, double y1, double s0, double s1, double h, double t) noexcept {
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * h * s0 + (-2.0 * t3 + 3.0 * t2) * y1 +
           (t3 - t2) * h * s1;
}

std::vector<double> not_a_knot_slopes(std::span<const double> y, double h) {
    const std::size_t n = y.size();
    if (n < 2) {
        throw std::invalid_argument("not_a_knot_slopes: need at least two samples");
    }
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        d[i] = (y[i + 1] - y[i]) / h;
    }
    std::vector<double> s(n);
    if (n == 2) {
        s[0] = s[1] = d[0];
        return s;
    }
    if (n == 3) {
        s[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
        s[1] = (y[2] - y[0]) / (2.0 * h);
        s[2] = (y[0] - 4.0 * y[1] + 3.0 * y[2]) / (2.0 * h);
        return s;
    }
    // Unknowns s[1..n-2]; the end slopes are eliminated with the not-a-knot
    // conditions s0 = s2 + 2(d0 - d1) and s[n-1] = s[n-3] + 2(d[n-2] - d[n-3]).
    const std::size_t m = n - 2;
    std::vector<double> lower(m, 1.0);
    std::vector<double> diag(m, 4.0);
    std::vector<double> upper(m, 1.0);
    std::vector<double> rhs(m);
    for (std::size_t r = 0; r < m; ++r) {
        rhs[r] = 3.0 * (d[r] + d[r + 1]);
    }
    diag[0] = 2.0;
    rhs[0] = 0.5 * (d[0] + 5.0 * d[1]);
    diag[m - 1] = 2.0;
    rhs[m - 1] = 0.5 * (5.0 * d[n - 3] + d[n - 2]);

    // Thomas algorithm
    for (std::size_t r = 1; r < m; ++r) {
        const double f = lower[r] / diag[r - 1];
        diag[r] -= f * upper[r - 1];
        rhs[r] -= f * rhs[r - 1];
    }
    s[m] = rhs[m - 1] / diag[m - 1];
    for (std::size_t r = m - 1; r-- > 0;) {
        s[r + 1] = (rhs[r] - upper[r] * s[r + 2]) / diag[r];
    }
    s[0] = s[2] + 2.0 * (d[0] - d[1]);
    s[n - 1] = s[n - 3] + 2.0 * (d[n - 2] - d[n - 3]);
    return s;
}

double limited_akima_slope(std::span<const double> y, int at, double h) {
    const int n = static_cast<int>(y.size());
    if (n < 3) {
        throw std::invalid_argument("limited_akima_slope: need at least three samples");
    }
    auto secant = [&](int k) -> double {
        if (k >= 0 && k <= n - 2) {
            return (y[k + 1] - y[k]) / h;
        }
        const double d0 = (y[1] - y[0]) / h;
        const double d1 = (y[2] - y[1]) / h;
        const double e0 = (y[n - 1] - y[n - 2]) / h;
        const double e1 = (y[n - 2] - y[n - 3]) / h;
        if (k == -1) {
            return 2.0 * d0 - d1;
        }
        if (k == -2) {
            return 3.0 * d0 - 2.0 * d1;
        }
        if (k == n - 1) {
            return 2.0 * e0 - e1;
        }
        return 3.0 * e0 - 2.0 * e1; // k == n
    };
    const double dm2 = secant(at - 2);
    const double dm1 = secant(at - 1);
    const double d0 = secant(at);
    const double d1 = secant(at + 1);

    if (dm1 * d0 <= 0.0) {
        return 0.0;
    }
    const double w1 = std::abs(d1 - d0) + 0.5 * std::abs(d1 + d0);
    const double w2 = std::abs(dm1 - dm2) + 0.5 * std::abs(dm1 + dm2);
    double s = w1 + w2 > 0.0 ? (w1 * dm1 + w2 * d0) / (w1 + w2) : 0.5 * (dm1 + d0);
    const double cap = 3.0 * std::min(std::abs(dm1), std::abs(d0));
    if (std::abs(s) > cap) {
        s = std::copysign(cap, d0);
    }
    return s;
}

std::vector<double> limited_akima_slopes(std::span<const double> y, double h) {
    std::vector<double> s(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        s[i] = limited_akima_slope(y, static_cast<int>(i), h);
    }
    return s;
}

} // namespace detail

namespace {

// Gather line `fixed` of a row-major n1 x n2 array along axis 0 (x) or 1 (y).
std::vector<double> gather(std::span<const double> a, int n1, int n2, int axis, int fixed) {
    std::vector<double> line(static_cast<std::size_t>(axis == 0 ? n1 : n2));
    for (std::size_t t = 0; t < line.size(); ++t) {
        const auto i = axis == 0 ? t : static_cast<std::size_t>(fixed);
        const auto j = axis == 0 ? static_cast<std::size_t>(fixed) : t;
        line[t] = a[i * static_cast<std::size_t>(n2) + j];
    }
    return line;
}

void scatter(std::span<double> a, int n2, int axis, int fixed, const std::vector<double>& line) {
    for (std::size_t t = 0; t < line.size(); ++t) {
        const auto i = axis == 0 ? t : static_cast<std::size_t>(fixed);
        const auto j = axis == 0 ? static_cast<std::size_t>(fixed) : t;
        a[i * static_cast<std::size_t>(n2) + j] = line[t];
    }
}

} // namespace

Interpolant::Interpolant(const Field& field, InterpMethod method, int ghost_rings)
    : lattice_(field.grid(), ghost_rings), method_(method), values_(lattice_.pad(field)) {
    const Grid& g = field.grid();
    const int n1 = lattice_.n1();
    const int n2 = lattice_.n2();
    if (method == InterpMethod::MonotoneCubic) {
        fx_.assign(values_.size(), 0.0);
        for (int j = 0; j < n2; ++j) {
            const auto line = gather(values_, n1, n2, 0, j);
            scatter(fx_, n2, 0, j, detail::limited_akima_slopes(line, g.h1()));
        }
    } else if (method == InterpMethod::CubicSpline) {
        // Nodal derivatives of the tensor spline on the real grid; the ghost
        // nodes keep zero value and zero derivatives.
        const int p1 = g.p1();
        const int p2 = g.p2();
        const auto raw = field.values();
        std::vector<double> fx(raw.size());
        std::vector<double> fy(raw.size());
        std::vector<double> fxy(raw.size());
        for (int l = 0; l < p2; ++l) {
            scatter(fx, p2, 0, l, detail::not_a_knot_slopes(gather(raw, p1, p2, 0, l), g.h1()));
        }
        for (int k = 0; k < p1; ++k) {
            scatter(fy, p2, 1, k, detail::not_a_knot_slopes(gather(raw, p1, p2, 1, k), g.h2()));
            scatter(fxy, p2, 1, k, detail::not_a_knot_slopes(gather(fx, p1, p2, 1, k), g.h2()));
        }
        fx_ = lattice_.pad(Field(g, std::move(fx)));
        fy_ = lattice_.pad(Field(g, std::move(fy)));
        fxy_ = lattice_.pad(Field(g, std::move(fxy)));
    }
}

double Interpolant::operator()(double x, double y) const {
    if (std::isnan(x) || std::isnan(y)) {
        throw std::invalid_argument("Interpolant: NaN coordinate");
    }
    const auto loc = lattice_.locate(x, y);
    return loc ? eval(*loc) : 0.0;
}

double Interpolant::eval(const CellLocation& loc) const {
    switch (method_) {
    case InterpMethod::Bilinear:
        return eval_bilinear(loc);
    case InterpMethod::CubicSpline:
        return eval_hermite(loc);
    case InterpMethod::MonotoneCubic:
        return eval_monotone(loc);
    }
    return 0.0;
}

double Interpolant::eval_bilinear(const CellLocation& loc) const {
    const auto w = bilinear_weights(loc.u, loc.v);
    return w[0] * values_[lattice_.index(loc.i, loc.j)] + w[1] * values_[lattice_.index(loc.i + 1, loc.j)] +
           w[2] * values_[lattice_.index(loc.i, loc.j + 1)] + w[3] * values_[lattice_.index(loc.i + 1, loc.j + 1)];
}

double Interpolant::eval_hermite(const CellLocation& loc) const {
    const double h1 = lattice_.grid().h1();
    const double h2 = lattice_.grid().h2();
    const auto basis = [](double t) {
        const double t2 = t * t;
        const double t3 = t2 * t;
        // value at 0, value at 1, slope at 0, slope at 1
        return std::array<double, 4>{2.0 * t3 - 3.0 * t2 + 1.0, -2.0 * t3 + 3.0 * t2, t3 - 2.0 * t2 + t, t3 - t2};
    };
    const auto bu = basis(loc.u);
    const auto bv = basis(loc.v);
    double sum = 0.0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const std::size_t idx = lattice_.index(loc.i + a, loc.j + b);
            const double au = bu[static_cast<std::size_t>(a)];
            const double cu = bu[static_cast<std::size_t>(2 + a)] * h1;
            const double bvv = bv[static_cast<std::size_t>(b)];
            const double dv = bv[static_cast<std::size_t>(2 + b)] * h2;
            sum += au * bvv * values_[idx] + cu * bvv * fx_[idx] + au * dv * fy_[idx] + cu * dv * fxy_[idx];
        }
    }
    return sum;
}

double Interpolant::eval_monotone(const CellLocation& loc) const {
    const int n2 = lattice_.n2();
    const int lo = std::max(loc.j - 2, 0);
    const int hi = std::min(loc.j + 3, n2 - 1);
    std::array<double, 6> column{};
    const double h1 = lattice_.grid().h1();
    for (int j = lo; j <= hi; ++j) {
        const std::size_t a = lattice_.index(loc.i, j);
        const std::size_t b = lattice_.index(loc.i + 1, j);
        column[static_cast<std::size_t>(j - lo)] = detail::hermite(values_[a], values_[b], fx_[a], fx_[b], h1, loc.u);
    }
    const std::span<const double> window(column.data(), static_cast<std::size_t>(hi - lo + 1));
    const double h2 = lattice_.grid().h2();
    const int at = loc.j - lo;
    const double s0 = detail::limited_akima_slope(window, at, h2);
    const double s1 = detail::limited_akima_slope(window, at + 1, h2);
    return detail::hermite(window[static_cast<std::size_t>(at)], window[static_cast<std::size_t>(at + 1)], s0, s1,
                           h2, loc.v);
}

double sample(const Field& field, InterpMethod method, double x, double y) {
    return Interpolant(field, method)(x, y);
}

std::vector<double> sample_many(const Field& field, InterpMethod method,
                                std::span<const std::pair<double, double>> points) {
    std::vector<double> out;
    out.reserve(points.size());
    if (points.empty()) {
        return out;
    }
    const Interpolant interp(field, method);
    for (const auto& [x, y] : points) {
        out.push_back(interp(x, y));
    }
    return out;
}

} // namespace nlsir
