#include "nlsir/rk_method.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace nlsir {

namespace {

RKMethod make_method(std::string name, int m, double ssp_c, int order) {
    RKMethod rk;
    rk.name = std::move(name);
    rk.m = m;
    rk.ssp_c = ssp_c;
    rk.order = order;
    rk.alpha.assign(static_cast<std::size_t>(m + 1), std::vector<double>(static_cast<std::size_t>(m), 0.0));
    rk.v.assign(static_cast<std::size_t>(m + 1), 0.0);
    rk.v[0] = 1.0;
    return rk;
}

RKMethod ssprk22() {
    RKMethod rk = make_method("SSPRK22", 2, 1.0, 2);
    rk.alpha[1][0] = 1.0;
    rk.v[2] = 0.5;
    rk.alpha[2][1] = 0.5;
    return rk;
}

RKMethod ssprk33() {
    RKMethod rk = make_method("SSPRK33", 3, 1.0, 3);
    rk.alpha[1][0] = 1.0;
    rk.v[2] = 0.75;
    rk.alpha[2][1] = 0.25;
    rk.v[3] = 1.0 / 3.0;
    rk.alpha[3][2] = 2.0 / 3.0;
    return rk;
}

// Ketcheson's ten-stage fourth-order method.
RKMethod ssprk104() {
    RKMethod rk = make_method("SSPRK104", 10, 6.0, 4);
    for (int i = 1; i <= 4; ++i) {
        rk.alpha[i][i - 1] = 1.0;
    }
    rk.v[5] = 3.0 / 5.0;
    rk.alpha[5][4] = 2.0 / 5.0;
    for (int i = 6; i <= 9; ++i) {
        rk.alpha[i][i - 1] = 1.0;
    }
    rk.v[10] = 1.0 / 25.0;
    rk.alpha[10][4] = 9.0 / 25.0;
    rk.alpha[10][9] = 3.0 / 5.0;
    return rk;
}

using Vec = std::vector<double>;

double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * y[i];
    }
    return s;
}

Vec matvec(const std::vector<Vec>& a, const Vec& x) {
    Vec y(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        y[i] = dot(a[i], x);
    }
    return y;
}

Vec hadamard(const Vec& x, const Vec& y) {
    Vec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        z[i] = x[i] * y[i];
    }
    return z;
}

} // namespace

void RKMethod::validate(double tol) const {
    if (m < 1 || alpha.size() != static_cast<std::size_t>(m + 1) || v.size() != static_cast<std::size_t>(m + 1)) {
        throw std::invalid_argument("RKMethod " + name + ": bad shape");
    }
    if (!(ssp_c > 0.0)) {
        throw std::invalid_argument("RKMethod " + name + ": SSP coefficient must be positive");
    }
    for (int i = 0; i <= m; ++i) {
        const Vec& row = alpha[static_cast<std::size_t>(i)];
        if (row.size() != static_cast<std::size_t>(m)) {
            throw std::invalid_argument("RKMethod " + name + ": bad shape");
        }
        if (v[static_cast<std::size_t>(i)] < 0.0) {
            throw std::invalid_argument("RKMethod " + name + ": negative v");
        }
        for (int j = 0; j < m; ++j) {
            const double a = row[static_cast<std::size_t>(j)];
            if (a < 0.0) {
                throw std::invalid_argument("RKMethod " + name + ": negative alpha");
            }
            if (j >= i && a != 0.0) {
                throw std::invalid_argument("RKMethod " + name + ": method is not explicit");
            }
        }
    }
    if (consistency_residual() > tol) {
        throw std::invalid_argument("RKMethod " + name + ": rows do not sum to one");
    }
}

double RKMethod::consistency_residual() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        double s = v[i];
        for (double a : alpha[i]) {
            s += a;
        }
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

ButcherTableau to_butcher(const RKMethod& rk) {
    rk.validate();
    const auto m = static_cast<std::size_t>(rk.m);
    // Row i holds the coefficients of tau F(Q(j)) in Q(i) - u.
    std::vector<Vec> rows(m + 1, Vec(m, 0.0));
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const double a = rk.alpha[i][j];
            if (a == 0.0) {
                continue;
            }
            for (std::size_t k = 0; k < m; ++k) {
                rows[i][k] += a * rows[j][k];
            }
            rows[i][j] += a / rk.ssp_c;
        }
    }
    ButcherTableau t;
    t.a.assign(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(m));
    t.b = rows[m];
    t.c = matvec(t.a, Vec(m, 1.0));
    return t;
}

double order_condition_residual(const ButcherTableau& t, int p) {
    if (p < 1 || p > 4) {
        throw std::invalid_argument("order_condition_residual: p must be in 1..4");
    }
    const Vec ones(t.b.size(), 1.0);
    const Vec& b = t.b;
    const Vec& c = t.c;
    double worst = std::abs(dot(b, ones) - 1.0);
    if (p >= 2) {
        worst = std::max(worst, std::abs(dot(b, c) - 0.5));
    }
    if (p >= 3) {
        const Vec ac = matvec(t.a, c);
        worst = std::max(worst, std::abs(dot(b, hadamard(c, c)) - 1.0 / 3.0));
        worst = std::max(worst, std::abs(dot(b, ac) - 1.0 / 6.0));
    }
    if (p >= 4) {
        const Vec c2 = hadamard(c, c);
        const Vec ac = matvec(t.a, c);
        worst = std::max(worst, std::abs(dot(b, hadamard(c2, c)) - 0.25));
        worst = std::max(worst, std::abs(dot(b, hadamard(c, ac)) - 0.125));
        worst = std::max(worst, std::abs(dot(b, matvec(t.a, c2)) - 1.0 / 12.0));
        worst = std::max(worst, std::abs(dot(b, matvec(t.a, ac)) - 1.0 / 24.0));
    }
    return worst;
}

RKMethod forward_euler_method() {
    RKMethod rk = make_method("FE", 1, 1.0, 1);
    rk.alpha[1][0] = 1.0;
    return rk;
}

const std::vector<RKMethod>& method_registry() {
    static const std::vector<RKMethod> registry = [] {
        std::vector<RKMethod> methods{ssprk22(), ssprk33(), ssprk104()};
        for (const RKMethod& rk : methods) {
            rk.validate();
        }
        return methods;
    }();
    return registry;
}

const RKMethod& find_method(std::string_view name) {
    const auto same = [&](const std::string& candidate) {
        return candidate.size() == name.size() &&
               std::equal(candidate.begin(), candidate.end(), name.begin(), [](char x, char y) {
                   return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
               });
    };
    for (const RKMethod& rk : method_registry()) {
        if (same(rk.name)) {
            return rk;
        }
    }
    throw std::out_of_range("unknown RK method: " + std::string(name));
}

} // namespace nlsir
