#include "nlsir/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace nlsir {

void Params::validate() const {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("Params: a and b must be positive");
    }
    if (!(c >= 0.0)) {
        throw std::invalid_argument("Params: c must be non-negative");
    }
    if (!(delta > 0.0)) {
        throw std::invalid_argument("Params: delta must be positive");
    }
    if (!(beta >= 0.0)) {
        throw std::invalid_argument("Params: beta must be non-negative");
    }
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(delta) ||
        !std::isfinite(alpha) || !std::isfinite(beta)) {
        throw std::invalid_argument("Params: non-finite value");
    }
}

Kernel::Kernel(const Params& params) : params_(params) { params_.validate(); }

double Kernel::g1(double r) const {
    if (r < 0.0 || std::isnan(r)) {
        throw std::invalid_argument("Kernel::g1: negative radius");
    }
    return r < params_.delta ? params_.a * (params_.delta - r) : 0.0;
}

double Kernel::g2(double theta) const noexcept {
    const double wrapped = std::fmod(theta, 2.0 * std::numbers::pi);
    return params_.beta * std::sin(wrapped + params_.alpha) + params_.beta;
}

void require_consistent(const State& state) {
    require_same_grid(state.s, state.i, "State");
    require_same_grid(state.s, state.r, "State");
}

Field total_density(const State& state) {
    Field sum(state.grid());
    auto out = sum.values();
    const auto s = state.s.values();
    const auto i = state.i.values();
    const auto r = state.r.values();
    for (std::size_t n = 0; n < out.size(); ++n) {
        out[n] = s[n] + i[n] + r[n];
    }
    return sum;
}

InfectionOperator::InfectionOperator(const Grid& grid, const Kernel& kernel, const CubatureRule& rule,
                                     InterpMethod method)
    : grid_(grid), method_(method) {
    const double delta = kernel.params().delta;
    if (std::abs(rule.delta() - delta) > 1e-12 * delta) {
        throw std::invalid_argument("InfectionOperator: rule radius differs from kernel radius");
    }
    rings_ = static_cast<int>(std::ceil(delta / std::min(grid.h1(), grid.h2()))) + 1;
    const PaddedLattice lattice(grid, rings_);

    std::vector<double> coeff;
    coeff.reserve(rule.size());
    for (const CubaturePoint& p : rule.points()) {
        coeff.push_back(p.weight * kernel.g1(p.r) * kernel.g2(p.theta));
        kernel_mass_ += coeff.back();
    }

    const auto points = rule.points();
    if (method == InterpMethod::Bilinear) {
        row_start_.reserve(grid.size() + 1);
        row_start_.push_back(0);
        std::vector<std::pair<std::uint32_t, double>> row;
        for (int k = 0; k < grid.p1(); ++k) {
            for (int l = 0; l < grid.p2(); ++l) {
                row.clear();
                for (std::size_t m = 0; m < points.size(); ++m) {
                    const auto loc = lattice.locate(grid.x(k) + points[m].dx, grid.y(l) + points[m].dy);
                    if (!loc || coeff[m] == 0.0) {
                        continue;
                    }
                    const auto w = bilinear_weights(loc->u, loc->v);
                    for (int corner = 0; corner < 4; ++corner) {
                        const int kk = loc->i + (corner & 1) - rings_;
                        const int ll = loc->j + (corner >> 1) - rings_;
                        const double c = coeff[m] * w[static_cast<std::size_t>(corner)];
                        if (kk < 0 || ll < 0 || kk >= grid.p1() || ll >= grid.p2() || c == 0.0) {
                            continue;
                        }
                        row.emplace_back(static_cast<std::uint32_t>(grid.index(kk, ll)), c);
                    }
                }
                std::stable_sort(row.begin(), row.end(),
                                 [](const auto& x, const auto& y) { return x.first < y.first; });
                for (std::size_t n = 0; n < row.size();) {
                    const std::uint32_t column = row[n].first;
                    double sum = 0.0;
                    for (; n < row.size() && row[n].first == column; ++n) {
                        sum += row[n].second;
                    }
                    col_.push_back(column);
                    val_.push_back(sum);
                }
                row_start_.push_back(col_.size());
            }
        }
    } else {
        tap_start_.reserve(grid.size() + 1);
        tap_start_.push_back(0);
        for (int k = 0; k < grid.p1(); ++k) {
            for (int l = 0; l < grid.p2(); ++l) {
                for (std::size_t m = 0; m < points.size(); ++m) {
                    const auto loc = lattice.locate(grid.x(k) + points[m].dx, grid.y(l) + points[m].dy);
                    if (loc && coeff[m] != 0.0) {
                        taps_.push_back({*loc, coeff[m]});
                    }
                }
                tap_start_.push_back(taps_.size());
            }
        }
    }
}

Field InfectionOperator::apply(const Field& infected) const {
    if (!(infected.grid() == grid_)) {
        throw std::invalid_argument("InfectionOperator: field grid mismatch");
    }
    Field out(grid_);
    auto t = out.values();
    if (method_ == InterpMethod::Bilinear) {
        const auto in = infected.values();
        for (std::size_t row = 0; row < t.size(); ++row) {
            double sum = 0.0;
            for (std::size_t n = row_start_[row]; n < row_start_[row + 1]; ++n) {
                sum += val_[n] * in[col_[n]];
            }
            t[row] = sum;
        }
        return out;
    }
    const Interpolant interp(infected, method_, rings_);
    for (std::size_t row = 0; row < t.size(); ++row) {
        double sum = 0.0;
        for (std::size_t n = tap_start_[row]; n < tap_start_[row + 1]; ++n) {
            sum += taps_[n].coeff * interp.eval(taps_[n].loc);
        }
        t[row] = sum;
    }
    return out;
}

Field assemble_T(const Field& infected, const Kernel& kernel, const CubatureRule& rule, InterpMethod method) {
    return InfectionOperator(infected.grid(), kernel, rule, method).apply(infected);
}

SirSystem::SirSystem(const Grid& grid, const Params& params, const CubatureRule& rule, InterpMethod method)
    : kernel_(params), rule_(rule), op_(grid, kernel_, rule_, method) {}

Derivatives SirSystem::rhs(const State& state) const { return rhs(state, op_.apply(state.i)); }

Derivatives SirSystem::rhs(const State& state, const Field& t_field) const {
    require_consistent(state);
    const Grid& g = state.grid();
    Derivatives d{Field(g), Field(g), Field(g)};
    const double b = params().b;
    const double c = params().c;
    const auto s = state.s.values();
    const auto i = state.i.values();
    const auto t = t_field.values();
    auto ds = d.ds.values();
    auto di = d.di.values();
    auto dr = d.dr.values();
    for (std::size_t n = 0; n < s.size(); ++n) {
        const double infection = s[n] * t[n];
        const double vaccination = c * s[n];
        const double recovery = b * i[n];
        ds[n] = -infection - vaccination;
        di[n] = infection - recovery;
        dr[n] = recovery + vaccination;
    }
    return d;
}

Derivatives rhs(const State& state, const Kernel& kernel, const CubatureRule& rule, InterpMethod method) {
    return SirSystem(state.grid(), kernel.params(), rule, method).rhs(state);
}

} // namespace nlsir
