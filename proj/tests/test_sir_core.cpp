#include "nlsir/disk_cubature.hpp"
#include "nlsir/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace nlsir;

namespace {

constexpr double kPi = std::numbers::pi;

Field random_field(const Grid& g, std::uint64_t seed, double lo, double hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    Field f(g);
    for (double& x : f.values()) {
        x = u(rng);
    }
    return f;
}

struct Baseline {
    Params params;
    Grid grid = Grid::spanning(20, 20);
    CubatureRule rule = product_disk_rule(10, 0.05, 10);
};

const InterpMethod kPositive[] = {InterpMethod::Bilinear, InterpMethod::MonotoneCubic};

} // namespace

TEST(Params, Validation) {
    Params p;
    EXPECT_NO_THROW(p.validate());
    for (double Params::*field : {&Params::a, &Params::b, &Params::delta}) {
        Params q;
        q.*field = 0.0;
        EXPECT_THROW(q.validate(), std::invalid_argument);
    }
    Params q;
    q.c = -0.1;
    EXPECT_THROW(q.validate(), std::invalid_argument);
    q = Params{};
    q.beta = -1.0;
    EXPECT_THROW(q.validate(), std::invalid_argument);
    q = Params{};
    q.alpha = NAN;
    EXPECT_THROW(q.validate(), std::invalid_argument);
}

TEST(Kernel, RadialProfile) {
    const Kernel k(Params{});
    EXPECT_DOUBLE_EQ(k.g1(0.0), 5.0);
    EXPECT_DOUBLE_EQ(k.g1(0.025), 2.5);
    EXPECT_EQ(k.g1(0.05), 0.0);
    EXPECT_EQ(k.g1(0.2), 0.0);
    EXPECT_THROW(k.g1(-1e-9), std::invalid_argument);
    EXPECT_THROW(k.g1(NAN), std::invalid_argument);
    EXPECT_DOUBLE_EQ(k.kappa1(), 5.0);
    EXPECT_DOUBLE_EQ(k.kappa2(), 2.0);
}

TEST(Kernel, AngularProfile) {
    Params p;
    p.beta = 0.5;
    p.alpha = kPi / 2.0;
    const Kernel k(p);
    EXPECT_NEAR(k.g2(0.0), 1.0, 1e-15);
    EXPECT_NEAR(k.g2(kPi), 0.0, 1e-15);
    EXPECT_NEAR(k.g2(2.0 * kPi + 0.3), k.g2(0.3), 1e-14);
    for (int n = 0; n < 100; ++n) {
        const double v = k.g2(0.1 * n);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, k.kappa2() + 1e-15);
    }
}

TEST(InfectionOperator, ZeroInfectedGivesZero) {
    const Baseline s;
    for (InterpMethod m : {InterpMethod::Bilinear, InterpMethod::CubicSpline, InterpMethod::MonotoneCubic}) {
        const Field t = assemble_T(Field(s.grid), Kernel(s.params), s.rule, m);
        for (double x : t.values()) {
            EXPECT_EQ(x, 0.0);
        }
    }
}

TEST(InfectionOperator, KernelMassMatchesClosedForm) {
    // integral of a (delta - r)(1 + sin theta) over the disk = pi a delta^3 / 3
    const Baseline s;
    const InfectionOperator op(s.grid, Kernel(s.params), s.rule, InterpMethod::Bilinear);
    EXPECT_NEAR(op.kernel_mass(), 0.013089969389957471827, 1e-15);
}

TEST(InfectionOperator, ConstantFieldInInterior) {
    const Baseline s;
    const Field infected(s.grid, 7.0);
    for (InterpMethod m : {InterpMethod::Bilinear, InterpMethod::CubicSpline, InterpMethod::MonotoneCubic}) {
        const Field t = assemble_T(infected, Kernel(s.params), s.rule, m);
        // nodes whose disk stays two cells inside the grid
        for (int k = 3; k < 17; ++k) {
            for (int l = 3; l < 17; ++l) {
                EXPECT_NEAR(t(k, l), 7.0 * 0.013089969389957471827, 1e-12) << to_string(m);
            }
        }
        // the zero exterior lowers T at the corner
        EXPECT_LT(t(0, 0), 7.0 * 0.013089969389957471827);
    }
}

TEST(InfectionOperator, NonnegativeAndBoundedForPositiveMethods) {
    const Baseline s;
    const Kernel kernel(s.params);
    double weight_sum = 0.0;
    for (const CubaturePoint& p : s.rule.points()) {
        weight_sum += p.weight;
    }
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Field infected = random_field(s.grid, seed, 0.0, 20.0);
        for (InterpMethod m : kPositive) {
            const Field t = assemble_T(infected, kernel, s.rule, m);
            for (double x : t.values()) {
                EXPECT_GE(x, 0.0);
                EXPECT_LE(x, weight_sum * kernel.kappa1() * kernel.kappa2() * infected.max());
            }
        }
    }
}

TEST(InfectionOperator, LinearAndLipschitzForBilinear) {
    const Baseline s;
    const InfectionOperator op(s.grid, Kernel(s.params), s.rule, InterpMethod::Bilinear);
    const Field a = random_field(s.grid, 1, 0.0, 5.0);
    const Field b = random_field(s.grid, 2, 0.0, 5.0);
    Field comb(s.grid), diff(s.grid);
    for (std::size_t n = 0; n < comb.size(); ++n) {
        comb.values()[n] = 2.0 * a.values()[n] + 3.0 * b.values()[n];
        diff.values()[n] = a.values()[n] - b.values()[n];
    }
    const Field ta = op.apply(a), tb = op.apply(b), tc = op.apply(comb);
    double dmax = 0.0;
    for (std::size_t n = 0; n < comb.size(); ++n) {
        EXPECT_NEAR(tc.values()[n], 2.0 * ta.values()[n] + 3.0 * tb.values()[n], 1e-13);
        dmax = std::max(dmax, std::abs(ta.values()[n] - tb.values()[n]));
    }
    EXPECT_LE(dmax, op.kernel_mass() * diff.max_abs() * (1.0 + 1e-12));
}

TEST(InfectionOperator, OperatorMatchesOneShotAssembly) {
    const Baseline s;
    const Kernel kernel(s.params);
    const Field infected = random_field(s.grid, 9, 0.0, 3.0);
    for (InterpMethod m : {InterpMethod::Bilinear, InterpMethod::CubicSpline, InterpMethod::MonotoneCubic}) {
        const InfectionOperator op(s.grid, kernel, s.rule, m);
        const Field t1 = op.apply(infected);
        const Field t2 = assemble_T(infected, kernel, s.rule, m);
        for (std::size_t n = 0; n < t1.size(); ++n) {
            EXPECT_EQ(t1.values()[n], t2.values()[n]);
        }
    }
}

TEST(InfectionOperator, BilinearMatchesDirectInterpolation) {
    // T from the folded sparse matrix equals the literal cubature sum
    const Baseline s;
    const Kernel kernel(s.params);
    const Field infected = random_field(s.grid, 17, 0.0, 3.0);
    const Field t = assemble_T(infected, kernel, s.rule, InterpMethod::Bilinear);
    const Interpolant it(infected, InterpMethod::Bilinear, 3);
    for (int k : {0, 5, 19}) {
        for (int l : {0, 11, 19}) {
            double direct = 0.0;
            for (const CubaturePoint& p : s.rule.points()) {
                direct += p.weight * kernel.g1(p.r) * kernel.g2(p.theta) *
                          it(s.grid.x(k) + p.dx, s.grid.y(l) + p.dy);
            }
            EXPECT_NEAR(t(k, l), direct, 1e-13);
        }
    }
}

TEST(InfectionOperator, ZeroWhereDiskSeesNoInfection) {
    const Baseline s;
    Field infected(s.grid);
    infected(10, 10) = 1.0;
    for (InterpMethod m : kPositive) {
        const Field t = assemble_T(infected, Kernel(s.params), s.rule, m);
        EXPECT_GT(t(10, 10), 0.0);
        for (int k = 0; k < 20; ++k) {
            for (int l = 0; l < 20; ++l) {
                const double dist = std::hypot(s.grid.x(k) - s.grid.x(10), s.grid.y(l) - s.grid.y(10));
                // bilinear support is one cell; the monotone stencil reaches three
                const double reach = s.params.delta + (m == InterpMethod::Bilinear ? 1.5 : 3.5) * s.grid.h1();
                if (dist > reach) {
                    EXPECT_EQ(t(k, l), 0.0) << k << ' ' << l;
                }
            }
        }
    }
}

TEST(InfectionOperator, RadiusMismatchThrows) {
    const Baseline s;
    EXPECT_THROW(InfectionOperator(s.grid, Kernel(s.params), product_disk_rule(4, 0.06), InterpMethod::Bilinear),
                 std::invalid_argument);
    EXPECT_THROW(assemble_T(Field(s.grid), Kernel(s.params), product_disk_rule(4, 0.1), InterpMethod::Bilinear),
                 std::invalid_argument);
}

TEST(InfectionOperator, GridMismatchThrows) {
    const Baseline s;
    const InfectionOperator op(s.grid, Kernel(s.params), s.rule, InterpMethod::Bilinear);
    EXPECT_THROW(op.apply(Field(Grid::spanning(10, 10))), std::invalid_argument);
}

TEST(SirSystem, RightHandSideAtOneNode) {
    Params p;
    p.a = 10.0;
    p.b = 0.2;
    p.c = 0.05;
    p.delta = 0.3;
    const Grid g = Grid::spanning(5, 5);
    const SirSystem sys(g, p, product_disk_rule(6, 0.3), InterpMethod::Bilinear);
    State st{Field(g, 4.0), random_field(g, 3, 0.0, 2.0), Field(g, 1.0), 0.0};
    const Field t = sys.infection_term(st.i);
    const Derivatives d = sys.rhs(st);
    for (int k = 0; k < 5; ++k) {
        for (int l = 0; l < 5; ++l) {
            const double S = 4.0, I = st.i(k, l), T = t(k, l);
            EXPECT_DOUBLE_EQ(d.ds(k, l), -S * T - 0.05 * S);
            EXPECT_DOUBLE_EQ(d.di(k, l), S * T - 0.2 * I);
            EXPECT_DOUBLE_EQ(d.dr(k, l), 0.2 * I + 0.05 * S);
        }
    }
}

TEST(SirSystem, PointwiseConservation) {
    const Baseline s;
    const SirSystem sys(s.grid, s.params, s.rule, InterpMethod::CubicSpline);
    const State st{random_field(s.grid, 4, 0.0, 20.0), random_field(s.grid, 5, 0.0, 10.0),
                   random_field(s.grid, 6, 0.0, 5.0), 0.0};
    const Derivatives d = sys.rhs(st);
    for (std::size_t n = 0; n < s.grid.size(); ++n) {
        const double scale = std::abs(d.ds.values()[n]) + std::abs(d.di.values()[n]) + std::abs(d.dr.values()[n]);
        EXPECT_LE(std::abs(d.ds.values()[n] + d.di.values()[n] + d.dr.values()[n]), 1e-15 * scale + 1e-300);
    }
}

TEST(SirSystem, FreeFunctionAgreesWithSystem) {
    const Baseline s;
    const SirSystem sys(s.grid, s.params, s.rule, InterpMethod::Bilinear);
    const State st{Field(s.grid, 20.0), random_field(s.grid, 7, 0.0, 1.0), Field(s.grid), 0.0};
    const Derivatives a = sys.rhs(st);
    const Derivatives b = rhs(st, Kernel(s.params), s.rule, InterpMethod::Bilinear);
    for (std::size_t n = 0; n < s.grid.size(); ++n) {
        EXPECT_EQ(a.di.values()[n], b.di.values()[n]);
    }
}

TEST(SirSystem, InconsistentStateThrows) {
    const Baseline s;
    const SirSystem sys(s.grid, s.params, s.rule, InterpMethod::Bilinear);
    const Grid other = Grid::spanning(10, 10);
    const State bad{Field(s.grid), Field(other), Field(s.grid), 0.0};
    EXPECT_THROW(sys.rhs(bad), std::invalid_argument);
}

TEST(State, TotalDensity) {
    const Grid g = Grid::spanning(3, 3);
    const State st{Field(g, 1.0), Field(g, 2.0), Field(g, 0.5), 0.0};
    const Field m = total_density(st);
    for (double x : m.values()) {
        EXPECT_DOUBLE_EQ(x, 3.5);
    }
}
