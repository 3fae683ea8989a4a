#include "nlsir/grid.hpp"
#include "nlsir/interp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

using namespace nlsir;

namespace {

const InterpMethod kAll[] = {InterpMethod::Bilinear, InterpMethod::CubicSpline, InterpMethod::MonotoneCubic};

Field random_field(const Grid& g, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    Field f(g);
    for (double& x : f.values()) {
        x = u(rng);
    }
    return f;
}

template <class F>
Field tabulate(const Grid& g, F&& fn) {
    Field f(g);
    for (int k = 0; k < g.p1(); ++k) {
        for (int l = 0; l < g.p2(); ++l) {
            f(k, l) = fn(g.x(k), g.y(l));
        }
    }
    return f;
}

} // namespace

TEST(Grid, GeometryAndIndexing) {
    const Grid g = Grid::spanning(5, 3, 2.0, 1.0);
    EXPECT_DOUBLE_EQ(g.h1(), 0.5);
    EXPECT_DOUBLE_EQ(g.h2(), 0.5);
    EXPECT_DOUBLE_EQ(g.l1(), 2.0);
    EXPECT_DOUBLE_EQ(g.x(4), 2.0);
    EXPECT_EQ(g.size(), 15u);
    EXPECT_EQ(g.index(1, 2), 5u);
    EXPECT_THROW(Grid::spanning(1, 3), std::invalid_argument);
    EXPECT_THROW(Grid(3, 3, 0.0, 1.0), std::invalid_argument);
}

TEST(Field, CsvRoundTripIsExact) {
    const Grid g = Grid::spanning(4, 6);
    const Field f = random_field(g, 3, -1e3, 1e3);
    std::stringstream ss;
    write_field_csv(ss, f);
    const Field back = read_field_csv(ss, g);
    for (std::size_t n = 0; n < f.size(); ++n) {
        EXPECT_EQ(back.values()[n], f.values()[n]);
    }
}

TEST(Field, CsvShapeMismatchThrows) {
    const Grid g = Grid::spanning(3, 3);
    std::stringstream ss("1,2,3\n4,5,6\n");
    EXPECT_THROW(read_field_csv(ss, g), std::invalid_argument);
    std::stringstream wide("1,2,3,4\n1,2,3,4\n1,2,3,4\n");
    EXPECT_THROW(read_field_csv(wide, g), std::invalid_argument);
}

TEST(Interpolant, ReproducesNodeValues) {
    const Grid g = Grid::spanning(9, 7, 1.0, 2.0);
    const Field f = random_field(g, 11);
    for (InterpMethod m : kAll) {
        const Interpolant it(f, m);
        for (int k = 0; k < g.p1(); ++k) {
            for (int l = 0; l < g.p2(); ++l) {
                EXPECT_NEAR(it(g.x(k), g.y(l)), f(k, l), 1e-14) << to_string(m);
            }
        }
    }
}

TEST(Interpolant, BilinearCellCentreIsCornerMean) {
    const Grid g = Grid::spanning(2, 2);
    Field f(g);
    f(0, 0) = 1.0;
    f(1, 0) = 2.0;
    f(0, 1) = 3.0;
    f(1, 1) = 4.0;
    EXPECT_DOUBLE_EQ(sample(f, InterpMethod::Bilinear, 0.5, 0.5), 2.5);
}

TEST(Interpolant, ZeroBeyondGhostBand) {
    const Grid g = Grid::spanning(6, 6);
    const Field f(g, 1.0);
    for (InterpMethod m : kAll) {
        EXPECT_EQ(sample(f, m, 3.0, 0.5), 0.0);
        EXPECT_EQ(sample(f, m, 0.5, -1.0), 0.0);
        // inside the ghost band the data fade to zero
        EXPECT_GE(sample(f, m, -0.1, 0.5), 0.0);
        EXPECT_LT(sample(f, m, -0.1, 0.5), 1.0);
    }
    EXPECT_NEAR(sample(f, InterpMethod::Bilinear, -0.1, 0.5), 0.5, 1e-14);
}

TEST(Interpolant, NaNCoordinateThrows) {
    const Grid g = Grid::spanning(4, 4);
    const Interpolant it(Field(g, 1.0), InterpMethod::Bilinear);
    EXPECT_THROW(it(std::nan(""), 0.5), std::invalid_argument);
    EXPECT_THROW(it(0.5, std::nan("")), std::invalid_argument);
}

TEST(Interpolant, PositivityPreservingMethodsStayInDataRange) {
    const Grid g = Grid::spanning(12, 10);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(-0.15, 1.15);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Field f = random_field(g, seed, 0.0, 3.0);
        f(4, 4) = 0.0;
        f(5, 4) = 50.0; // sharp front
        for (InterpMethod m : {InterpMethod::Bilinear, InterpMethod::MonotoneCubic}) {
            ASSERT_TRUE(positivity_preserving(m));
            const Interpolant it(f, m);
            for (int n = 0; n < 2000; ++n) {
                const double v = it(ux(rng), ux(rng));
                EXPECT_GE(v, 0.0) << to_string(m);
                EXPECT_LE(v, 50.0 + 1e-12) << to_string(m);
            }
        }
    }
}

TEST(Interpolant, SplineIsNotPositivityPreserving) {
    EXPECT_FALSE(positivity_preserving(InterpMethod::CubicSpline));
    const Grid g = Grid::spanning(11, 11);
    Field f(g);
    f(5, 5) = 1.0;
    const Interpolant it(f, InterpMethod::CubicSpline);
    double lowest = 0.0;
    for (int n = 0; n <= 200; ++n) {
        lowest = std::min(lowest, it(n / 200.0, 0.5));
    }
    EXPECT_LT(lowest, 0.0);
}

TEST(Interpolant, BilinearWeightsFormPartitionOfUnity) {
    for (double u : {0.0, 0.1, 0.5, 0.99, 1.0}) {
        for (double v : {0.0, 0.3, 0.75, 1.0}) {
            const auto w = bilinear_weights(u, v);
            EXPECT_NEAR(w[0] + w[1] + w[2] + w[3], 1.0, 1e-15);
            for (double x : w) {
                EXPECT_GE(x, 0.0);
            }
        }
    }
    const auto w = bilinear_weights(0.25, 0.5);
    EXPECT_DOUBLE_EQ(w[0], 0.375);
    EXPECT_DOUBLE_EQ(w[1], 0.125);
    EXPECT_DOUBLE_EQ(w[2], 0.375);
    EXPECT_DOUBLE_EQ(w[3], 0.125);
}

TEST(Interpolant, BilinearReproducesBilinearPolynomials) {
    const Grid g = Grid::spanning(6, 8);
    auto p = [](double x, double y) { return 1.0 + 2.0 * x - 3.0 * y + 0.5 * x * y; };
    const Interpolant it(tabulate(g, p), InterpMethod::Bilinear);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 500; ++n) {
        const double x = u(rng), y = u(rng);
        EXPECT_NEAR(it(x, y), p(x, y), 1e-13);
    }
}

TEST(Interpolant, SplineReproducesCubicsAwayFromBoundary) {
    const Grid g = Grid::spanning(12, 12);
    auto p = [](double x, double y) {
        return 0.3 + x - 2.0 * y * y + x * x * x - 1.5 * x * y * y + 0.7 * x * x * y * y * y;
    };
    const Interpolant it(tabulate(g, p), InterpMethod::CubicSpline);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 500; ++n) {
        const double x = u(rng), y = u(rng);
        EXPECT_NEAR(it(x, y), p(x, y), 1e-10) << x << ' ' << y;
    }
}

TEST(Interpolant, MonotoneCubicReproducesLinearData) {
    const Grid g = Grid::spanning(9, 9);
    auto p = [](double x, double y) { return 2.0 + x + 3.0 * y; };
    const Interpolant it(tabulate(g, p), InterpMethod::MonotoneCubic);
    // two cells clear of the zero exterior
    for (double x : {0.26, 0.33, 0.5, 0.74}) {
        for (double y : {0.3, 0.47, 0.7}) {
            EXPECT_NEAR(it(x, y), p(x, y), 1e-12);
        }
    }
}

TEST(Interpolant, LinearMethodsAreLinearInTheData) {
    const Grid g = Grid::spanning(10, 9);
    const Field f = random_field(g, 21);
    const Field h = random_field(g, 22, -2.0, 2.0);
    Field comb(g);
    for (std::size_t n = 0; n < comb.size(); ++n) {
        comb.values()[n] = 1.5 * f.values()[n] - 0.25 * h.values()[n];
    }
    for (InterpMethod m : {InterpMethod::Bilinear, InterpMethod::CubicSpline}) {
        const Interpolant a(f, m), b(h, m), c(comb, m);
        for (double x : {-0.05, 0.13, 0.5, 0.777, 1.04}) {
            for (double y : {-0.1, 0.2, 0.61, 1.0}) {
                EXPECT_NEAR(c(x, y), 1.5 * a(x, y) - 0.25 * b(x, y), 1e-13) << to_string(m);
            }
        }
    }
}

TEST(Interpolant, SampleManyMatchesSample) {
    const Grid g = Grid::spanning(7, 7);
    const Field f = random_field(g, 8);
    const std::vector<std::pair<double, double>> pts{{0.1, 0.2}, {0.5, 0.5}, {-0.05, 0.9}, {2.0, 2.0}, {1.0, 0.0}};
    for (InterpMethod m : kAll) {
        const auto many = sample_many(f, m, pts);
        ASSERT_EQ(many.size(), pts.size());
        for (std::size_t n = 0; n < pts.size(); ++n) {
            EXPECT_EQ(many[n], sample(f, m, pts[n].first, pts[n].second));
        }
        EXPECT_TRUE(sample_many(f, m, {}).empty());
    }
}

TEST(PaddedLattice, EdgePointsBelongToLowerCell) {
    const Grid g = Grid::spanning(5, 5);
    const PaddedLattice lat(g, 2);
    const auto loc = lat.locate(0.5, 0.25);
    ASSERT_TRUE(loc);
    // x = 0.5 is node 2, padded index 4: the lower cell is 3 with u = 1
    EXPECT_EQ(loc->i, 3);
    EXPECT_DOUBLE_EQ(loc->u, 1.0);
    EXPECT_EQ(loc->j, 2);
    EXPECT_DOUBLE_EQ(loc->v, 1.0);
    const auto corner = lat.locate(-0.5, -0.5);
    ASSERT_TRUE(corner);
    EXPECT_EQ(corner->i, 0);
    EXPECT_DOUBLE_EQ(corner->u, 0.0);
    EXPECT_FALSE(lat.locate(-0.51, 0.0));
    EXPECT_FALSE(lat.locate(0.0, 1.6));
}

TEST(PaddedLattice, PadPlacesValuesInsideZeroRings) {
    const Grid g = Grid::spanning(3, 4);
    const Field f = random_field(g, 4, 1.0, 2.0);
    const PaddedLattice lat(g, 2);
    const auto p = lat.pad(f);
    ASSERT_EQ(p.size(), 7u * 8u);
    double sum_pad = 0.0, sum_f = 0.0;
    for (double x : p) {
        sum_pad += x;
    }
    for (double x : f.values()) {
        sum_f += x;
    }
    EXPECT_DOUBLE_EQ(sum_pad, sum_f);
    EXPECT_EQ(p[lat.index(2, 2)], f(0, 0));
    EXPECT_EQ(p[lat.index(1, 2)], 0.0);
    EXPECT_THROW(PaddedLattice(g, 0), std::invalid_argument);
}

TEST(InterpMethodNames, ParseRoundTrip) {
    for (InterpMethod m : kAll) {
        EXPECT_EQ(parse_interp_method(to_string(m)), m);
    }
    EXPECT_EQ(parse_interp_method("spline"), InterpMethod::CubicSpline);
    EXPECT_THROW(parse_interp_method("nearest"), std::invalid_argument);
}

TEST(LimitedAkima, SlopesVanishAtExtremaAndAreBounded) {
    const std::vector<double> y{0.0, 1.0, 3.0, 2.0, 2.0, 5.0, 0.0};
    const auto s = detail::limited_akima_slopes(y, 0.5);
    EXPECT_EQ(s[2], 0.0);
    EXPECT_EQ(s[5], 0.0);
    EXPECT_EQ(s[3], 0.0); // flat secant to the right
    for (std::size_t n = 1; n + 1 < y.size(); ++n) {
        const double left = (y[n] - y[n - 1]) / 0.5;
        const double right = (y[n + 1] - y[n]) / 0.5;
        EXPECT_LE(std::abs(s[n]), 3.0 * std::min(std::abs(left), std::abs(right)) + 1e-15);
    }
}
