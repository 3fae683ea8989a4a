#include "nlsir/harness.hpp"
#include "nlsir/properties.hpp"
#include "nlsir/steppers.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>

using namespace nlsir;

namespace {

State random_positive(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_state(g, rng, 10.0);
}

// a = 200, b = 0.01, delta = 0.1 on a 40 x 40 grid with a 20 x 20 rule
ExperimentConfig witness_config() {
    ExperimentConfig cfg;
    cfg.params.a = 200.0;
    cfg.params.b = 0.01;
    cfg.params.c = 0.01;
    cfg.params.delta = 0.1;
    cfg.grid.p1 = 40;
    cfg.grid.p2 = 40;
    cfg.rule.n = 20;
    cfg.on_violation = ViolationPolicy::Abort;
    return cfg;
}

} // namespace

TEST(CheckStep, IdentityPasses) {
    const Grid g = Grid::spanning(6, 5);
    const State u = random_positive(g, 1);
    const PropertyReport r = check_step(u, u, 0.0, 0.0);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.conservation_drift, 0.0);
    EXPECT_EQ(r.worst_negative, 0.0);
    EXPECT_FALSE(r.location);
}

TEST(CheckStep, GrowingSusceptiblesFailMonotonicityAndConservation) {
    const Grid g = Grid::spanning(6, 5);
    const State u = random_positive(g, 2);
    State v = u;
    v.s(3, 2) += 1e-3;
    const PropertyReport r = check_step(u, v, 1e-12, 1e-12, 7);
    EXPECT_TRUE(r.d1_ok);
    EXPECT_FALSE(r.d2_ok);
    EXPECT_FALSE(r.d3_ok);
    EXPECT_TRUE(r.d4_ok);
    EXPECT_NEAR(r.monotonicity_violation_s, 1e-3, 1e-15);
    EXPECT_EQ(r.step_index, 7u);
    ASSERT_TRUE(r.location);
    // D2 is the first failed check; it points at the same node
    EXPECT_EQ(r.location->species, Species::Total);
    EXPECT_EQ(r.location->k, 3);
    EXPECT_EQ(r.location->l, 2);
}

TEST(CheckStep, NegativeEntryIsLocated) {
    const Grid g = Grid::spanning(4, 4);
    const State u = random_positive(g, 3);
    State v = u;
    v.i(1, 2) = -1e-6;
    v.r(1, 2) += u.i(1, 2) + 1e-6; // keep the total and R monotone
    const PropertyReport r = check_step(u, v, 1e-12, 1e-12);
    EXPECT_FALSE(r.d1_ok);
    EXPECT_TRUE(r.d2_ok);
    EXPECT_DOUBLE_EQ(r.worst_negative, -1e-6);
    ASSERT_TRUE(r.location);
    EXPECT_EQ(r.location->species, Species::I);
    EXPECT_EQ(r.location->k, 1);
    EXPECT_EQ(r.location->l, 2);
}

TEST(CheckStep, ShrinkingRecoveredFailsD4) {
    const Grid g = Grid::spanning(4, 4);
    State u = random_positive(g, 4);
    u.r(0, 0) = 1.0;
    State v = u;
    v.r(0, 0) = 0.5;
    v.s(0, 0) += 0.0;
    v.i(0, 0) += 0.5;
    const PropertyReport r = check_step(u, v, 1e-12, 1e-12);
    EXPECT_TRUE(r.d1_ok);
    EXPECT_TRUE(r.d2_ok);
    EXPECT_TRUE(r.d3_ok);
    EXPECT_FALSE(r.d4_ok);
    EXPECT_DOUBLE_EQ(r.monotonicity_violation_r, 0.5);
}

TEST(CheckStep, ToleranceMonotonicity) {
    const Grid g = Grid::spanning(5, 5);
    const State u = random_positive(g, 5);
    State v = u;
    v.s(2, 2) += 1e-8;
    v.i(2, 2) -= 1e-8;
    bool failed_before = true;
    for (double tol : {1e-12, 1e-10, 1e-9, 1e-8 * 1.0001, 1e-6}) {
        const bool ok = check_step(u, v, tol, 1.0).ok();
        // once a tolerance passes, every looser one passes too
        EXPECT_TRUE(ok || failed_before);
        failed_before = failed_before && !ok;
    }
    EXPECT_TRUE(check_step(u, v, 1e-6, 1.0).ok());
    EXPECT_FALSE(check_step(u, v, 1e-10, 1.0).ok());
}

TEST(CheckStep, InvariantUnderNodePermutation) {
    const Grid g = Grid::spanning(6, 6);
    const State u = random_positive(g, 6);
    State v = u;
    v.s(1, 4) -= 0.25;
    v.i(1, 4) += 0.3;
    v.r(5, 0) -= 0.01;
    auto reversed = [](const State& s) {
        State out = s;
        for (Field* f : {&out.s, &out.i, &out.r}) {
            std::reverse(f->values().begin(), f->values().end());
        }
        return out;
    };
    const PropertyReport a = check_step(u, v, 1e-12, 1e-12);
    const PropertyReport b = check_step(reversed(u), reversed(v), 1e-12, 1e-12);
    EXPECT_EQ(a.d1_ok, b.d1_ok);
    EXPECT_EQ(a.d2_ok, b.d2_ok);
    EXPECT_EQ(a.d3_ok, b.d3_ok);
    EXPECT_EQ(a.d4_ok, b.d4_ok);
    EXPECT_EQ(a.conservation_drift, b.conservation_drift);
    EXPECT_EQ(a.monotonicity_violation_r, b.monotonicity_violation_r);
}

TEST(CheckStep, GridMismatchThrows) {
    const State a = random_positive(Grid::spanning(4, 4), 7);
    const State b = random_positive(Grid::spanning(5, 4), 7);
    EXPECT_THROW(check_step(a, b, 0.0, 0.0), std::invalid_argument);
}

TEST(CheckStep, DefaultTolerances) {
    const Grid g = Grid::spanning(3, 3);
    State u{Field(g, 1.0), Field(g), Field(g), 0.0};
    u.i(1, 1) = 4.0;
    EXPECT_DOUBLE_EQ(default_tol_neg(u), 5e-12);
    EXPECT_EQ(default_tol_cons, 1e-12);
}

TEST(Report, CsvLine) {
    EXPECT_EQ(report_csv_header(), "step,d1,d2,d3,d4,worst_negative,conservation_drift");
    PropertyReport r;
    r.step_index = 12;
    r.d3_ok = false;
    r.worst_negative = -0.5;
    r.conservation_drift = 0.25;
    EXPECT_EQ(to_csv_line(r), "12,1,1,0,1,-0.5,0.25");
    EXPECT_EQ(to_string(Species::R), "R");
}

TEST(Witness, ImprovedBoundHoldsAndLargerStepBreaksPositivity) {
    const ExperimentConfig cfg = witness_config();
    const SirSystem sys = make_system(cfg);
    const State u0 = initial_state(cfg);
    const StepBounds b = improved_bound(u0, sys);
    EXPECT_NEAR(b.improved, 0.1337, 5e-5);

    SimulationOptions opt;
    opt.on_violation = ViolationPolicy::Abort;
    opt.t_final = 80.0;
    opt.tau = 0.1337;
    const SimulationResult ok = simulate(u0, sys, opt);
    EXPECT_FALSE(ok.aborted);
    EXPECT_TRUE(ok.violations.empty());

    opt.tau = 0.1448;
    const SimulationResult bad = simulate(u0, sys, opt);
    ASSERT_TRUE(bad.aborted);
    const PropertyReport& r = bad.violations.back();
    EXPECT_FALSE(r.d1_ok);
    ASSERT_TRUE(r.location);
    EXPECT_EQ(r.location->species, Species::S);
    EXPECT_LT(r.worst_negative, 0.0);
}
