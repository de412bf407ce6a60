#include "qwalk/architecture.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qwalk;

// ---------- mode accounting ----------

TEST(ModeCount, LinearVersusExponential) {
    EXPECT_EQ(mode_count(Architecture::spatial, 0), 1ull);
    EXPECT_EQ(mode_count(Architecture::spatial, 4), 9ull);
    EXPECT_EQ(mode_count(Architecture::spatial, 10), 21ull);
    EXPECT_EQ(mode_count(Architecture::temporal, 0), 1ull);
    EXPECT_EQ(mode_count(Architecture::temporal, 10), 1024ull);
    EXPECT_EQ(mode_count(Architecture::temporal, 20), 1048576ull);
    EXPECT_EQ(mode_count(Architecture::temporal, 62), 1ull << 62);
}

TEST(ModeCount, GrowthRatioIsTwoToTheNOverLinear) {
    for (int n = 1; n <= 30; ++n) {
        const double ratio = double(mode_count(Architecture::temporal, n)) /
                             double(mode_count(Architecture::spatial, n));
        EXPECT_NEAR(ratio, std::pow(2.0, n) / (2 * n + 1), 1e-9);
    }
}

TEST(ModeCount, OverflowAndNegativeGuards) {
    EXPECT_THROW(mode_count(Architecture::temporal, 63), std::invalid_argument);
    EXPECT_THROW(mode_count(Architecture::spatial, -1), std::invalid_argument);
}

// ---------- loop click rates ----------

TEST(ClickRate, PinnedDefaults) {
    const TemporalLoopParams p;
    EXPECT_NEAR(expected_click_rate(p, 1), 8.325, 1e-12);
    EXPECT_NEAR(expected_click_rate(p, 4), 0.892205859375, 1e-14);
    EXPECT_NEAR(expected_click_rate(p, 10), 0.010247707687416739, 1e-16);
}

TEST(ClickRate, TelescopingRatioIsExact) {
    const TemporalLoopParams p;
    const double ratio = p.eta * (1.0 - p.outcoupling);
    for (int n = 1; n < 24; ++n) {
        // Bitwise equality, not a tolerance: each step of the model is exactly
        // one multiplication by eta*(1-outcoupling), so consecutive rates must
        // telescope with zero floating-point discrepancy. (The quotient
        // rate(n+1)/rate(n) reintroduces a rounding and may sit 1 ulp off;
        // the product form is the exact statement.)
        EXPECT_EQ(expected_click_rate(p, n + 1), expected_click_rate(p, n) * ratio);
    }
}

TEST(ClickRate, OutcoupleFirstVariantSkipsOneLossFactor) {
    TemporalLoopParams p;
    p.outcouple_before_loss = true;
    const TemporalLoopParams q;  // default order
    for (int n : {1, 3, 7}) {
        EXPECT_NEAR(expected_click_rate(p, n), expected_click_rate(q, n) / q.eta, 1e-15);
    }
}

TEST(ClickRate, Validation) {
    TemporalLoopParams p;
    EXPECT_THROW(expected_click_rate(p, 0), std::invalid_argument);
    p.eta = 0.0;
    EXPECT_THROW(expected_click_rate(p, 1), std::invalid_argument);
    p.eta = 1.5;
    EXPECT_THROW(expected_click_rate(p, 1), std::invalid_argument);
    p = {};
    p.outcoupling = 0.0;
    EXPECT_THROW(expected_click_rate(p, 1), std::invalid_argument);
    p = {};
    p.mean_photon = -1;
    EXPECT_THROW(expected_click_rate(p, 1), std::invalid_argument);
}

// ---------- source statistics ----------

TEST(MultiphotonFraction, PinAndAsymptotes) {
    EXPECT_NEAR(multiphoton_fraction(0.003), 0.0014992500001125132, 1e-16);
    // Small mu: fraction ~ mu/2.
    EXPECT_NEAR(multiphoton_fraction(1e-6), 5e-7, 1e-12);
    // Large mu: almost every click is multi-photon.
    EXPECT_GT(multiphoton_fraction(20.0), 0.999);
    EXPECT_THROW(multiphoton_fraction(0.0), std::invalid_argument);
}

// ---------- comparison table ----------

TEST(Feasibility, RowShapesAndThresholds) {
    const TemporalLoopParams loop;
    SpatialCascadeParams cascade;
    cascade.per_step_transmission = 0.5;
    const auto rows = feasibility_report(loop, cascade, 12, 1.0);
    ASSERT_EQ(rows.size(), 12u);
    for (const auto& r : rows) {
        EXPECT_EQ(r.modes_spatial, 2ull * r.n + 1);
        EXPECT_EQ(r.modes_temporal, 1ull << r.n);
        EXPECT_EQ(r.feasible_temporal, r.rate_temporal >= 1.0);
        EXPECT_EQ(r.feasible_spatial, r.rate_spatial >= 1.0);
    }
    // Matched loss per step (0.5 vs eta(1-out)=0.475): rates stay comparable.
    EXPECT_NEAR(rows[0].rate_spatial, loop.rep_rate * loop.mean_photon * 0.5, 1e-9);
    EXPECT_NEAR(rows[3].rate_temporal, 0.892205859375, 1e-12);
}

TEST(Feasibility, MonotoneDecayInSteps) {
    const TemporalLoopParams loop;
    SpatialCascadeParams cascade;
    cascade.per_step_transmission = 0.9;
    const auto rows = feasibility_report(loop, cascade, 20, 0.01);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_LT(rows[i].rate_temporal, rows[i - 1].rate_temporal);
        EXPECT_LT(rows[i].rate_spatial, rows[i - 1].rate_spatial);
    }
}

TEST(Feasibility, Validation) {
    const TemporalLoopParams loop;
    const SpatialCascadeParams cascade;
    EXPECT_THROW(feasibility_report(loop, cascade, 0, 1.0), std::invalid_argument);
    EXPECT_THROW(feasibility_report(loop, cascade, 5, -1.0), std::invalid_argument);
    SpatialCascadeParams bad;
    bad.per_step_transmission = 0.0;
    EXPECT_THROW(feasibility_report(loop, bad, 5, 1.0), std::invalid_argument);
}
