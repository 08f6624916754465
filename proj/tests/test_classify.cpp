#include <gtest/gtest.h>

#include <cmath>

#include "hhlab/classify.hpp"
#include "oracles.hpp"

using namespace hhlab;

namespace {

const PathSegment kUnit = make_segment(0, 1, 0);

}  // namespace

TEST(CheckPhiRConvex, Examples) {
    const auto exp2 = check_phi_r_convex(FuncSpec(ExpAffine{2, 0}), kUnit, PowerParam(0));
    EXPECT_TRUE(exp2.holds);
    EXPECT_NEAR(exp2.worst_margin, 0.0, 1e-13);
    EXPECT_EQ(exp2.qualifier, "grid-certified");

    const auto sq = check_phi_r_convex(FuncSpec(PowerAffine{2, 1, 1}), kUnit, PowerParam(0.5));
    EXPECT_TRUE(sq.holds);
    EXPECT_NEAR(sq.worst_margin, 0.0, 1e-13);

    const FuncSpec root = FuncSpec::parse("expr:sqrt(x)");
    const PathSegment seg = make_segment(1, 4, 0);
    const auto v = check_phi_r_convex(root, seg, PowerParam(1));
    EXPECT_FALSE(v.holds);
    EXPECT_GE(v.worst_margin, 0.081139);
    const auto w = convexity_margin_at(root, seg, PowerParam(1), 1, 4, 0.5);
    EXPECT_NEAR(w.lhs, std::sqrt(2.5), 1e-15);
    EXPECT_EQ(w.rhs, 1.5);
    // with three t values the midpoint is the only interior point
    const auto coarse = check_phi_r_convex(root, seg, PowerParam(1), GridSpec{33, 33, 3});
    EXPECT_EQ(coarse.witness.u, 1.0);
    EXPECT_EQ(coarse.witness.v, 4.0);
    EXPECT_EQ(coarse.witness.t, 0.5);
    EXPECT_NEAR(coarse.worst_margin, std::sqrt(2.5) - 1.5, 1e-15);
}

TEST(CheckPhiRConvex, NegativeOrdersAreFlagged) {
    const auto v = check_phi_r_convex(FuncSpec(ExpAffine{1, 0}), kUnit, PowerParam(-1));
    EXPECT_TRUE(v.outside_theorem_hypotheses);
    EXPECT_FALSE(check_phi_r_convex(FuncSpec(ExpAffine{1, 0}), kUnit, PowerParam(0)).outside_theorem_hypotheses);
}

TEST(CheckPhiRConvex, Errors) {
    EXPECT_THROW(check_phi_r_convex(FuncSpec(ExpAffine{1, 0}), kUnit, PowerParam(1), GridSpec{1, 5, 5}), DomainError);
    EXPECT_THROW(check_phi_r_convex(FuncSpec::parse("expr:ln(x)"), kUnit, PowerParam(1)), EvaluationError);
}

TEST(GridSpec, Parse) {
    const GridSpec g = GridSpec::parse("9,8,7");
    EXPECT_EQ(g.u, 9u);
    EXPECT_EQ(g.v, 8u);
    EXPECT_EQ(g.t, 7u);
    EXPECT_EQ(g.to_string(), "9,8,7");
    EXPECT_THROW(GridSpec::parse("9,8"), UsageError);
    EXPECT_THROW(GridSpec::parse("9,8,7,6"), UsageError);
    EXPECT_THROW(GridSpec::parse("1,8,7"), UsageError);
    EXPECT_THROW(GridSpec::parse("2.5,8,7"), UsageError);
}

TEST(RIndex, Examples) {
    const RIndex e = r_convexity_index(FuncSpec(ExpAffine{1, 0}), kUnit);
    EXPECT_TRUE(e.kind == RIndex::Kind::BelowFloor || e.value <= 0.0);
    const RIndex p = r_convexity_index(FuncSpec(PowerAffine{2, 1, 1}), kUnit);
    EXPECT_EQ(p.kind, RIndex::Kind::Finite);
    EXPECT_NEAR(p.value, 0.5, 1e-3);
    const RIndex c = r_convexity_index(FuncSpec::constant(3), kUnit);
    EXPECT_EQ(c.kind, RIndex::Kind::BelowFloor);
    EXPECT_EQ(c.to_string(), "below-floor");
}

TEST(RIndex, ConcaveFunctionsHitTheCeiling) {
    // ln(1 + x) on [1, 9] is not r-convex for any modest r
    const RIndex v = r_convexity_index(FuncSpec::parse("expr:ln(1+x)"), make_segment(1, 9, 0), GridSpec{9, 9, 5});
    EXPECT_TRUE(v.kind == RIndex::Kind::AboveCeiling || v.value > 1.0);
}

TEST(ClassifyProperties, MonotoneInOrder) {
    oracle::Rng rng(41);
    const GridSpec grid{9, 9, 5};
    for (int i = 0; i < 40; ++i) {
        const FuncSpec f(PowerAffine{rng.uniform(-3, 3), rng.uniform(0.5, 2), rng.uniform(0, 1)});
        const PathSegment seg = make_segment(0, rng.uniform(0.5, 2), rng.uniform(0, 1.2));
        bool held = false;
        for (double r = -4; r <= 4; r += 0.5) {
            const bool h = check_phi_r_convex(f, seg, PowerParam(r), grid).holds;
            if (held) {
                EXPECT_TRUE(h) << f.to_text() << " r=" << r;
            }
            held = held || h;
        }
    }
}

TEST(ClassifyProperties, PositiveScalingKeepsTheVerdict) {
    oracle::Rng rng(42);
    const GridSpec grid{9, 9, 5};
    for (int i = 0; i < 40; ++i) {
        const FuncSpec f(PowerAffine{rng.uniform(-3, 3), rng.uniform(0.5, 2), rng.uniform(0, 1)});
        const double c = rng.log_uniform(1e-2, 1e2), r = rng.uniform(-2, 3);
        const auto base = check_phi_r_convex(f, kUnit, PowerParam(r), grid);
        const auto scaled = check_phi_r_convex(f.scaled(c), kUnit, PowerParam(r), grid);
        // verdicts right at the slack boundary may legitimately flip
        if (std::abs(base.worst_margin) > 1e-9 * c + 1e-9) {
            EXPECT_EQ(base.holds, scaled.holds) << f.to_text();
        }
    }
}

TEST(ClassifyProperties, WitnessReproduces) {
    oracle::Rng rng(43);
    for (int i = 0; i < 40; ++i) {
        const FuncSpec f(PowerAffine{rng.uniform(0.1, 0.9), rng.uniform(0.5, 2), rng.uniform(0.1, 1)});
        const PathSegment seg = make_segment(0, rng.uniform(0.5, 3), rng.uniform(0, 1.2));
        const PowerParam r(rng.uniform(0.95, 3));
        const auto v = check_phi_r_convex(f, seg, r, GridSpec{9, 9, 5});
        ASSERT_FALSE(v.holds) << f.to_text();
        // independent re-evaluation of both sides
        const double k = std::cos(seg.phi);
        const double lhs = std::pow(f.value_at(v.witness.u + v.witness.t * k * (v.witness.v - v.witness.u)), 1.0);
        const double rhs = double(oracle::naive_power_mean(f.value_at(v.witness.u), f.value_at(v.witness.v),
                                                           v.witness.t, r.value()));
        EXPECT_GT(lhs - rhs, 0.0);
        EXPECT_NEAR(lhs - rhs, v.worst_margin, 1e-12);
    }
}
