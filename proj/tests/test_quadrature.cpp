#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hhlab/quadrature.hpp"
#include "oracles.hpp"

using namespace hhlab;

namespace {

const PathSegment kUnit = make_segment(0, 1, 0);

}  // namespace

TEST(Integrate, Examples) {
    const auto one = integrate([](double) { return 1.0; }, 0, 1);
    EXPECT_EQ(one.value, 1.0);
    EXPECT_TRUE(one.converged);
    const auto ex = integrate([](double t) { return std::exp(t); }, 0, 1);
    EXPECT_NEAR(ex.value, std::numbers::e - 1, 1e-14);
    EXPECT_TRUE(ex.converged);
    const auto sq = integrate([](double t) { return std::sqrt(1 + t); }, 0, 1);
    EXPECT_NEAR(sq.value, 2.0 / 3.0 * (2 * std::numbers::sqrt2 - 1), 1e-14);
    EXPECT_TRUE(sq.converged);
}

TEST(Integrate, ErrorBoundIsHonest) {
    struct Case {
        double (*g)(double);
        double exact;
    };
    const Case cases[] = {
        {[](double) { return 1.0; }, 1.0},
        {[](double t) { return std::exp(t); }, std::numbers::e - 1},
        {[](double t) { return std::sqrt(1 + t); }, 2.0 / 3.0 * (2 * std::numbers::sqrt2 - 1)},
    };
    for (const auto& c : cases) {
        for (double tol : {1e-4, 1e-8, 1e-10, 1e-13}) {
            const auto est = integrate(c.g, 0, 1, {tol, kDefaultMaxPanels});
            // a bound of zero still has to cover the rounding of the sum
            EXPECT_LE(std::abs(est.value - c.exact), est.error_bound + 4 * DBL_EPSILON * std::abs(c.exact));
            if (est.converged) {
                EXPECT_LE(est.error_bound, tol);
            }
        }
    }
}

TEST(Integrate, EndpointSingularityStaysWithinBudget) {
    // sqrt(t) has an unbounded derivative at 0
    const auto est = integrate([](double t) { return std::sqrt(t); }, 0, 1);
    EXPECT_TRUE(est.converged);
    EXPECT_NEAR(est.value, 2.0 / 3.0, 1e-10);
    EXPECT_GT(est.subdivisions, 1u);
    EXPECT_LE(est.subdivisions, kDefaultMaxPanels);
}

TEST(Integrate, PanelBudgetIsRespected) {
    const auto est = integrate([](double t) { return std::sin(1 / (t + 1e-4)); }, 0, 1, {1e-14, 8});
    EXPECT_LE(est.subdivisions, 8u);
    EXPECT_FALSE(est.converged);
}

TEST(Integrate, Preconditions) {
    EXPECT_THROW(integrate([](double) { return 1.0; }, 1, 1), DomainError);
    EXPECT_THROW(integrate([](double) { return 1.0; }, 0, 1, {0.0, 10}), DomainError);
    EXPECT_THROW(integrate([](double t) -> double { throw std::runtime_error("bad " + std::to_string(t)); }, 0, 1),
                 std::runtime_error);
}

TEST(Integrate, Linearity) {
    oracle::Rng rng(31);
    for (int i = 0; i < 100; ++i) {
        const double c = rng.log_uniform(1e-3, 1e3), k = rng.uniform(-3, 3);
        const auto g = integrate([&](double t) { return std::exp(k * t) + t * t; }, 0, 1);
        const auto cg = integrate([&](double t) { return c * (std::exp(k * t) + t * t); }, 0, 1, {1e-10 * c});
        EXPECT_LT(std::abs(cg.value - c * g.value), 1e-12 * std::abs(c * g.value));
    }
}

TEST(Integrate, MatchesLongDoubleSimpson) {
    oracle::Rng rng(32);
    for (int i = 0; i < 30; ++i) {
        const double p = rng.uniform(0.5, 4), k = rng.uniform(-2, 2);
        auto g = [&](auto t) { return std::pow(1 + t, p) * std::exp(k * t); };
        const auto est = integrate(g, 0, 1);
        EXPECT_NEAR(est.value, double(oracle::simpson(g, 0.0L, 1.0L)), 1e-10);
    }
}

TEST(MeanIntegral, Examples) {
    EXPECT_NEAR(mean_integral(FuncSpec(ExpAffine{1, 0}), kUnit).value, std::numbers::e - 1, 1e-12);
    EXPECT_NEAR(mean_integral(FuncSpec(TightFamily{1, 2, PowerParam(0.5)}), make_segment(-3, 8, 0.7)).value, 7.0 / 3.0,
                1e-12);
    EXPECT_NEAR(mean_integral(FuncSpec::constant(4.25), make_segment(2, 3, 1.2)).value, 4.25, 1e-14);
}

TEST(ExactTightIntegral, Examples) {
    EXPECT_NEAR(exact_tight_integral(1, 2, PowerParam(2)), 2.0 / 3.0 * (2 * std::numbers::sqrt2 - 1), 1e-15);
    EXPECT_NEAR(exact_tight_integral(1, 2, PowerParam(1)), 1.5, 1e-15);
    EXPECT_NEAR(exact_tight_integral(4, 4, PowerParam(3)), std::cbrt(4.0), 1e-15);
    EXPECT_THROW(exact_tight_integral(1, 2, PowerParam(0)), DomainError);
    EXPECT_THROW(exact_tight_integral(1, 2, PowerParam(-1)), DomainError);
    EXPECT_THROW(exact_tight_integral(0, 2, PowerParam(1)), DomainError);
}

TEST(ExactTightIntegral, AgreesWithTheAntiderivative) {
    oracle::Rng rng(33);
    for (int i = 0; i < 500; ++i) {
        const double A = rng.log_uniform(0.1, 10), B = rng.log_uniform(0.1, 10), r = rng.uniform(-5, 5);
        if (std::abs(r) < 0.05 || std::abs(r + 1) < 0.05 || std::abs(A - B) < 1e-3) continue;
        const double ref = double(oracle::tight_integral_antiderivative(A, B, r));
        EXPECT_LT(std::abs(exact_tight_integral(A, B, PowerParam(r)) - ref), 1e-11 * ref);
    }
    // the closed form stays smooth as B approaches A
    const double near = exact_tight_integral(2, 2 * (1 + 1e-12), PowerParam(0.5));
    EXPECT_NEAR(near, 4.0, 1e-10);
}

TEST(QuadratureProperties, OracleAgreementOnTheTightFamily) {
    oracle::Rng rng(34);
    const double tol = 1e-10;
    for (int i = 0; i < 400; ++i) {
        const double A = rng.uniform(0.1, 10), B = rng.uniform(0.1, 10);
        double r = rng.uniform(-5, 5);
        if (std::abs(r) < 1e-3 || std::abs(r + 1) < 1e-3) continue;
        const FuncSpec g(TightFamily{A, B, PowerParam(r)});
        const auto est = mean_integral(g, kUnit, {tol});
        const double exact = exact_tight_integral(A, B, PowerParam(r));
        // the requested tolerance is absolute per unit magnitude of the integrand
        const double scale = std::max({1.0, g.value_at(0), g.value_at(1)});
        if (scale > 1e6) continue;
        EXPECT_LE(std::abs(est.value - exact), 10 * tol * scale) << g.to_text();
    }
}
