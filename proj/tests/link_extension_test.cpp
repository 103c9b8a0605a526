#include <gtest/gtest.h>

#include <cmath>

#include "ccb/link.hpp"

namespace {

using namespace ccb;

TEST(LinkExtension, IdentityUnchanged) {
    LinkFunction f = extend_link_range(LinkFunction::identity(), 3);
    EXPECT_FALSE(f.upper.active);
    EXPECT_FALSE(f.lower.active);
    EXPECT_EQ(f.eval(-12.0), -12.0);
    EXPECT_EQ(f.eval(7.5), 7.5);
}

TEST(LinkExtension, SplicePointsAndContinuity) {
    LinkFunction base = LinkFunction::logistic();
    LinkFunction g = extend_link_range(base, 2);
    EXPECT_TRUE(g.upper.active);
    EXPECT_TRUE(g.lower.active);
    EXPECT_EQ(g.upper.x_star, 4.0);
    EXPECT_EQ(g.lower.x_star, -2.0);
    // Value continuity right at the splices.
    EXPECT_NEAR(g.eval(4.0), base.base_eval(4.0), 1e-15);
    EXPECT_NEAR(g.eval(std::nextafter(4.0, 5.0)), base.base_eval(4.0), 1e-12);
    EXPECT_NEAR(g.eval(std::nextafter(-2.0, -3.0)), base.base_eval(-2.0),
                1e-12);
}

TEST(LinkExtension, UpperTailMatchesPrintedFormula) {
    LinkFunction base = LinkFunction::logistic();
    LinkFunction g = extend_link_range(base, 2);
    double xs = 4.0;
    double f = base.base_eval(xs);
    double fp = base.base_d1(xs);
    double fpp = base.base_d2(xs);
    double expected = f + (fp * fp / fpp) *
                              (std::log(-fp / fpp) - std::log(1.0 - fp / fpp));
    EXPECT_NEAR(g.eval(xs + 1.0), expected, 1e-14);
}

TEST(LinkExtension, CurvatureFallbackWhenThresholdFailsSign) {
    // pa_count = 0: x* = 0 has f'' = 0, so both tails step to the first
    // integer with the right curvature sign.
    LinkFunction g = extend_link_range(LinkFunction::logistic(), 0);
    EXPECT_EQ(g.upper.x_star, 1.0);
    EXPECT_EQ(g.lower.x_star, -1.0);
}

TEST(LinkExtension, MonotoneOnWideGrid) {
    LinkFunction g = extend_link_range(LinkFunction::logistic(), 2);
    double prev = g.eval(-50.0);
    for (double x = -49.9; x <= 50.0; x += 0.1) {
        double v = g.eval(x);
        EXPECT_GT(v, prev) << "at x=" << x;
        prev = v;
    }
}

TEST(LinkExtension, C1AtSplicesByFiniteDifferences) {
    LinkFunction g = extend_link_range(LinkFunction::logistic(), 2);
    // The extension is C2 at each splice, so the symmetric quotient across
    // the splice converges at O(h^2) to the analytic derivative.
    for (double xs : {4.0, -2.0}) {
        double h = 1e-5;
        double fd = (g.eval(xs + h) - g.eval(xs - h)) / (2.0 * h);
        EXPECT_NEAR(fd, g.d1(xs), 1e-9) << "splice " << xs;
    }
}

TEST(LinkExtension, C2AtSplicesByFiniteDifferences) {
    LinkFunction g = extend_link_range(LinkFunction::logistic(), 2);
    for (double xs : {4.0, -2.0}) {
        double h = 1e-4;
        double fd =
            (g.eval(xs + h) - 2.0 * g.eval(xs) + g.eval(xs - h)) / (h * h);
        EXPECT_NEAR(fd, g.d2(xs), 1e-5) << "splice " << xs;
    }
}

TEST(LinkExtension, DerivativesConsistentWithValues) {
    LinkFunction g = extend_link_range(LinkFunction::logistic(), 2);
    for (double x : {-30.0, -2.5, 0.0, 3.0, 4.5, 20.0}) {
        double h = 1e-6;
        double fd = (g.eval(x + h) - g.eval(x - h)) / (2.0 * h);
        EXPECT_NEAR(fd, g.d1(x), 1e-7) << "x=" << x;
        EXPECT_GT(g.d1(x), 0.0);
    }
}

TEST(LinkExtension, RangeCoversTargets) {
    LinkFunction g = extend_link_range(LinkFunction::logistic(), 2);
    // Logarithmic tails: unbounded in both directions (growth ~ C ln x).
    EXPECT_GT(g.eval(1e9), 1.3);
    EXPECT_LT(g.eval(-1e9), -0.3);
    EXPECT_GT(g.eval(1e18), g.eval(1e9) + 0.1);
    EXPECT_LT(g.eval(-1e18), g.eval(-1e9) - 0.1);
    // Derivative bounds never exceed the base maxima (1/4 and ~0.0962).
    for (double x = -40.0; x <= 40.0; x += 0.25) {
        EXPECT_LE(g.d1(x), 0.25 + 1e-12);
        EXPECT_LE(std::fabs(g.d2(x)), 0.1);
    }
}

}  // namespace
