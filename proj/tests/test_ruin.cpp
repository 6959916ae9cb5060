#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ratchet_levy/montecarlo.hpp"
#include "ratchet_levy/ruin.hpp"

using namespace ratchet_levy;

namespace {

const LevyModel kModel = LevyModel::brownian(1.0, 2.0);
constexpr double kDelta = 0.05;

Strategy base(double a = 3.0, double b = 5.0) { return {a, b, 0.0, 0.1, 1.0}; }

double ruin(const Strategy& s, double y, double delta = kDelta) { return laplace_ruin(kModel, s, delta, y).value; }

}  // namespace

TEST(RuinFrozen, BaseParameters)
{
    const RuinEvaluator l(kModel, base(), kDelta);
    EXPECT_NEAR(l(2.0).value, 0.708060787676126, 1e-12);
    EXPECT_NEAR(l(3.0).value, 0.661185154055095, 1e-12);
    EXPECT_NEAR(l(4.0).value, 0.644169631100719, 1e-12);
    EXPECT_NEAR(l(5.0).value, 0.640092203413092, 1e-12);
    EXPECT_NEAR(l(8.0).value, 0.635880716995234, 1e-12);
}

TEST(RuinRegions, DispatchAndSeams)
{
    const RuinEvaluator l(kModel, base(), kDelta);
    EXPECT_EQ(l(2.0).region, Region::lower);
    EXPECT_EQ(l(3.0).region, Region::middle);
    EXPECT_EQ(l(5.0).region, Region::upper);
    EXPECT_DOUBLE_EQ(l(5.0).value, l.at_b());
    EXPECT_NEAR(l(3.0).value, l.at_a(), 1e-12);
    EXPECT_NEAR(l(5.0 - 1e-10).value, l.at_b(), 1e-8);
    EXPECT_NEAR(l(3.0 - 1e-10).value, l.at_a(), 1e-8);
}

TEST(RuinRegions, ContinuityOverRandomDraws)
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int draw = 0; draw < 20; ++draw) {
        const double a = 0.5 + 4.5 * u(gen);
        const double b = a + 0.2 + 8.0 * u(gen);
        const double c2 = 0.01 + 0.5 * u(gen);
        const RuinEvaluator l(LevyModel::brownian(1.0, 0.5 + 2.0 * u(gen)), {a, b, 0.1 * u(gen), c2, 0.1 + 3.0 * u(gen)},
                              0.01 + 0.1 * u(gen));
        EXPECT_NEAR(l(b - 1e-6).value, l(b).value, 1e-4);
        EXPECT_NEAR(l(a - 1e-6).value, l(a).value, 1e-4);
    }
}

TEST(RuinBoundary, ZeroSurplusIsImmediateRuin)
{
    EXPECT_EQ(ruin(base(), 0.0), 1.0);
    EXPECT_EQ(laplace_ruin_ratchet_only(kModel, 5.0, 0.0, 0.1, kDelta, 0.0), 1.0);
}

TEST(RuinBoundary, VanishingDiscountGivesCertainRuin)
{
    for (double y : {2.0, 5.0, 8.0}) {
        const double v = ruin(base(), y, 1e-8);
        EXPECT_LE(v, 1.0);
        EXPECT_GE(v, 1.0 - 1e-6);
    }
}

TEST(RuinBoundary, RatchetOnlyTendsToRuinProbability)
{
    // Without periodic payments the surplus can escape to infinity: the limit
    // is the ruin probability, exp(-2 (mu - c2) y / sigma^2) above b.
    for (double y : {5.0, 8.0}) {
        const double p = std::exp(-2.0 * 0.9 * y / 4.0);
        EXPECT_NEAR(laplace_ruin_ratchet_only(kModel, 5.0, 0.0, 0.1, 1e-8, y), p, 1e-7);
        EXPECT_NEAR(laplace_ruin_ratchet_only(kModel, 5.0, 0.0, 0.1, 0.0, y), p, 1e-12);
    }
    const double below = laplace_ruin_ratchet_only(kModel, 5.0, 0.0, 0.1, 0.0, 2.0);
    EXPECT_GT(below, std::exp(-2.0 * 1.0 * 2.0 / 4.0));
    EXPECT_LT(below, std::exp(-2.0 * 0.9 * 2.0 / 4.0));
}

TEST(RuinBoundary, ZeroDiscountAllowed)
{
    for (double y : {0.5, 4.0, 9.0}) EXPECT_NEAR(ruin(base(), y, 0.0), 1.0, 1e-9);
    EXPECT_THROW(ruin(base(), 1.0, -0.01), ValidationError);
    EXPECT_THROW(ruin(base(), -1.0), ValidationError);
    EXPECT_THROW(ruin(base(0.0, 5.0), 1.0), InvalidStrategy);
}

TEST(RuinProperties, RangeAndDecreasingInSurplus)
{
    for (const auto& s : {base(), base(5.0, 5.0), Strategy{4.0, 4.0, 0.0, 0.5, 0.3}}) {
        const RuinEvaluator l(kModel, s, kDelta);
        double prev = 2.0;
        for (double y = 0.0; y <= 15.0; y += 0.05) {
            const double v = l(y).value;
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
            EXPECT_LE(v, prev + 1e-12) << "y " << y;
            prev = v;
        }
    }
}

TEST(RuinProperties, CanRiseTowardHeavyRatchet)
{
    // With a large ratchet increment, starting closer to b brings the heavier
    // drain forward; a 2e5-path simulation gives 0.92649(13) at y = 4.7 and
    // 0.93141(12) at y = 7.99, confirming the closed-form values below.
    const RuinEvaluator l(kModel, {1.0, 8.0, 0.1, 0.3, 2.0}, kDelta);
    EXPECT_NEAR(l(4.7).value, 0.92655035, 1e-8);
    EXPECT_NEAR(l(7.99).value, 0.93142376, 1e-8);
    EXPECT_GT(l(7.99).value, l(4.7).value);
}

TEST(RuinProperties, IncreasingInDecisionRate)
{
    for (double y : {2.0, 8.0}) {
        double prev = 0.0;
        for (double g : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            const double v = ruin({3.0, 4.0, 0.0, 0.1, g}, y);
            EXPECT_GT(v, prev);
            prev = v;
        }
    }
}

TEST(RuinProperties, DecreasingInBarriers)
{
    for (double y : {2.0, 8.0}) {
        double prev = 2.0;
        for (double a = 0.05; a <= 5.0 + 1e-9; a += 0.05) {
            const double v = ruin(base(std::min(a, 5.0), 5.0), y);
            EXPECT_LE(v, prev + 1e-12) << "a " << a;
            prev = v;
        }
    }
    double prev = 2.0;
    for (double b = 3.0; b <= 20.0; b += 0.25) {
        const double v = ruin(base(3.0, b), 10.0);
        EXPECT_LE(v, prev + 1e-12) << "b " << b;
        prev = v;
    }
}

TEST(RuinProperties, IncreasingInRatchetRates)
{
    // Faster draining brings ruin sooner, so the transform grows with c1, c2.
    const double y = 5.0;
    double prev = 0.0;
    for (double c1 = 0.0; c1 <= 0.3 + 1e-9; c1 += 0.05) {
        const double v = ruin({3.0, 4.0, c1, 0.1, 1.0}, y);
        EXPECT_GE(v, prev - 1e-12);
        prev = v;
    }
    prev = 0.0;
    for (double c2 = 0.05; c2 <= 0.3 + 1e-9; c2 += 0.05) {
        const double v = ruin({3.0, 4.0, 0.0, c2, 1.0}, y);
        EXPECT_GE(v, prev - 1e-12);
        prev = v;
    }
}

TEST(RuinLimits, RatchetOnly)
{
    for (double y : {2.0, 5.0, 8.0})
        EXPECT_NEAR(ruin({3.0, 5.0, 0.0, 0.1, 1e-5}, y), laplace_ruin_ratchet_only(kModel, 5.0, 0.0, 0.1, kDelta, y),
                    1e-3);
}

TEST(RuinMonteCarlo, AgreesAtEightDeep)
{
    SimConfig cfg;
    cfg.dt = 0.01;
    cfg.t_max = 400.0;
    cfg.n_paths = 20000;
    cfg.seed = 3;
    const auto mc = estimate(kModel, base(), kDelta, 8.0, cfg, McTarget::ruin_laplace);
    EXPECT_LE(std::abs(ruin(base(), 8.0) - mc.mean), 4.0 * mc.std_error) << "mc " << mc.mean;
}
