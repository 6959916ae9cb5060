#include <cmath>
#include <type_traits>

#include <gtest/gtest.h>

#include "ratchet_levy/montecarlo.hpp"
#include "ratchet_levy/valuation.hpp"

using namespace ratchet_levy;

namespace {

const LevyModel kModel = LevyModel::brownian(1.0, 2.0);
const Strategy kBase{3.0, 5.0, 0.0, 0.1, 1.0};
constexpr double kDelta = 0.05;

SimConfig small(std::uint64_t n = 2000)
{
    SimConfig cfg;
    cfg.dt = 0.01;
    cfg.t_max = 400.0;
    cfg.n_paths = n;
    cfg.seed = 99;
    return cfg;
}

}  // namespace

TEST(MonteCarloConfig, RejectsCoarseStep)
{
    SimConfig cfg = small();
    cfg.dt = 0.2;
    EXPECT_THROW(estimate_all(kModel, kBase, kDelta, 5.0, cfg), ConfigError);
    cfg.dt = 0.1;
    EXPECT_NO_THROW(simulate_path(kModel, kBase, kDelta, 5.0, cfg, 0));
}

TEST(MonteCarloConfig, RejectsBadInputs)
{
    SimConfig cfg = small();
    EXPECT_THROW(simulate_path(kModel, kBase, kDelta, -1.0, cfg, 0), ConfigError);
    EXPECT_THROW(simulate_path(kModel, kBase, -0.1, 1.0, cfg, 0), ConfigError);
    EXPECT_THROW(simulate_path(kModel, {5.0, 3.0, 0.0, 0.1, 1.0}, kDelta, 1.0, cfg, 0), ConfigError);
    cfg.n_paths = 0;
    EXPECT_THROW(estimate_all(kModel, kBase, kDelta, 1.0, cfg), ConfigError);
    cfg.n_paths = 3;
    cfg.antithetic = true;
    EXPECT_THROW(estimate_all(kModel, kBase, kDelta, 1.0, cfg), ConfigError);
    static_assert(std::is_base_of_v<ValidationError, ConfigError>);
}

TEST(MonteCarloPaths, ReproducibleByIndex)
{
    const auto cfg = small();
    const auto a = simulate_path(kModel, kBase, kDelta, 4.0, cfg, 17);
    const auto b = simulate_path(kModel, kBase, kDelta, 4.0, cfg, 17);
    const auto c = simulate_path(kModel, kBase, kDelta, 4.0, cfg, 18);
    EXPECT_EQ(a.tau, b.tau);
    EXPECT_EQ(a.dividends(), b.dividends());
    EXPECT_NE(a.dividends(), c.dividends());
}

TEST(MonteCarloPaths, TraceInvariants)
{
    const auto cfg = small();
    for (std::uint64_t i = 0; i < 20; ++i) {
        PathTrace trace;
        const auto o = simulate_path(kModel, kBase, kDelta, 4.0, cfg, i, &trace);
        ASSERT_FALSE(trace.steps.empty());
        for (std::size_t k = 1; k < trace.steps.size(); ++k) {
            EXPECT_GE(trace.steps[k].rate, trace.steps[k - 1].rate);
            EXPECT_GE(trace.steps[k].surplus, 0.0);
        }
        for (const auto& p : trace.payments) {
            EXPECT_GT(p.before, kBase.a);
            EXPECT_LE(p.after, kBase.a);
        }
        EXPECT_EQ(o.payments, trace.payments.size());
        EXPECT_LE(o.payments, o.decisions);
        EXPECT_LE(o.disc_ratchet, (kBase.c1 + kBase.c2) / kDelta);
        EXPECT_GE(o.disc_ruin_indicator, 0.0);
        EXPECT_LE(o.disc_ruin_indicator, 1.0);
        if (o.ruined) EXPECT_NEAR(o.disc_ruin_indicator, std::exp(-kDelta * o.tau), 1e-15);
        if (o.ratchet_time == std::numeric_limits<double>::infinity()) EXPECT_EQ(o.disc_ratchet, 0.0);
    }
}

TEST(MonteCarloPaths, StartingAboveRatchetBarrier)
{
    const auto o = simulate_path(kModel, kBase, kDelta, 6.0, small(), 0);
    EXPECT_EQ(o.ratchet_time, 0.0);
    EXPECT_GT(o.disc_ratchet, 0.0);
}

TEST(MonteCarloPaths, ZeroSurplusIsImmediateRuin)
{
    const auto o = simulate_path(kModel, kBase, kDelta, 0.0, small(), 0);
    EXPECT_TRUE(o.ruined);
    EXPECT_EQ(o.tau, 0.0);
    EXPECT_EQ(o.disc_ruin_indicator, 1.0);
    EXPECT_EQ(o.dividends(), 0.0);
}

TEST(MonteCarloPaths, NoControlPaysNothing)
{
    const Strategy none{3.0, 5.0, 0.0, 0.0, 0.0};
    for (std::uint64_t i = 0; i < 10; ++i) {
        const auto o = simulate_path(kModel, none, kDelta, 4.0, small(), i);
        EXPECT_EQ(o.dividends(), 0.0);
        EXPECT_EQ(o.decisions, 0u);
    }
}

TEST(MonteCarloPaths, CompoundPoissonJumpsCanRuin)
{
    const LevyModel cpe = LevyModel::compound_poisson(2.0, 0.0, 1.0, 1.0);
    SimConfig cfg = small(4000);
    const auto e = estimate_all(cpe, kBase, kDelta, 1.0, cfg);
    EXPECT_GT(e.ruin.mean, 0.0);
    EXPECT_LT(e.ruin.mean, 1.0);
    const double closed = value(cpe, kBase, kDelta, 1.0).value;
    EXPECT_LE(std::abs(closed - e.dividends.mean), 4.0 * e.dividends.std_error);
}

TEST(MonteCarloEstimate, IndependentOfWorkerCount)
{
    SimConfig cfg = small(1500);
    cfg.workers = 1;
    const auto one = estimate_all(kModel, kBase, kDelta, 5.0, cfg);
    for (unsigned w : {2u, 4u, 16u}) {
        cfg.workers = w;
        const auto many = estimate_all(kModel, kBase, kDelta, 5.0, cfg);
        EXPECT_EQ(one.dividends.mean, many.dividends.mean);
        EXPECT_EQ(one.dividends.std_error, many.dividends.std_error);
        EXPECT_EQ(one.ruin.mean, many.ruin.mean);
        EXPECT_EQ(one.ruin.std_error, many.ruin.std_error);
    }
}

TEST(MonteCarloEstimate, SingleUnitHasNoStandardError)
{
    SimConfig cfg = small(1);
    const auto e = estimate(kModel, kBase, kDelta, 5.0, cfg, McTarget::dividend_npv);
    EXPECT_FALSE(e.se_defined);
    EXPECT_EQ(e.n, 1u);
    cfg.n_paths = 2;
    cfg.antithetic = true;
    EXPECT_FALSE(estimate_all(kModel, kBase, kDelta, 5.0, cfg).ruin.se_defined);
}

TEST(MonteCarloEstimate, CensoringReported)
{
    SimConfig cfg = small(200);
    cfg.t_max = 1.0;
    const auto e = estimate_all(kModel, kBase, kDelta, 8.0, cfg);
    EXPECT_GT(e.dividends.censored_fraction, 0.5);
    EXPECT_EQ(e.dividends.censored_fraction, e.ruin.censored_fraction);
    EXPECT_GE(e.dividends.std_error, 0.0);
}

TEST(MonteCarloEstimate, AntitheticPairsAgreeWithClosedForm)
{
    SimConfig cfg = small(20000);
    cfg.antithetic = true;
    const auto e = estimate_all(kModel, kBase, kDelta, 5.0, cfg);
    const double v = value(kModel, kBase, kDelta, 5.0).value;
    EXPECT_LE(std::abs(v - e.dividends.mean), 4.0 * e.dividends.std_error);
    const auto a = simulate_path(kModel, kBase, kDelta, 5.0, cfg, 4);
    const auto b = simulate_path(kModel, kBase, kDelta, 5.0, cfg, 5);
    EXPECT_NE(a.dividends(), b.dividends());
}

TEST(MonteCarloEstimate, TargetsNamed)
{
    EXPECT_EQ(to_string(McTarget::dividend_npv), "DividendNPV");
    EXPECT_EQ(to_string(McTarget::ruin_laplace), "RuinLaplace");
}

TEST(MonteCarloBridge, TouchProbability)
{
    EXPECT_DOUBLE_EQ(detail::bridge_touch_probability(1.0, 1.0, 2.0), std::exp(-1.0));
    EXPECT_EQ(detail::bridge_touch_probability(100.0, 100.0, 1e-3), 0.0);
    EXPECT_NEAR(detail::bridge_touch_probability(1e-12, 1.0, 1.0), 1.0, 1e-11);
}
