#pragma once

#include <cmath>
#include <optional>

#include "ratchet_levy/errors.hpp"
#include "ratchet_levy/models.hpp"
#include "ratchet_levy/scale.hpp"
#include "ratchet_levy/strategy.hpp"

namespace ratchet_levy {

/// Expected NPV of dividends V(y; a, b) with its decomposition:
/// value = ratchet_part + periodic_part + continuation, where continuation is
/// the discounted value carried over from the next region up.
struct ValuationResult {
    double value = 0.0;
    Region region = Region::upper;
    double ratchet_part = 0.0;
    double periodic_part = 0.0;
    double continuation = 0.0;
    KernelSet kernels = KernelSet::x_tilde_drained_c1_c2;
};

namespace detail {

inline void require_positive_delta(double delta)
{
    require(std::isfinite(delta) && delta > 0.0, "delta > 0 required for dividend valuation");
}

inline void require_initial_surplus(double y)
{
    require(std::isfinite(y) && y >= 0.0, "y >= 0 required");
}

}  // namespace detail

/// Three-region valuation for one (model, strategy, delta); the scale kits
/// and the seam constants V_U(b) and V_M(a) are built once and reused.
class Valuator {
public:
    Valuator(const LevyModel& model, const Strategy& s, double delta,
             std::optional<ScaleBackend> backend = std::nullopt)
        : kits_(checked(model, s, delta), s, delta, backend)
    {
        const double a = s.a, b = s.b;
        const auto& x = kits_.x();
        const double g = s.gamma;
        v_upper_b_ = upper(b).value;
        i_b_ = x.i_kernel(a, b - a);
        middle_constant_ = v_upper_b_ + c1_over_delta() * (x.j_kernel(a, b - a) - 1.0) +
                           g * x.wbarbar(delta + g, b - a);
        v_middle_a_ = middle_constant_ / i_b_ - c1_over_delta() * (x.z(delta, a) - 1.0);
    }

    const StrategyKits& kits() const { return kits_; }

    ValuationResult upper(double y) const
    {
        if (!(y >= strategy().b)) throw InvalidRegion("upper region requires y >= b");
        const auto [ratchet, periodic] = kits_.value_upper_parts(y);
        return {ratchet + periodic, Region::upper, ratchet, periodic, 0.0,
                KernelSet::x_tilde_drained_c1_c2};
    }

    ValuationResult middle(double y) const
    {
        const auto& s = strategy();
        if (!(y >= s.a && y < s.b)) throw InvalidRegion("middle region requires a <= y < b");
        const auto& x = kits_.x();
        const double d = kits_.delta(), g = s.gamma, a = s.a, b = s.b;
        const double ratio = x.i_kernel(a, y - a) / i_b_;
        const double ratchet =
            c1_over_delta() * (1.0 - x.j_kernel(a, y - a) + (x.j_kernel(a, b - a) - 1.0) * ratio);
        const double periodic = g * (x.wbarbar(d + g, b - a) * ratio - x.wbarbar(d + g, y - a));
        const double continuation = ratio * v_upper_b_;
        return {ratchet + periodic + continuation, Region::middle, ratchet, periodic, continuation,
                KernelSet::x_drained_c1};
    }

    ValuationResult lower(double y) const
    {
        const auto& s = strategy();
        if (!(y >= 0.0 && y < s.a)) throw InvalidRegion("lower region requires 0 <= y < a");
        const auto& x = kits_.x();
        const double d = kits_.delta();
        const double ratio = x.w(d, y) / x.w(d, s.a);
        const double ratchet = c1_over_delta() * (1.0 - x.z(d, y) + (x.z(d, s.a) - 1.0) * ratio);
        const double continuation = ratio * v_middle_a_;
        return {ratchet + continuation, Region::lower, ratchet, 0.0, continuation,
                KernelSet::x_drained_c1};
    }

    ValuationResult value(double y) const
    {
        detail::require_initial_surplus(y);
        switch (classify(strategy(), y)) {
        case Region::upper: return upper(y);
        case Region::middle: return middle(y);
        default: return lower(y);
        }
    }

    /// Seam constants V_U(b; a, b) and V_M(a; a, b).
    double upper_at_b() const { return v_upper_b_; }
    double middle_at_a() const { return v_middle_a_; }

private:
    static const LevyModel& checked(const LevyModel& model, const Strategy& s, double delta)
    {
        s.validate_for(model);
        if (!(s.a > 0.0)) throw InvalidStrategy("a > 0 required for valuation");
        detail::require_positive_delta(delta);
        return model;
    }

    const Strategy& strategy() const { return kits_.strategy(); }
    double c1_over_delta() const { return strategy().c1 / kits_.delta(); }

    StrategyKits kits_;
    double v_upper_b_ = 0.0;
    double i_b_ = 1.0;
    double middle_constant_ = 0.0;
    double v_middle_a_ = 0.0;
};

inline ValuationResult value_upper(const LevyModel& model, const Strategy& s, double delta, double y)
{
    if (!(y >= s.b)) throw InvalidRegion("upper region requires y >= b");
    return Valuator(model, s, delta).upper(y);
}

inline ValuationResult value_middle(const LevyModel& model, const Strategy& s, double delta, double y)
{
    if (!(y >= s.a && y < s.b)) throw InvalidRegion("middle region requires a <= y < b");
    return Valuator(model, s, delta).middle(y);
}

inline ValuationResult value_lower(const LevyModel& model, const Strategy& s, double delta, double y)
{
    if (!(y >= 0.0 && y < s.a)) throw InvalidRegion("lower region requires 0 <= y < a");
    return Valuator(model, s, delta).lower(y);
}

inline ValuationResult value(const LevyModel& model, const Strategy& s, double delta, double y)
{
    detail::require_initial_surplus(y);
    return Valuator(model, s, delta).value(y);
}

/// Value of the strategy without a ratcheting barrier (b = infinity): constant
/// rate c1 plus periodic payments above a, on X = Y - c1 t.
inline double value_no_ratchet(const LevyModel& model, double a, double c1, double gamma,
                               double delta, double y)
{
    model.validate();
    detail::require_initial_surplus(y);
    detail::require_positive_delta(delta);
    if (!(a > 0.0)) throw InvalidStrategy("a > 0 required");
    if (!(gamma > 0.0)) throw InvalidStrategy("gamma > 0 required");
    if (!(c1 >= 0.0)) throw InvalidStrategy("c1 >= 0 required");
    if (!(model.mean_drift() - c1 > 0.0))
        throw InvalidStrategy("positive drift required: E[Y(1)] - c1 > 0");
    const ScaleKit x(DrainedProcess{model, c1}, delta, gamma);
    const double phi = x.boosted().phi();
    const double w_a = x.w(delta, a);
    const double zp = x.z_theta_prime(delta, a, phi);
    const double i = x.i_kernel(a, y - a);
    const double ruin = x.j_kernel(a, y - a) - i * delta * w_a * x.z_theta(delta, a, phi) / zp;
    const double periodic = gamma * (i * w_a / (phi * zp) - x.wbarbar(delta + gamma, y - a));
    return c1 / delta * (1.0 - ruin) + periodic;
}

/// Pure periodic barrier strategy at a (the c1 = 0, c2 -> 0 limit).
inline double value_periodic_only(const LevyModel& model, double a, double gamma, double delta,
                                  double y)
{
    return value_no_ratchet(model, a, 0.0, gamma, delta, y);
}

/// Pure ratcheting strategy (the gamma -> 0 limit): rate c1, raised to
/// c1 + c2 when the surplus first reaches b.
inline double value_ratchet_only(const LevyModel& model, double b, double c1, double c2,
                                 double delta, double y)
{
    detail::require_initial_surplus(y);
    detail::require_positive_delta(delta);
    if (!(b > 0.0)) throw InvalidStrategy("b > 0 required");
    if (!(c1 >= 0.0)) throw InvalidStrategy("c1 >= 0 required");
    if (!(c2 > 0.0)) throw InvalidStrategy("c2 > 0 required");
    model.validate();
    if (!(model.mean_drift() - c1 - c2 > 0.0))
        throw InvalidStrategy("positive drift required: E[Y(1)] - c1 - c2 > 0");
    const ScaleKit x(DrainedProcess{model, c1}, delta, 0.0);
    const ScaleKit xt(DrainedProcess{model, c1 + c2}, delta, 0.0);
    const double phi = xt.base().phi();
    const auto upper = [&](double u) {
        return (c1 + c2) / delta * (1.0 - xt.z(delta, u) + delta / phi * xt.w(delta, u));
    };
    if (y >= b) return upper(y);
    const double ratio = x.w(delta, y) / x.w(delta, b);
    return upper(b) * ratio + c1 / delta * (1.0 - x.z(delta, y) + (x.z(delta, b) - 1.0) * ratio);
}

}  // namespace ratchet_levy
