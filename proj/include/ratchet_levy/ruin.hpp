#pragma once

#include <cmath>
#include <optional>

#include "ratchet_levy/errors.hpp"
#include "ratchet_levy/models.hpp"
#include "ratchet_levy/scale.hpp"
#include "ratchet_levy/strategy.hpp"

namespace ratchet_levy {

/// L(y; a, b) = E_y[exp(-delta tau); tau < inf] for the ruin time tau of the
/// controlled surplus.
struct RuinTransform {
    double value = 0.0;
    Region region = Region::upper;
};

/// Three-region ruin transform; the seam constants L(b; a, b) and L(a; a, b)
/// are computed once.
class RuinEvaluator {
public:
    RuinEvaluator(const LevyModel& model, const Strategy& s, double delta,
                  std::optional<ScaleBackend> backend = std::nullopt)
        : kits_(checked(model, s, delta), s, delta, backend)
    {
        const auto& x = kits_.x();
        l_b_ = kits_.ruin_upper(s.b);
        i_b_ = x.i_kernel(s.a, s.b - s.a);
        j_b_ = x.j_kernel(s.a, s.b - s.a);
        l_a_ = middle_formula(s.a);
    }

    const StrategyKits& kits() const { return kits_; }

    RuinTransform operator()(double y) const
    {
        detail::require(std::isfinite(y) && y >= 0.0, "y >= 0 required");
        const auto& s = kits_.strategy();
        const Region r = classify(s, y);
        if (r == Region::upper) return {kits_.ruin_upper(y), r};
        if (r == Region::middle) return {middle_formula(y), r};
        const auto& x = kits_.x();
        const double d = kits_.delta();
        const double ratio = x.w(d, y) / x.w(d, s.a);
        return {x.z(d, y) - x.z(d, s.a) * ratio + ratio * l_a_, r};
    }

    double at_b() const { return l_b_; }
    double at_a() const { return l_a_; }

private:
    static const LevyModel& checked(const LevyModel& model, const Strategy& s, double delta)
    {
        s.validate_for(model);
        if (!(s.a > 0.0)) throw InvalidStrategy("a > 0 required for the ruin transform");
        detail::require(std::isfinite(delta) && delta >= 0.0, "delta >= 0 required");
        return model;
    }

    // Between the barriers: ruin before reaching b, else restart from b.
    double middle_formula(double y) const
    {
        const auto& x = kits_.x();
        const double a = kits_.strategy().a;
        const double ratio = x.i_kernel(a, y - a) / i_b_;
        return x.j_kernel(a, y - a) - ratio * j_b_ + ratio * l_b_;
    }

    StrategyKits kits_;
    double l_b_ = 0.0;
    double i_b_ = 1.0;
    double j_b_ = 1.0;
    double l_a_ = 0.0;
};

inline RuinTransform laplace_ruin(const LevyModel& model, const Strategy& s, double delta, double y)
{
    return RuinEvaluator(model, s, delta)(y);
}

/// Ruin transform of the pure ratcheting strategy (the gamma -> 0 limit).
inline double laplace_ruin_ratchet_only(const LevyModel& model, double b, double c1, double c2,
                                        double delta, double y)
{
    detail::require(std::isfinite(y) && y >= 0.0, "y >= 0 required");
    detail::require(std::isfinite(delta) && delta >= 0.0, "delta >= 0 required");
    if (!(b > 0.0)) throw InvalidStrategy("b > 0 required");
    if (!(c1 >= 0.0)) throw InvalidStrategy("c1 >= 0 required");
    if (!(c2 >= 0.0)) throw InvalidStrategy("c2 >= 0 required");
    model.validate();
    if (!(model.mean_drift() - c1 - c2 > 0.0))
        throw InvalidStrategy("positive drift required: E[Y(1)] - c1 - c2 > 0");
    const ScaleKit x(DrainedProcess{model, c1}, delta, 0.0);
    const ScaleKit xt(DrainedProcess{model, c1 + c2}, delta, 0.0);
    const double phi = xt.base().phi();
    // As delta -> 0, delta / phi(delta) tends to psi'(0+), the drift of X~.
    const double slope = delta == 0.0 ? xt.process().effective_drift() : delta / phi;
    if (y >= b) return xt.z(delta, y) - slope * xt.w(delta, y);
    return x.z(delta, y) +
           x.w(delta, y) / x.w(delta, b) * (xt.z(delta, b) - x.z(delta, b) - slope * xt.w(delta, b));
}

}  // namespace ratchet_levy
