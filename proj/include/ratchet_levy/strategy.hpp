#pragma once

#include <cmath>
#include <optional>
#include <string_view>

#include "ratchet_levy/errors.hpp"
#include "ratchet_levy/models.hpp"
#include "ratchet_levy/scale.hpp"

namespace ratchet_levy {

/// Mixed ratcheting-periodic dividend strategy.
///
/// Dividends are paid continuously at rate c1, raised once and for all to
/// c1 + c2 when the surplus first reaches b; at the jump times of a Poisson
/// clock with intensity gamma any surplus above a is paid out as a lump.
struct Strategy {
    double a = 3.0;
    double b = 5.0;
    double c1 = 0.0;
    double c2 = 0.1;
    double gamma = 1.0;

    void validate() const
    {
        const auto need = [](bool ok, const char* what) {
            if (!ok) throw InvalidStrategy(what);
        };
        need(std::isfinite(a) && a >= 0.0, "a >= 0 required");
        need(std::isfinite(b) && b >= a, "b >= a required");
        need(std::isfinite(c1) && c1 >= 0.0, "c1 >= 0 required");
        need(std::isfinite(c2) && c2 > 0.0, "c2 > 0 required");
        need(std::isfinite(gamma) && gamma > 0.0, "gamma > 0 required");
    }

    /// The fully drained process X~ = Y - (c1 + c2) t must drift upwards.
    void validate_for(const LevyModel& model) const
    {
        validate();
        model.validate();
        if (!(model.mean_drift() - c1 - c2 > 0.0))
            throw InvalidStrategy("positive drift required: E[Y(1)] - c1 - c2 > 0");
    }
};

enum class Region { lower, middle, upper };

inline std::string_view to_string(Region r)
{
    switch (r) {
    case Region::lower: return "Lower";
    case Region::middle: return "Middle";
    default: return "Upper";
    }
}

/// y = a belongs to the middle region and y = b to the upper region.
inline Region classify(const Strategy& s, double y)
{
    if (y >= s.b) return Region::upper;
    if (y >= s.a) return Region::middle;
    return Region::lower;
}

/// Which drained process supplied the kernels of a result.
enum class KernelSet { x_drained_c1, x_tilde_drained_c1_c2 };

inline std::string_view to_string(KernelSet k)
{
    return k == KernelSet::x_drained_c1 ? "X" : "X~";
}

/// Scale-function kits of X = Y - c1 t and X~ = Y - (c1 + c2) t at rates
/// delta and delta + gamma, plus the barrier-a constants every formula of
/// the upper region reuses.
class StrategyKits {
public:
    StrategyKits(const LevyModel& model, const Strategy& s, double delta,
                 std::optional<ScaleBackend> backend = std::nullopt)
        : strategy_(s),
          delta_(delta),
          x_(DrainedProcess{model, s.c1}, delta, s.gamma, backend),
          xt_(DrainedProcess{model, s.c1 + s.c2}, delta, s.gamma, backend)
    {
        phi_boost_ = xt_.boosted().phi();
        const double a = s.a;
        wt_a_ = xt_.w(delta, a);
        zt_theta_a_ = xt_.z_theta(delta, a, phi_boost_);
        zt_theta_prime_a_ = xt_.z_theta_prime(delta, a, phi_boost_);
    }

    const Strategy& strategy() const { return strategy_; }
    double delta() const { return delta_; }
    const ScaleKit& x() const { return x_; }
    const ScaleKit& x_tilde() const { return xt_; }

    /// phi(delta + gamma): largest root for X~ at the boosted rate.
    double phi_boosted() const { return phi_boost_; }

    /// Laplace transform of ruin from y >= b (upper region).
    double ruin_upper(double y) const
    {
        const double a = strategy_.a;
        return xt_.j_kernel(a, y - a) -
               xt_.i_kernel(a, y - a) * delta_ * wt_a_ * zt_theta_a_ / zt_theta_prime_a_;
    }

    /// Ratchet (continuous) and periodic (lump) parts of the value for y >= b.
    std::pair<double, double> value_upper_parts(double y) const
    {
        const auto& s = strategy_;
        const double g = s.gamma;
        const double ratchet = (s.c1 + s.c2) / delta_ * (1.0 - ruin_upper(y));
        const double periodic =
            g * (xt_.i_kernel(s.a, y - s.a) * wt_a_ / (phi_boost_ * zt_theta_prime_a_) -
                 xt_.wbarbar(delta_ + g, y - s.a));
        return {ratchet, periodic};
    }

private:
    Strategy strategy_;
    double delta_;
    ScaleKit x_;
    ScaleKit xt_;
    double phi_boost_ = 0.0;
    double wt_a_ = 0.0;
    double zt_theta_a_ = 0.0;
    double zt_theta_prime_a_ = 0.0;
};

}  // namespace ratchet_levy
