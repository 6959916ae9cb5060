#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <string_view>

#include "ratchet_levy/errors.hpp"

namespace ratchet_levy {

enum class ModelKind { brownian_drift, compound_poisson_exp };

inline std::string_view to_string(ModelKind k)
{
    return k == ModelKind::brownian_drift ? "brownian" : "compound_poisson_exp";
}

/// Uncontrolled spectrally negative surplus process Y.
///
/// Y(t) = y + mu t + sigma B(t) - S(t), where S is a compound Poisson process
/// with intensity lambda and Exp(eta) claim sizes (absent for brownian_drift).
struct LevyModel {
    ModelKind kind = ModelKind::brownian_drift;
    double mu = 1.0;
    double sigma = 2.0;
    double lambda = 0.0;
    double eta = 1.0;

    static LevyModel brownian(double mu, double sigma)
    {
        return {ModelKind::brownian_drift, mu, sigma, 0.0, 1.0};
    }

    static LevyModel compound_poisson(double mu, double sigma, double lambda, double eta)
    {
        return {ModelKind::compound_poisson_exp, mu, sigma, lambda, eta};
    }

    bool has_jumps() const { return kind == ModelKind::compound_poisson_exp && lambda > 0.0; }

    /// E[Y(1)] = psi'(0+).
    double mean_drift() const { return has_jumps() ? mu - lambda / eta : mu; }

    void validate() const
    {
        detail::require(std::isfinite(mu), "mu must be finite");
        detail::require(std::isfinite(sigma) && sigma >= 0.0, "sigma >= 0 required");
        if (kind == ModelKind::compound_poisson_exp) {
            detail::require(std::isfinite(lambda) && lambda >= 0.0, "lambda >= 0 required");
            detail::require(std::isfinite(eta) && eta > 0.0, "eta > 0 required");
        }
    }
};

/// Y minus a constant dividend drain: X = Y - c1 t or X~ = Y - (c1 + c2) t.
struct DrainedProcess {
    LevyModel model;
    double drain = 0.0;

    double drift() const { return model.mu - drain; }
    double effective_drift() const { return model.mean_drift() - drain; }

    /// Paths of bounded variation (no Gaussian part).
    bool bounded_variation() const { return model.sigma == 0.0; }

    void validate() const
    {
        model.validate();
        detail::require(drain >= 0.0, "drain >= 0 required");
        detail::require(effective_drift() > 0.0,
                        "positive effective drift required: psi'(0+) - drain > 0");
    }
};

/// psi_p(theta) = log E exp(theta X(1)); valid for real theta >= 0 and for
/// complex theta with Re(theta) > -eta.
template <class T>
T laplace_exponent(const DrainedProcess& p, const T& theta)
{
    using R = decltype(std::abs(theta));
    const R m = static_cast<R>(p.drift());
    const R s = static_cast<R>(p.model.sigma);
    T value = m * theta + s * s * theta * theta / R(2);
    if (p.model.has_jumps()) {
        const R lam = static_cast<R>(p.model.lambda);
        const R eta = static_cast<R>(p.model.eta);
        value += lam * (eta / (eta + theta) - R(1));
    }
    return value;
}

inline double laplace_exponent_derivative(const DrainedProcess& p, double theta)
{
    double d = p.drift() + p.model.sigma * p.model.sigma * theta;
    if (p.model.has_jumps()) {
        const double e = p.model.eta + theta;
        d -= p.model.lambda * p.model.eta / (e * e);
    }
    return d;
}

/// Largest theta >= 0 with psi_p(theta) = q (Phi(q) for X, phi(q) for X~).
inline double phi_root(const DrainedProcess& p, double q)
{
    detail::require(q >= 0.0, "phi_root requires q >= 0");
    const auto psi = [&](double t) { return laplace_exponent(p, t) - q; };
    const double slope0 = laplace_exponent_derivative(p, 0.0);
    const double sig = p.model.sigma;

    if (p.drift() == 0.0 && sig == 0.0 && !p.model.has_jumps())
        throw NoRoot("degenerate Laplace exponent (zero drift, sigma and jumps)");
    if (q == 0.0 && slope0 >= 0.0) return 0.0;

    // Bracket [lo, hi] with psi(lo) <= 0 < psi(hi).
    double lo = 0.0;
    if (q == 0.0) {
        // Negative drift: start right of the minimiser of psi.
        double a = 0.0, b = 1.0;
        while (laplace_exponent_derivative(p, b) < 0.0) {
            b *= 2.0;
            if (b > 1e300) throw NoRoot("psi has no positive root");
        }
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (a + b);
            (laplace_exponent_derivative(p, mid) < 0.0 ? a : b) = mid;
        }
        lo = b;
    }
    double hi = std::max(1.0, 2.0 * lo);
    while (psi(hi) <= 0.0) {
        hi *= 2.0;
        if (!std::isfinite(hi) || hi > 1e300) throw NoRoot("psi(theta) = q has no root");
    }

    const double target = 1e-12 * std::max(1.0, q);
    double x = hi;
    for (int iter = 0; iter < 500; ++iter) {
        const double f = psi(x);
        if (std::abs(f) <= target) return x;
        (f > 0.0 ? hi : lo) = x;
        const double d = laplace_exponent_derivative(p, x);
        double next = d > 0.0 ? x - f / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return next;
        x = next;
    }
    throw NoRoot("phi_root did not converge");
}

}  // namespace ratchet_levy
