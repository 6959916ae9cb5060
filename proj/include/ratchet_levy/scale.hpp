#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "ratchet_levy/errors.hpp"
#include "ratchet_levy/laplace_inversion.hpp"
#include "ratchet_levy/models.hpp"
#include "ratchet_levy/quadrature.hpp"

namespace ratchet_levy {

enum class ScaleBackend { closed_form, inversion };

inline std::string_view to_string(ScaleBackend b)
{
    return b == ScaleBackend::closed_form ? "closed_form" : "inversion";
}

/// Exponential-sum form of the scale function is available when psi is
/// rational of low degree: Brownian motion with drift, or exponential claims
/// without a Gaussian part.
inline bool closed_form_available(const LevyModel& m)
{
    return !m.has_jumps() || m.sigma == 0.0;
}

inline ScaleBackend default_backend(const LevyModel& m)
{
    return closed_form_available(m) ? ScaleBackend::closed_form : ScaleBackend::inversion;
}

/// Roots and normalisation of the Brownian scale function
/// W(x) = kappa (exp(theta_plus x) - exp(theta_minus x)).
struct BrownianRoots {
    double theta_plus = 0.0;
    double theta_minus = 0.0;
    double kappa = 0.0;
};

struct ExpTerm {
    double coef;
    double rate;
};

namespace detail {

// (exp(rate x) - 1) / rate, continuous at rate = 0.
inline double expm1_ratio(double rate, double x)
{
    const double u = rate * x;
    if (u == 0.0) return x;
    return std::expm1(u) / rate;
}

// (exp(rate x) - 1 - rate x) / rate^2, continuous at rate = 0.
inline double expm2_ratio(double rate, double x)
{
    const double u = rate * x;
    if (std::abs(u) < 1e-2) {
        const double series =
            0.5 + u * (1.0 / 6 + u * (1.0 / 24 + u * (1.0 / 120 + u * (1.0 / 720 + u / 5040))));
        return x * x * series;
    }
    return (std::expm1(u) - u) / (rate * rate);
}

/// int_0^x exp(alpha (x - y)) exp(beta y) dy, written around the larger rate
/// so neither overflow nor cancellation appears.
inline double exp_convolution(double alpha, double beta, double x)
{
    const double hi = std::max(alpha, beta);
    const double gap = hi - std::min(alpha, beta);
    const double factor = gap == 0.0 ? x : -std::expm1(-gap * x) / gap;
    return std::exp(hi * x) * factor;
}

inline double eval(const std::vector<ExpTerm>& terms, double x)
{
    double s = 0.0;
    for (const auto& t : terms) s += t.coef * std::exp(t.rate * x);
    return s;
}

// Real roots (ascending) of a x^2 + b x + c, stable against cancellation.
inline std::vector<double> quadratic_roots(double a, double b, double c)
{
    if (a == 0.0) return {-c / b};
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) throw NoRoot("scale function exponent has complex roots");
    const double qq = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    std::vector<double> r{qq / a, qq != 0.0 ? c / qq : 0.0};
    std::sort(r.begin(), r.end());
    return r;
}

}  // namespace detail

/// W^{(q)} of one drained process and the functionals built from it:
/// Wbar, Wbarbar, Z, Zbar, Z(x, theta) and its x-derivative.
class ScaleFunction {
public:
    ScaleFunction(DrainedProcess process, double rate, ScaleBackend backend)
        : process_(std::move(process)), rate_(rate), backend_(backend)
    {
        detail::require(rate >= 0.0, "scale function rate must be >= 0");
        if (backend_ == ScaleBackend::closed_form) {
            if (!closed_form_available(process_.model))
                throw BackendUnavailable(
                    "closed-form scale functions need sigma = 0 when jumps are present");
            build_terms();
            phi_ = terms_.back().rate;
        } else {
            phi_ = phi_root(process_, rate_);
        }
    }

    const DrainedProcess& process() const { return process_; }
    double rate() const { return rate_; }
    ScaleBackend backend() const { return backend_; }

    /// Largest root of psi(theta) = rate.
    double phi() const { return phi_; }

    /// Exponential terms of W on [0, inf); empty for the inversion backend.
    const std::vector<ExpTerm>& terms() const { return terms_; }

    /// Same for Z = 1 + rate * Wbar.
    const std::vector<ExpTerm>& z_terms() const { return z_terms_; }

    double w(double x) const
    {
        if (x < 0.0) return 0.0;
        if (x == 0.0) return w_at_zero();
        if (closed()) return detail::eval(terms_, x);
        return invert_scaled(x, [this](inversion::complex s) { return 1.0L / shifted_denominator(s); });
    }

    double wbar(double x) const
    {
        if (x <= 0.0) return 0.0;
        if (closed()) {
            double s = 0.0;
            for (const auto& t : terms_) s += t.coef * detail::expm1_ratio(t.rate, x);
            return s;
        }
        const auto phi = static_cast<inversion::real>(phi_);
        return invert_scaled(
            x, [this, phi](inversion::complex s) { return 1.0L / ((s + phi) * shifted_denominator(s)); });
    }

    double wbarbar(double x) const
    {
        if (x <= 0.0) return 0.0;
        if (closed()) {
            double s = 0.0;
            for (const auto& t : terms_) s += t.coef * detail::expm2_ratio(t.rate, x);
            return s;
        }
        const auto phi = static_cast<inversion::real>(phi_);
        return invert_scaled(x, [this, phi](inversion::complex s) {
            return 1.0L / ((s + phi) * (s + phi) * shifted_denominator(s));
        });
    }

    double z(double x) const { return x <= 0.0 ? 1.0 : 1.0 + rate_ * wbar(x); }

    double zbar(double x) const { return x <= 0.0 ? x : x + rate_ * wbarbar(x); }

    double z_theta(double x, double theta) const
    {
        detail::require(theta >= 0.0, "Z(x, theta) requires theta >= 0");
        if (x <= 0.0) return std::exp(theta * x);
        const double gap = rate_ - laplace_exponent(process_, theta);
        if (closed()) {
            double s = 0.0;
            for (const auto& t : terms_) s += t.coef * detail::exp_convolution(theta, t.rate, x);
            return std::exp(theta * x) + gap * s;
        }
        const auto phi = static_cast<inversion::real>(phi_);
        const auto th = static_cast<inversion::real>(theta);
        const auto psi_theta = static_cast<inversion::real>(laplace_exponent(process_, theta));
        return invert_scaled(x, [this, phi, th, psi_theta, theta](inversion::complex s) {
            const inversion::complex u = s + phi;
            const inversion::complex den = shifted_denominator(s);
            if (std::abs(u - th) < 1e-14L * (1.0L + th)) {
                return inversion::complex(
                    static_cast<inversion::real>(laplace_exponent_derivative(process_, theta))) / den;
            }
            return (laplace_exponent(process_, u) - psi_theta) / ((u - th) * den);
        });
    }

    double z_theta_prime(double x, double theta) const
    {
        return theta * z_theta(x, theta) + (rate_ - laplace_exponent(process_, theta)) * w(x);
    }

    /// W(0+): 1/c for bounded variation, 0 otherwise.
    double w_at_zero() const { return process_.bounded_variation() ? 1.0 / process_.drift() : 0.0; }

private:
    bool closed() const { return backend_ == ScaleBackend::closed_form; }

    // Transform of W is 1/(psi(s) - q); W grows like exp(phi x), so invert the
    // damped function exp(-phi x) W(x), whose transform is shifted by phi.
    inversion::complex shifted_denominator(inversion::complex s) const
    {
        return laplace_exponent(process_, s + static_cast<inversion::real>(phi_)) -
               static_cast<inversion::real>(rate_);
    }

    template <class F>
    double invert_scaled(double x, F&& transform) const
    {
        const auto damped = inversion::invert(transform, static_cast<inversion::real>(x));
        return static_cast<double>(std::exp(static_cast<inversion::real>(phi_ * x)) * damped);
    }

    void build_terms()
    {
        const double m = process_.drift();
        const double s2 = process_.model.sigma * process_.model.sigma;
        const double q = rate_;
        // W has transform N(s)/P(s) with P quadratic (or linear); the residue
        // at each simple root rho is N(rho)/P'(rho).
        std::vector<double> roots;
        std::function<double(double)> residue;
        if (process_.model.has_jumps()) {
            const double lam = process_.model.lambda;
            const double eta = process_.model.eta;
            const double b = m * eta - q - lam;
            roots = detail::quadratic_roots(m, b, -q * eta);
            residue = [=](double r) { return (eta + r) / (2.0 * m * r + b); };
        } else {
            detail::require(s2 > 0.0 || m > 0.0, "degenerate process: zero drift and zero sigma");
            roots = detail::quadratic_roots(0.5 * s2, m, -q);
            residue = [=](double r) { return 1.0 / (s2 * r + m); };
        }
        for (double r : roots) terms_.push_back({residue(r), r});

        if (q == 0.0) {
            z_terms_ = {{1.0, 0.0}};
        } else {
            double constant = 1.0;
            for (const auto& t : terms_) {
                z_terms_.push_back({q * t.coef / t.rate, t.rate});
                constant -= q * t.coef / t.rate;
            }
            z_terms_.push_back({constant, 0.0});
        }
    }

    DrainedProcess process_;
    double rate_;
    ScaleBackend backend_;
    double phi_ = 0.0;
    std::vector<ExpTerm> terms_;
    std::vector<ExpTerm> z_terms_;
};

/// Scale-function toolkit for one drained process at discount rate delta and
/// decision intensity gamma: everything evaluated at the two rates delta and
/// delta + gamma, the operator M and the kernels I and J.
class ScaleKit {
public:
    ScaleKit(DrainedProcess process, double delta, double gamma,
             std::optional<ScaleBackend> backend = std::nullopt)
        : process_(std::move(process)),
          delta_(delta),
          gamma_(gamma),
          backend_(backend.value_or(default_backend(process_.model))),
          base_(process_, delta, backend_),
          boosted_(process_, delta + gamma, backend_)
    {
        detail::require(delta >= 0.0, "delta >= 0 required");
        detail::require(gamma >= 0.0, "gamma >= 0 required");
    }

    const DrainedProcess& process() const { return process_; }
    double delta() const { return delta_; }
    double gamma() const { return gamma_; }
    ScaleBackend backend() const { return backend_; }

    const ScaleFunction& base() const { return base_; }
    const ScaleFunction& boosted() const { return boosted_; }

    /// Scale function at rate delta or delta + gamma.
    const ScaleFunction& at(double rate) const
    {
        if (rate == delta_) return base_;
        if (rate == delta_ + gamma_) return boosted_;
        throw ValidationError("rate must be delta or delta + gamma");
    }

    double w(double rate, double x) const { return at(rate).w(x); }
    double z(double rate, double x) const { return at(rate).z(x); }
    double wbar(double rate, double x) const { return at(rate).wbar(x); }
    double wbarbar(double rate, double x) const { return at(rate).wbarbar(x); }
    double zbar(double rate, double x) const { return at(rate).zbar(x); }
    double z_theta(double rate, double x, double theta) const { return at(rate).z_theta(x, theta); }
    double z_theta_prime(double rate, double x, double theta) const
    {
        return at(rate).z_theta_prime(x, theta);
    }

    BrownianRoots brownian_roots(double rate) const
    {
        const auto& sf = at(rate);
        if (process_.model.has_jumps() || process_.model.sigma <= 0.0 ||
            backend_ != ScaleBackend::closed_form)
            throw BackendUnavailable("Brownian roots need a Brownian model on the closed-form backend");
        return {sf.terms()[1].rate, sf.terms()[0].rate, sf.terms()[1].coef};
    }

    /// M f(x) = f(x + b) + gamma int_0^x W^{(delta+gamma)}(x - y) f(y + b) dy,
    /// by adaptive quadrature.
    double m_apply(double barrier, const std::function<double(double)>& f, double x,
                   const QuadratureOptions& opt = {}) const
    {
        detail::require(barrier > 0.0, "operator M requires a barrier > 0");
        if (x <= 0.0) return f(x + barrier);
        const auto integrand = [&](double y) { return boosted_.w(x - y) * f(y + barrier); };
        return f(x + barrier) + gamma_ * integrate(integrand, 0.0, x, {}, opt).value;
    }

    double w_b(double barrier, double x) const
    {
        if (backend_ != ScaleBackend::closed_form || x <= 0.0)
            return m_apply(barrier, [this](double u) { return base_.w(u); }, x);
        return base_.w(x + barrier) + gamma_ * boosted_convolution(base_.terms(), barrier, x);
    }

    double z_b(double barrier, double x) const
    {
        if (backend_ != ScaleBackend::closed_form || x <= 0.0)
            return m_apply(barrier, [this](double u) { return base_.z(u); }, x);
        return base_.z(x + barrier) + gamma_ * boosted_convolution(base_.z_terms(), barrier, x);
    }

    /// I_b(x) = W_b(x) / W(b) - gamma Wbar^{(delta+gamma)}(x).
    double i_kernel(double barrier, double x) const
    {
        detail::require(barrier > 0.0, "kernel barrier must be > 0");
        return w_b(barrier, x) / base_.w(barrier) - gamma_ * boosted_.wbar(x);
    }

    /// J_b(x) = Z_b(x) - gamma Z(b) Wbar^{(delta+gamma)}(x).
    double j_kernel(double barrier, double x) const
    {
        detail::require(barrier > 0.0, "kernel barrier must be > 0");
        return z_b(barrier, x) - gamma_ * base_.z(barrier) * boosted_.wbar(x);
    }

    /// Kernels through the operator M by quadrature, whatever the backend.
    double i_kernel_quadrature(double barrier, double x) const
    {
        const double wb = m_apply(barrier, [this](double u) { return base_.w(u); }, x);
        return wb / base_.w(barrier) - gamma_ * boosted_.wbar(x);
    }

    double j_kernel_quadrature(double barrier, double x) const
    {
        const double zb = m_apply(barrier, [this](double u) { return base_.z(u); }, x);
        return zb - gamma_ * base_.z(barrier) * boosted_.wbar(x);
    }

private:
    // gamma-free part of M for an exponential sum f on [0, inf):
    // int_0^x W^{(delta+gamma)}(x - y) f(y + b) dy.
    double boosted_convolution(const std::vector<ExpTerm>& f, double barrier, double x) const
    {
        double s = 0.0;
        for (const auto& g : boosted_.terms())
            for (const auto& t : f)
                s += g.coef * t.coef * std::exp(t.rate * barrier) *
                     detail::exp_convolution(g.rate, t.rate, x);
        return s;
    }

    DrainedProcess process_;
    double delta_;
    double gamma_;
    ScaleBackend backend_;
    ScaleFunction base_;
    ScaleFunction boosted_;
};

}  // namespace ratchet_levy
