#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ratchet_levy/errors.hpp"

namespace ratchet_levy {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    int max_intervals = 2000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

namespace detail {

struct GkInterval {
    double lo, hi, value, error;
    bool operator<(const GkInterval& o) const { return error < o.error; }
};

// One 21-point Kronrod panel with its embedded 10-point Gauss estimate.
template <class F>
GkInterval gk21_panel(F& f, double lo, double hi)
{
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
    using gauss = boost::math::quadrature::gauss<double, 10>;
    static const auto& xk = kronrod::abscissa();
    static const auto& wk = kronrod::weights();
    static const auto& wg = gauss::weights();

    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    // Odd-indexed Kronrod abscissae coincide with the Gauss nodes (10-point
    // rule has no centre node).
    double k_sum = 0.0, g_sum = 0.0;
    for (std::size_t i = 0; i < xk.size(); ++i) {
        const double x = xk[i];
        const double fv = (x == 0.0) ? f(c) : f(c + h * x) + f(c - h * x);
        k_sum += wk[i] * fv;
        if (i % 2 == 1) g_sum += wg[i / 2] * fv;
    }
    return {lo, hi, h * k_sum, std::abs(h * (k_sum - g_sum))};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (21-point) quadrature over [lo, hi] with
/// optional interior breakpoints; stops once the summed error estimate is
/// below max(abs_tol, rel_tol * |I|).
template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, std::vector<double> breakpoints = {},
                           const QuadratureOptions& opt = {})
{
    if (lo == hi) return {};
    double sign = 1.0;
    if (hi < lo) {
        std::swap(lo, hi);
        sign = -1.0;
    }
    std::vector<double> edges{lo};
    std::sort(breakpoints.begin(), breakpoints.end());
    for (double b : breakpoints)
        if (b > edges.back() && b < hi) edges.push_back(b);
    edges.push_back(hi);

    std::priority_queue<detail::GkInterval> heap;
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        auto p = detail::gk21_panel(f, edges[i], edges[i + 1]);
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    int count = static_cast<int>(heap.size());
    while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (count >= opt.max_intervals)
            throw QuadratureFailure("adaptive quadrature did not reach tolerance");
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi))
            throw QuadratureFailure("adaptive quadrature interval underflow");
        const auto left = detail::gk21_panel(f, worst.lo, mid);
        const auto right = detail::gk21_panel(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
    }
    // Re-sum to shed accumulated update round-off.
    double clean = 0.0, clean_err = 0.0;
    while (!heap.empty()) {
        clean += heap.top().value;
        clean_err += heap.top().error;
        heap.pop();
    }
    return {sign * clean, clean_err, count};
}

}  // namespace ratchet_levy
