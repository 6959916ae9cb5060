#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ratchet_levy/errors.hpp"
#include "ratchet_levy/models.hpp"
#include "ratchet_levy/parallel.hpp"
#include "ratchet_levy/ruin.hpp"
#include "ratchet_levy/strategy.hpp"
#include "ratchet_levy/valuation.hpp"

namespace ratchet_levy {

enum class Quantity { dividend_npv, ruin_laplace };

inline std::string_view to_string(Quantity q)
{
    return q == Quantity::dividend_npv ? "V" : "L";
}

enum class SweepAxis { y, a, b, c1, c2, sigma, gamma, c1c2_grid };

inline std::string_view to_string(SweepAxis a)
{
    switch (a) {
    case SweepAxis::y: return "y";
    case SweepAxis::a: return "a";
    case SweepAxis::b: return "b";
    case SweepAxis::c1: return "c1";
    case SweepAxis::c2: return "c2";
    case SweepAxis::sigma: return "sigma";
    case SweepAxis::gamma: return "gamma";
    default: return "c1c2_grid";
    }
}

/// n evenly spaced points from lo to hi inclusive.
struct GridRange {
    double lo = 0.0;
    double hi = 1.0;
    int n = 2;

    void validate() const
    {
        detail::require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
                        "grid range must be strictly increasing");
        detail::require(n >= 2, "grid needs n_points >= 2");
    }

    std::vector<double> points() const
    {
        std::vector<double> p(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) p[i] = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
        return p;
    }
};

/// Every parameter a closed-form evaluation needs.
struct ParameterSet {
    LevyModel model = LevyModel::brownian(1.0, 2.0);
    Strategy strategy{};
    double delta = 0.05;
    double y = 8.0;
};

/// Closed-form V(y; a, b) or L(y; a, b) for one parameter set.
inline double evaluate(const ParameterSet& p, Quantity q)
{
    if (q == Quantity::dividend_npv) return value(p.model, p.strategy, p.delta, p.y).value;
    return laplace_ruin(p.model, p.strategy, p.delta, p.y).value;
}

inline void set_axis(ParameterSet& p, SweepAxis axis, double v)
{
    switch (axis) {
    case SweepAxis::y: p.y = v; break;
    case SweepAxis::a: p.strategy.a = v; break;
    case SweepAxis::b: p.strategy.b = v; break;
    case SweepAxis::c1: p.strategy.c1 = v; break;
    case SweepAxis::c2: p.strategy.c2 = v; break;
    case SweepAxis::sigma: p.model.sigma = v; break;
    case SweepAxis::gamma: p.strategy.gamma = v; break;
    case SweepAxis::c1c2_grid: throw ValidationError("c1c2_grid sets two parameters");
    }
}

/// One-dimensional sweep along `axis`, or a c1 x c2 grid (range for c1,
/// range2 for c2) when axis is c1c2_grid.
struct SweepSpec {
    Quantity quantity = Quantity::dividend_npv;
    SweepAxis axis = SweepAxis::y;
    GridRange range{};
    GridRange range2{};
    ParameterSet fixed{};

    void validate() const
    {
        range.validate();
        if (axis == SweepAxis::c1c2_grid) range2.validate();
    }
};

/// One evaluated grid point; `error` is non-empty (and value NaN) when the
/// point is inadmissible or the evaluation failed.
struct SweepRow {
    double x = 0.0;
    double x2 = std::numeric_limits<double>::quiet_NaN();
    double value = std::numeric_limits<double>::quiet_NaN();
    std::string error;

    bool ok() const { return error.empty(); }
};

/// Parameter set of row `index` of a sweep (rows of a grid run c2 fastest).
inline std::pair<ParameterSet, SweepRow> sweep_point(const SweepSpec& spec, std::size_t index)
{
    ParameterSet p = spec.fixed;
    SweepRow row;
    if (spec.axis == SweepAxis::c1c2_grid) {
        const auto n2 = static_cast<std::size_t>(spec.range2.n);
        row.x = spec.range.points()[index / n2];
        row.x2 = spec.range2.points()[index % n2];
        p.strategy.c1 = row.x;
        p.strategy.c2 = row.x2;
    } else {
        row.x = spec.range.points()[index];
        set_axis(p, spec.axis, row.x);
    }
    return {p, row};
}

/// Evaluates every grid point (in parallel); rows are in grid order and each
/// is recomputable from spec.fixed alone.
inline std::vector<SweepRow> sweep(const SweepSpec& spec, unsigned workers = worker_count())
{
    spec.validate();
    const std::size_t n = spec.axis == SweepAxis::c1c2_grid
                              ? static_cast<std::size_t>(spec.range.n) * spec.range2.n
                              : static_cast<std::size_t>(spec.range.n);
    std::vector<SweepRow> rows(n);
    parallel_for(
        n,
        [&](std::size_t i) {
            auto [p, row] = sweep_point(spec, i);
            try {
                row.value = evaluate(p, spec.quantity);
            } catch (const Error& e) {
                row.error = e.what();
            }
            rows[i] = std::move(row);
        },
        workers);
    return rows;
}

// ---------------------------------------------------------------------------
// Trend helpers

/// True when consecutive values never drop by more than tol.
inline bool is_nondecreasing(const std::vector<double>& v, double tol = 1e-12)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[i - 1] - tol * std::max(1.0, std::abs(v[i - 1]))) return false;
    return true;
}

inline bool is_nonincreasing(const std::vector<double>& v, double tol = 1e-12)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1] + tol * std::max(1.0, std::abs(v[i - 1]))) return false;
    return true;
}

inline std::vector<double> values_of(const std::vector<SweepRow>& rows)
{
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(r.value);
    return v;
}

/// Spearman rank correlation (average ranks for ties).
inline double rank_correlation(const std::vector<double>& xs, const std::vector<double>& ys)
{
    detail::require(xs.size() == ys.size() && xs.size() >= 2, "rank correlation needs paired data");
    const auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return v[i] < v[j]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size();) {
            std::size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * (i + j) + 1.0;
            i = j + 1;
        }
        return r;
    };
    const auto rx = ranks(xs), ry = ranks(ys);
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxx > 0.0 && syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
}

// ---------------------------------------------------------------------------
// Optimisation of the periodic barrier

struct OptimumReport {
    double argmax = 0.0;
    double max_value = 0.0;
    std::vector<std::pair<double, double>> grid;  // (parameter, value); refined point last
    bool refined = false;
};

/// Maximiser of a unimodal f on [lo, hi] by golden-section search.
template <class F>
std::pair<double, double> golden_section_max(F&& f, double lo, double hi, double tol = 1e-7)
{
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    return f1 > f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

/// Best periodic barrier a in (0, b]: 64-point grid, then golden-section
/// refinement on the bracket around the best grid point. A nondecreasing grid
/// returns the right endpoint b exactly. With c2 = 0 the ratchet is absent and
/// the pure periodic value is maximised.
inline OptimumReport optimize_a(const LevyModel& model, double y, double b, double c1, double c2,
                                double gamma, double delta)
{
    if (!(b > 0.0)) throw InvalidStrategy("b > 0 required");
    const auto f = [&](double a) {
        if (c2 == 0.0) return c1 == 0.0 ? value_periodic_only(model, a, gamma, delta, y)
                                        : value_no_ratchet(model, a, c1, gamma, delta, y);
        return value(model, Strategy{a, b, c1, c2, gamma}, delta, y).value;
    };
    constexpr int n = 64;
    OptimumReport rep;
    std::vector<double> vals;
    for (int i = 1; i <= n; ++i) {
        const double a = i == n ? b : b * i / n;
        rep.grid.emplace_back(a, f(a));
        vals.push_back(rep.grid.back().second);
    }
    const auto best = static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
    rep.argmax = rep.grid[best].first;
    rep.max_value = vals[best];
    if (is_nondecreasing(vals, 0.0)) return rep;

    const double lo = best == 0 ? b / (4.0 * n) : rep.grid[best - 1].first;
    const double hi = best + 1 == rep.grid.size() ? b : rep.grid[best + 1].first;
    const auto [x, fx] = golden_section_max(f, lo, hi);
    rep.refined = true;
    rep.grid.emplace_back(x, fx);
    if (fx > rep.max_value) {
        rep.argmax = x;
        rep.max_value = fx;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Ratcheting barrier: b* is at infinity; report the finite approximation.

struct BStarReport {
    double asymptote = 0.0;  // V(y; a, infinity): no ratchet
    double b_tilde = std::numeric_limits<double>::infinity();
    bool found = false;
    std::vector<std::pair<double, double>> grid;
    std::string note = "b* = infinity (right boundary, nonconvergent)";
};

/// Smallest b whose value lies within rel_tol of the b = infinity asymptote,
/// searched on a grid over [a, b_max] and refined by bisection.
inline BStarReport approximate_b_star(const ParameterSet& fixed, double rel_tol = 0.005,
                                      double b_max = 200.0, int n = 400)
{
    detail::require(rel_tol > 0.0, "tolerance must be > 0");
    const auto& s = fixed.strategy;
    BStarReport rep;
    rep.asymptote = value_no_ratchet(fixed.model, s.a, s.c1, s.gamma, fixed.delta, fixed.y);
    const auto gap = [&](double b) {
        ParameterSet p = fixed;
        p.strategy.b = b;
        const double v = evaluate(p, Quantity::dividend_npv);
        return std::pair{v, std::abs(v - rep.asymptote) / std::abs(rep.asymptote)};
    };
    const GridRange range{s.a, b_max, n};
    double prev = s.a;
    for (double b : range.points()) {
        const auto [v, g] = gap(b);
        rep.grid.emplace_back(b, v);
        if (g <= rel_tol) {
            double lo = prev, hi = b;
            if (lo < hi && gap(lo).second > rel_tol) {
                for (int i = 0; i < 60; ++i) {
                    const double mid = 0.5 * (lo + hi);
                    (gap(mid).second <= rel_tol ? hi : lo) = mid;
                }
            }
            rep.b_tilde = hi;
            rep.found = true;
            return rep;
        }
        prev = b;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Volatility profile

struct SigmaProfile {
    std::vector<SweepRow> rows;
    /// Per row: discrete concavity (second difference <= 0) for interior
    /// points with sigma in (0, concavity_window); empty elsewhere.
    std::vector<std::optional<bool>> concave;
    bool all_concave = true;
    double argmax_sigma = 0.0;
    double max_value = 0.0;
    bool interior_argmax = false;
};

inline SigmaProfile sigma_profile(const LevyModel& model_template, double y, const Strategy& s,
                                  double delta, const GridRange& sigma_range,
                                  double concavity_window = 0.8)
{
    detail::require(sigma_range.lo > 0.0, "sigma range must lie in (0, inf)");
    SweepSpec spec{Quantity::dividend_npv, SweepAxis::sigma, sigma_range, {},
                   ParameterSet{model_template, s, delta, y}};
    SigmaProfile prof;
    prof.rows = sweep(spec);
    const auto& r = prof.rows;
    prof.concave.assign(r.size(), std::nullopt);
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
        if (!(r[i].x > 0.0 && r[i].x < concavity_window)) continue;
        if (!r[i - 1].ok() || !r[i].ok() || !r[i + 1].ok()) continue;
        const double d2 = r[i + 1].value - 2.0 * r[i].value + r[i - 1].value;
        const bool c = d2 <= 1e-12 * std::max(1.0, std::abs(r[i].value));
        prof.concave[i] = c;
        prof.all_concave = prof.all_concave && c;
    }
    std::size_t best = r.size();
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i].ok() && (best == r.size() || r[i].value > r[best].value)) best = i;
    if (best < r.size()) {
        prof.argmax_sigma = r[best].x;
        prof.max_value = r[best].value;
        prof.interior_argmax = best > 0 && best + 1 < r.size();
    }
    return prof;
}

// ---------------------------------------------------------------------------
// Study presets (Brownian model, mu = 1, sigma = 2, c1 = 0, c2 = 0.1,
// gamma = 1, delta = 0.05 unless a panel says otherwise).

enum class PanelKind { sweep, sigma_profile };

struct Panel {
    std::string name;
    PanelKind kind = PanelKind::sweep;
    SweepSpec spec;
};

inline ParameterSet base_parameters(double y, double a, double b)
{
    return ParameterSet{LevyModel::brownian(1.0, 2.0), Strategy{a, b, 0.0, 0.1, 1.0}, 0.05, y};
}

inline std::vector<std::string> preset_names()
{
    return {"fig1a", "fig1b", "fig3", "fig4", "fig5", "fig6a", "fig6b", "fig6c", "fig6d"};
}

inline std::vector<Panel> figure_preset(std::string_view name)
{
    using Q = Quantity;
    using A = SweepAxis;
    const auto panel = [](std::string n, Q q, A axis, GridRange r, ParameterSet p,
                          GridRange r2 = {}) {
        return Panel{std::move(n), PanelKind::sweep, SweepSpec{q, axis, r, r2, p}};
    };
    if (name == "fig1a")
        return {panel("fig1a", Q::dividend_npv, A::y, {0.0, 10.0, 101}, base_parameters(8, 3, 5))};
    if (name == "fig1b")
        return {panel("fig1b_y8", Q::dividend_npv, A::a, {0.05, 5.0, 100}, base_parameters(8, 3, 5)),
                panel("fig1b_y2", Q::dividend_npv, A::a, {0.05, 5.0, 100}, base_parameters(2, 3, 5))};
    if (name == "fig3")
        return {panel("fig3_y5", Q::dividend_npv, A::b, {3.0, 40.0, 75}, base_parameters(5, 3, 5)),
                panel("fig3_y2", Q::dividend_npv, A::b, {3.0, 40.0, 75}, base_parameters(2, 3, 5))};
    if (name == "fig4")
        return {panel("fig4a", Q::dividend_npv, A::c1c2_grid, {0.0, 0.3, 7}, base_parameters(5, 3, 4),
                      {0.05, 0.3, 6}),
                panel("fig4b", Q::dividend_npv, A::c1c2_grid, {0.0, 0.3, 7}, base_parameters(5, 3, 24),
                      {0.05, 0.3, 6}),
                panel("fig4c", Q::dividend_npv, A::c1c2_grid, {0.0, 0.3, 7}, base_parameters(2, 3, 24),
                      {0.05, 0.3, 6})};
    if (name == "fig5") {
        auto overview = panel("fig5a", Q::dividend_npv, A::sigma, {0.05, 100.0, 200}, base_parameters(8, 3, 4));
        std::vector<Panel> out{overview};
        const std::pair<const char*, ParameterSet> cases[] = {{"fig5b", base_parameters(8, 3, 4)},
                                                              {"fig5c", base_parameters(5, 3, 24)},
                                                              {"fig5d", base_parameters(2, 3, 24)}};
        for (const auto& [n, p] : cases) {
            auto pn = panel(n, Q::dividend_npv, A::sigma, {0.01, 0.79, 79}, p);
            pn.kind = PanelKind::sigma_profile;
            out.push_back(pn);
        }
        return out;
    }
    if (name == "fig6a")
        return {panel("fig6a", Q::ruin_laplace, A::gamma, {0.1, 5.0, 50}, base_parameters(8, 3, 4))};
    if (name == "fig6b")
        return {panel("fig6b_y8", Q::ruin_laplace, A::a, {0.05, 5.0, 100}, base_parameters(8, 3, 5)),
                panel("fig6b_y2", Q::ruin_laplace, A::a, {0.05, 5.0, 100}, base_parameters(2, 3, 5))};
    if (name == "fig6c")
        return {panel("fig6c", Q::ruin_laplace, A::b, {3.0, 20.0, 50}, base_parameters(10, 3, 5))};
    if (name == "fig6d")
        return {panel("fig6d", Q::ruin_laplace, A::c1c2_grid, {0.0, 0.3, 7}, base_parameters(5, 3, 4),
                      {0.05, 0.3, 6})};
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

}  // namespace ratchet_levy
