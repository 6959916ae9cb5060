#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include "ratchet_levy/errors.hpp"
#include "ratchet_levy/models.hpp"
#include "ratchet_levy/parallel.hpp"
#include "ratchet_levy/rng.hpp"
#include "ratchet_levy/strategy.hpp"

namespace ratchet_levy {

struct SimConfig {
    double dt = 1e-3;
    double t_max = 2000.0;
    std::uint64_t n_paths = 10000;
    std::uint64_t seed = 20240601;
    bool antithetic = false;
    unsigned workers = 0;  // 0: worker_count()
};

enum class McTarget { dividend_npv, ruin_laplace };

inline std::string_view to_string(McTarget t)
{
    return t == McTarget::dividend_npv ? "DividendNPV" : "RuinLaplace";
}

/// One simulated controlled path.
struct PathOutcome {
    bool ruined = false;
    bool censored = false;  // reached t_max alive
    double tau = std::numeric_limits<double>::infinity();
    double ratchet_time = std::numeric_limits<double>::infinity();
    double disc_ratchet = 0.0;
    double disc_periodic = 0.0;
    double disc_ruin_indicator = 0.0;
    std::uint64_t decisions = 0;
    std::uint64_t payments = 0;

    double dividends() const { return disc_ratchet + disc_periodic; }
};

/// Optional per-step record of a path, for invariant checks and debugging.
struct PathTrace {
    struct Step {
        double t;
        double surplus;
        double rate;
    };
    struct Payment {
        double t;
        double before;
        double after;
    };
    std::vector<Step> steps;
    std::vector<Payment> payments;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
    double censored_fraction = 0.0;
    bool se_defined = false;  // false when fewer than two independent units
};

/// Both targets estimated from the same set of paths.
struct McSummary {
    McEstimate dividends;
    McEstimate ruin;
};

namespace detail {

inline void validate_simulation(const LevyModel& model, const Strategy& s, double delta, double y0,
                                const SimConfig& cfg)
{
    model.validate();
    const auto need = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(what);
    };
    need(std::isfinite(s.a) && s.a >= 0.0, "a >= 0 required");
    need(std::isfinite(s.b) && s.b >= s.a, "b >= a required");
    need(std::isfinite(s.c1) && s.c1 >= 0.0, "c1 >= 0 required");
    need(std::isfinite(s.c2) && s.c2 >= 0.0, "c2 >= 0 required");
    need(std::isfinite(s.gamma) && s.gamma >= 0.0, "gamma >= 0 required");
    need(std::isfinite(delta) && delta >= 0.0, "delta >= 0 required");
    need(std::isfinite(y0) && y0 >= 0.0, "y >= 0 required");
    need(std::isfinite(cfg.dt) && cfg.dt > 0.0, "dt > 0 required");
    need(std::isfinite(cfg.t_max) && cfg.t_max > 0.0, "tmax > 0 required");
    need(cfg.n_paths > 0, "paths > 0 required");
    need(!(s.gamma > 0.0) || cfg.dt <= 1.0 / (10.0 * s.gamma),
         "dt <= 1/(10 gamma) required so decision times are resolved");
    need(!cfg.antithetic || cfg.n_paths % 2 == 0, "antithetic sampling needs an even number of paths");
}

// Probability that a Brownian bridge of variance sigma2 * h started at
// distance d0 > 0 from a level and ending at distance d1 > 0 touches it.
inline double bridge_touch_probability(double d0, double d1, double sigma2h)
{
    const double e = 2.0 * d0 * d1 / sigma2h;
    return e > 745.0 ? 0.0 : std::exp(-e);
}

// Running mean / sum of squared deviations, merged in a fixed order.
struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double v)
    {
        count += 1.0;
        const double d = v - mean;
        mean += d / count;
        m2 += d * (v - mean);
    }

    void merge(const Moments& o)
    {
        if (o.count == 0.0) return;
        const double n = count + o.count;
        const double d = o.mean - mean;
        mean += d * o.count / n;
        m2 += o.m2 + d * d * count * o.count / n;
        count = n;
    }
};

}  // namespace detail

/// Simulates one path of the controlled surplus.
///
/// Between events the surplus moves by an Euler step of
/// (mu - current rate) h + sigma sqrt(h) N(0, 1); claims and decision times
/// come from exact exponential clocks and are stepped to exactly. Crossings
/// of 0 (ruin) and of b (ratchet trigger) inside a Gaussian step are detected
/// with the Brownian-bridge touch probability. Time 0 is never a decision
/// time. With antithetic sampling, paths 2k and 2k+1 share randomness with
/// opposite Gaussian increments.
inline PathOutcome simulate_path(const LevyModel& model, const Strategy& s, double delta, double y0,
                                 const SimConfig& cfg, std::uint64_t path_index,
                                 PathTrace* trace = nullptr)
{
    detail::validate_simulation(model, s, delta, y0, cfg);
    const std::uint64_t stream = cfg.antithetic ? path_index / 2 : path_index;
    const double sign = (cfg.antithetic && path_index % 2 == 1) ? -1.0 : 1.0;
    SubstreamEngine gauss_eng(cfg.seed, stream, StreamPurpose::gaussian);
    SubstreamEngine bridge_eng(cfg.seed, stream, StreamPurpose::bridge);
    SubstreamEngine decision_eng(cfg.seed, stream, StreamPurpose::decisions);
    SubstreamEngine jump_eng(cfg.seed, stream, StreamPurpose::jumps);
    boost::random::normal_distribution<double> normal;
    const double inf = std::numeric_limits<double>::infinity();

    const double sigma = model.sigma;
    const double sigma2 = sigma * sigma;
    const bool jumps = model.has_jumps();
    boost::random::exponential_distribution<double> decision_gap(s.gamma > 0.0 ? s.gamma : 1.0);
    boost::random::exponential_distribution<double> jump_gap(jumps ? model.lambda : 1.0);
    boost::random::exponential_distribution<double> jump_size(model.eta);

    PathOutcome out;
    double t = 0.0;
    double x = y0;
    bool ratcheted = y0 >= s.b;
    if (ratcheted) out.ratchet_time = 0.0;
    double next_decision = s.gamma > 0.0 ? decision_gap(decision_eng) : inf;
    double next_jump = jumps ? jump_gap(jump_eng) : inf;

    const auto ruin_at = [&](double when) {
        out.ruined = true;
        out.tau = when;
        out.disc_ruin_indicator = std::exp(-delta * when);
    };
    // Zero is regular for (0, inf) when the paths have unbounded variation.
    if (x == 0.0 && sigma > 0.0) {
        ruin_at(0.0);
        return out;
    }

    while (true) {
        if (t >= cfg.t_max) {
            out.censored = true;
            return out;
        }
        double h = cfg.dt;
        enum class Stop { grid, decision, jump, horizon } stop = Stop::grid;
        if (next_decision - t <= h) h = next_decision - t, stop = Stop::decision;
        if (next_jump - t <= h) h = next_jump - t, stop = Stop::jump;
        if (cfg.t_max - t <= h) h = cfg.t_max - t, stop = Stop::horizon;

        const double rate = s.c1 + (ratcheted ? s.c2 : 0.0);
        if (trace) trace->steps.push_back({t, x, rate});
        if (rate > 0.0) {
            const double accrual = delta > 0.0 ? -std::expm1(-delta * h) / delta : h;
            out.disc_ratchet += rate * std::exp(-delta * t) * accrual;
        }
        double xn = x + (model.mu - rate) * h;
        if (sigma > 0.0) xn += sign * sigma * std::sqrt(h) * normal(gauss_eng);

        switch (stop) {
        case Stop::decision: t = next_decision; break;
        case Stop::jump: t = next_jump; break;
        case Stop::horizon: t = cfg.t_max; break;
        default: t += h; break;
        }

        if (xn < 0.0) {
            ruin_at(t);
            return out;
        }
        if (sigma > 0.0 && h > 0.0) {
            const double p = detail::bridge_touch_probability(x, xn, sigma2 * h);
            if (p > 0.0 && bridge_eng.uniform_open() < p) {
                ruin_at(t);
                return out;
            }
        }
        if (!ratcheted) {
            bool up = xn >= s.b;
            if (!up && sigma > 0.0 && h > 0.0) {
                const double p = detail::bridge_touch_probability(s.b - x, s.b - xn, sigma2 * h);
                up = p > 0.0 && bridge_eng.uniform_open() < p;
            }
            if (up) {
                ratcheted = true;
                out.ratchet_time = t;
            }
        }

        if (stop == Stop::jump) {
            xn -= jump_size(jump_eng);
            next_jump = t + jump_gap(jump_eng);
            if (xn < 0.0) {
                ruin_at(t);
                return out;
            }
        } else if (stop == Stop::decision) {
            ++out.decisions;
            if (xn > s.a) {
                out.disc_periodic += std::exp(-delta * t) * (xn - s.a);
                if (trace) trace->payments.push_back({t, xn, s.a});
                ++out.payments;
                xn = s.a;
            }
            next_decision = t + decision_gap(decision_eng);
        }
        x = xn;
    }
}

/// Mean and standard error of both targets over cfg.n_paths paths.
///
/// Paths are processed in fixed-size chunks whose statistics are merged in
/// chunk order, so the result depends only on (seed, n_paths, cfg) and not on
/// the number of workers. Censored paths contribute their truncated
/// dividends and no ruin payment.
inline McSummary estimate_all(const LevyModel& model, const Strategy& s, double delta, double y0,
                              const SimConfig& cfg)
{
    detail::validate_simulation(model, s, delta, y0, cfg);
    const std::uint64_t per_unit = cfg.antithetic ? 2 : 1;
    const std::uint64_t units = cfg.n_paths / per_unit;
    constexpr std::uint64_t chunk = 256;
    const std::size_t n_chunks = static_cast<std::size_t>((units + chunk - 1) / chunk);

    struct ChunkStats {
        detail::Moments dividends, ruin;
        std::uint64_t censored = 0;
    };
    std::vector<ChunkStats> stats(n_chunks);
    parallel_for(
        n_chunks,
        [&](std::size_t c) {
            auto& st = stats[c];
            const std::uint64_t lo = c * chunk, hi = std::min(units, lo + chunk);
            for (std::uint64_t u = lo; u < hi; ++u) {
                double div = 0.0, ruin = 0.0;
                for (std::uint64_t k = 0; k < per_unit; ++k) {
                    const auto o = simulate_path(model, s, delta, y0, cfg, u * per_unit + k);
                    div += o.dividends();
                    ruin += o.disc_ruin_indicator;
                    st.censored += o.censored ? 1 : 0;
                }
                st.dividends.add(div / per_unit);
                st.ruin.add(ruin / per_unit);
            }
        },
        cfg.workers ? cfg.workers : worker_count());

    detail::Moments div, ruin;
    std::uint64_t censored = 0;
    for (const auto& st : stats) {
        div.merge(st.dividends);
        ruin.merge(st.ruin);
        censored += st.censored;
    }
    const auto finish = [&](const detail::Moments& m) {
        McEstimate e;
        e.mean = m.mean;
        e.n = cfg.n_paths;
        e.se_defined = m.count > 1.0;
        e.std_error = e.se_defined ? std::sqrt(m.m2 / (m.count - 1.0) / m.count) : 0.0;
        e.censored_fraction = static_cast<double>(censored) / static_cast<double>(cfg.n_paths);
        return e;
    };
    return {finish(div), finish(ruin)};
}

inline McEstimate estimate(const LevyModel& model, const Strategy& s, double delta, double y0,
                           const SimConfig& cfg, McTarget target)
{
    const auto both = estimate_all(model, s, delta, y0, cfg);
    return target == McTarget::dividend_npv ? both.dividends : both.ruin;
}

}  // namespace ratchet_levy
