#pragma once

// Command-line front end. Needs the vendored CLI11 and nlohmann/json headers.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ratchet_levy.hpp"

namespace ratchet_levy::cli {

enum ExitCode : int { exit_ok = 0, exit_internal = 1, exit_validation = 2, exit_numerical = 3 };

/// Shortest round-trip decimal form; independent of the C locale.
inline std::string fmt(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

/// Line of every "block.key" (or "key") in a JSON text: a string-aware scan
/// that tracks the enclosing object keys.
inline std::map<std::string, int> key_lines(const std::string& text)
{
    std::map<std::string, int> lines;
    std::vector<std::string> path;   // key of each open object
    std::vector<char> open;          // '{' or '['
    std::string pending;             // last key read at the current level
    int line = 1;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
        } else if (c == '"') {
            std::string s;
            const int start = line;
            for (++i; i < text.size() && text[i] != '"'; ++i) {
                if (text[i] == '\\') ++i;
                else s.push_back(text[i]);
                if (i < text.size() && text[i] == '\n') ++line;
            }
            std::size_t j = i + 1;
            while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
            if (j < text.size() && text[j] == ':' && !open.empty() && open.back() == '{') {
                std::string full;
                for (const auto& p : path)
                    if (!p.empty()) full += p + ".";
                full += s;
                lines.emplace(full, start);
                pending = s;
            }
        } else if (c == '{' || c == '[') {
            path.push_back(c == '{' ? pending : std::string{});
            open.push_back(c);
            pending.clear();
        } else if (c == '}' || c == ']') {
            if (!path.empty()) path.pop_back();
            if (!open.empty()) open.pop_back();
        }
    }
    return lines;
}

/// Fully resolved run configuration with the origin of every value, so
/// validation messages can point at a config line or a flag.
struct RunConfig {
    LevyModel model = LevyModel::brownian(1.0, 2.0);
    Strategy strategy{};
    double delta = 0.05;
    double y = 8.0;
    SimConfig sim{};
    std::string target = "both";
    std::optional<ScaleBackend> backend;
    double tolerance = 0.005;
    std::string optimize = "a";
    // custom sweep (used when no preset is given)
    Quantity quantity = Quantity::dividend_npv;
    SweepAxis axis = SweepAxis::y;
    GridRange range{0.0, 10.0, 101};
    GridRange range2{0.05, 0.3, 6};

    std::map<std::string, std::string> origin;

    std::string where(const std::string& key) const
    {
        const auto it = origin.find(key);
        return it == origin.end() ? "default " + key : it->second;
    }

    nlohmann::json to_json() const
    {
        nlohmann::json j;
        j["model"] = {{"kind", std::string(to_string(model.kind))},
                      {"mu", model.mu},
                      {"sigma", model.sigma},
                      {"lambda", model.lambda},
                      {"eta", model.eta}};
        j["strategy"] = {{"a", strategy.a},
                         {"b", strategy.b},
                         {"c1", strategy.c1},
                         {"c2", strategy.c2},
                         {"gamma", strategy.gamma}};
        j["delta"] = delta;
        j["y"] = y;
        j["backend"] = backend ? std::string(to_string(*backend)) : std::string("auto");
        return j;
    }
};

namespace detail {

inline std::optional<SweepAxis> parse_axis(const std::string& s)
{
    for (auto a : {SweepAxis::y, SweepAxis::a, SweepAxis::b, SweepAxis::c1, SweepAxis::c2,
                   SweepAxis::sigma, SweepAxis::gamma, SweepAxis::c1c2_grid})
        if (s == to_string(a)) return a;
    return std::nullopt;
}

inline std::optional<ScaleBackend> parse_backend(const std::string& s)
{
    if (s == "closed_form") return ScaleBackend::closed_form;
    if (s == "inversion") return ScaleBackend::inversion;
    return std::nullopt;
}

struct Loader {
    RunConfig& cfg;
    std::string file;
    std::map<std::string, int> lines;

    std::string at(const std::string& key) const
    {
        const auto it = lines.find(key);
        return file + ":" + (it == lines.end() ? std::string("?") : std::to_string(it->second));
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const
    {
        throw ConfigError(at(key) + ": " + key + ": " + what);
    }

    double number(const nlohmann::json& j, const std::string& key) const
    {
        if (!j.is_number()) fail(key, "expected a number");
        return j.get<double>();
    }

    std::string text(const nlohmann::json& j, const std::string& key) const
    {
        if (!j.is_string()) fail(key, "expected a string");
        return j.get<std::string>();
    }

    template <class Fn>
    void each(const nlohmann::json& obj, const std::string& block, Fn&& fn) const
    {
        if (!obj.is_object()) fail(block, "expected an object");
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            const std::string key = block.empty() ? it.key() : block + "." + it.key();
            cfg.origin[key] = at(key);
            if (!fn(it.key(), it.value(), key)) fail(key, "unknown key");
        }
    }

    void load(const nlohmann::json& root)
    {
        each(root, "", [&](const std::string& k, const nlohmann::json& v, const std::string& key) {
            if (k == "model") return load_model(v), true;
            if (k == "strategy") return load_strategy(v), true;
            if (k == "simulation") return load_simulation(v), true;
            if (k == "sweep") return load_sweep(v), true;
            if (k == "delta") return cfg.delta = number(v, key), true;
            if (k == "y") return cfg.y = number(v, key), true;
            if (k == "backend") {
                const auto b = text(v, key);
                if (b != "auto") {
                    cfg.backend = parse_backend(b);
                    if (!cfg.backend) fail(key, "expected closed_form, inversion or auto");
                }
                return true;
            }
            return false;
        });
    }

    void load_model(const nlohmann::json& m)
    {
        each(m, "model", [&](const std::string& k, const nlohmann::json& v, const std::string& key) {
            if (k == "kind") {
                const auto s = text(v, key);
                if (s == "brownian") cfg.model.kind = ModelKind::brownian_drift;
                else if (s == "compound_poisson_exp") cfg.model.kind = ModelKind::compound_poisson_exp;
                else fail(key, "expected brownian or compound_poisson_exp");
                return true;
            }
            if (k == "mu") return cfg.model.mu = number(v, key), true;
            if (k == "sigma") return cfg.model.sigma = number(v, key), true;
            if (k == "lambda") return cfg.model.lambda = number(v, key), true;
            if (k == "eta") return cfg.model.eta = number(v, key), true;
            return false;
        });
    }

    void load_strategy(const nlohmann::json& s)
    {
        each(s, "strategy", [&](const std::string& k, const nlohmann::json& v, const std::string& key) {
            if (k == "a") return cfg.strategy.a = number(v, key), true;
            if (k == "b") return cfg.strategy.b = number(v, key), true;
            if (k == "c1") return cfg.strategy.c1 = number(v, key), true;
            if (k == "c2") return cfg.strategy.c2 = number(v, key), true;
            if (k == "gamma") return cfg.strategy.gamma = number(v, key), true;
            return false;
        });
    }

    void load_simulation(const nlohmann::json& s)
    {
        each(s, "simulation", [&](const std::string& k, const nlohmann::json& v, const std::string& key) {
            if (k == "dt") return cfg.sim.dt = number(v, key), true;
            if (k == "tmax") return cfg.sim.t_max = number(v, key), true;
            if (k == "paths" || k == "seed") {
                if (!v.is_number_unsigned()) fail(key, "expected a non-negative integer");
                (k == "paths" ? cfg.sim.n_paths : cfg.sim.seed) = v.get<std::uint64_t>();
                return true;
            }
            if (k == "antithetic") {
                if (!v.is_boolean()) fail(key, "expected true or false");
                cfg.sim.antithetic = v.get<bool>();
                return true;
            }
            if (k == "target") return cfg.target = text(v, key), true;
            return false;
        });
    }

    void load_sweep(const nlohmann::json& s)
    {
        each(s, "sweep", [&](const std::string& k, const nlohmann::json& v, const std::string& key) {
            if (k == "quantity") {
                const auto q = text(v, key);
                if (q == "V") cfg.quantity = Quantity::dividend_npv;
                else if (q == "L") cfg.quantity = Quantity::ruin_laplace;
                else fail(key, "expected V or L");
                return true;
            }
            if (k == "axis") {
                const auto a = parse_axis(text(v, key));
                if (!a) fail(key, "expected one of y, a, b, c1, c2, sigma, gamma, c1c2_grid");
                cfg.axis = *a;
                return true;
            }
            const auto count = [&] {
                if (!v.is_number_integer()) fail(key, "expected an integer");
                return v.get<int>();
            };
            if (k == "lo") return cfg.range.lo = number(v, key), true;
            if (k == "hi") return cfg.range.hi = number(v, key), true;
            if (k == "n") return cfg.range.n = count(), true;
            if (k == "lo2") return cfg.range2.lo = number(v, key), true;
            if (k == "hi2") return cfg.range2.hi = number(v, key), true;
            if (k == "n2") return cfg.range2.n = count(), true;
            return false;
        });
    }
};

}  // namespace detail

/// Reads a JSON config file into cfg (values not in the file keep defaults).
inline void load_config_file(const std::string& path, RunConfig& cfg)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    detail::Loader{cfg, path, key_lines(text)}.load(root);
}

/// Flag values that override the config file.
struct Overrides {
    std::optional<double> y, a, b, c1, c2, gamma, delta, dt, tmax, mu, sigma, lambda, eta, tol;
    std::optional<std::uint64_t> seed, paths;
    std::optional<std::string> backend, target, model, optimize;
    bool antithetic = false;

    void apply(RunConfig& cfg) const
    {
        const auto set = [&](const std::optional<double>& v, double& dst, const char* key, const char* flag) {
            if (v) {
                dst = *v;
                cfg.origin[key] = std::string("--") + flag;
            }
        };
        set(y, cfg.y, "y", "y");
        set(a, cfg.strategy.a, "strategy.a", "a");
        set(b, cfg.strategy.b, "strategy.b", "b");
        set(c1, cfg.strategy.c1, "strategy.c1", "c1");
        set(c2, cfg.strategy.c2, "strategy.c2", "c2");
        set(gamma, cfg.strategy.gamma, "strategy.gamma", "gamma");
        set(delta, cfg.delta, "delta", "delta");
        set(dt, cfg.sim.dt, "simulation.dt", "dt");
        set(tmax, cfg.sim.t_max, "simulation.tmax", "tmax");
        set(mu, cfg.model.mu, "model.mu", "mu");
        set(sigma, cfg.model.sigma, "model.sigma", "sigma");
        set(lambda, cfg.model.lambda, "model.lambda", "lambda");
        set(eta, cfg.model.eta, "model.eta", "eta");
        set(tol, cfg.tolerance, "tolerance", "tol");
        if (seed) cfg.sim.seed = *seed, cfg.origin["simulation.seed"] = "--seed";
        if (paths) cfg.sim.n_paths = *paths, cfg.origin["simulation.paths"] = "--paths";
        if (antithetic) cfg.sim.antithetic = true, cfg.origin["simulation.antithetic"] = "--antithetic";
        if (target) cfg.target = *target, cfg.origin["simulation.target"] = "--target";
        if (optimize) cfg.optimize = *optimize, cfg.origin["optimize"] = "--optimize";
        if (model) {
            cfg.origin["model.kind"] = "--model";
            if (*model == "brownian") cfg.model.kind = ModelKind::brownian_drift;
            else if (*model == "compound_poisson_exp") cfg.model.kind = ModelKind::compound_poisson_exp;
            else throw ConfigError("--model: expected brownian or compound_poisson_exp");
        }
        if (backend && *backend != "auto") {
            cfg.backend = detail::parse_backend(*backend);
            cfg.origin["backend"] = "--backend";
            if (!cfg.backend) throw ConfigError("--backend: expected closed_form, inversion or auto");
        }
    }
};

enum class Command { value, laplace, simulate, sweep, optimize };

namespace detail {

inline void check(const RunConfig& cfg, bool ok, const std::string& key, const std::string& what)
{
    if (!ok) throw ConfigError(cfg.where(key) + ": " + key + ": " + what);
}

}  // namespace detail

/// Re-checks every model/strategy invariant the command relies on and names
/// the config line or flag that set the offending value.
inline void validate(const RunConfig& cfg, Command cmd)
{
    using detail::check;
    const auto& m = cfg.model;
    const auto& s = cfg.strategy;
    const bool sim = cmd == Command::simulate;
    check(cfg, std::isfinite(m.mu), "model.mu", "mu must be finite");
    check(cfg, std::isfinite(m.sigma) && m.sigma >= 0.0, "model.sigma", "sigma >= 0 required");
    if (m.kind == ModelKind::compound_poisson_exp) {
        check(cfg, std::isfinite(m.lambda) && m.lambda >= 0.0, "model.lambda", "lambda >= 0 required");
        check(cfg, std::isfinite(m.eta) && m.eta > 0.0, "model.eta", "eta > 0 required");
    }
    check(cfg, std::isfinite(s.a) && s.a >= 0.0, "strategy.a", "a >= 0 required");
    check(cfg, std::isfinite(s.b) && s.b >= s.a, "strategy.b",
          "b >= a required (b=" + fmt(s.b) + ", a=" + fmt(s.a) + ")");
    check(cfg, std::isfinite(s.c1) && s.c1 >= 0.0, "strategy.c1", "c1 >= 0 required");
    if (sim) {
        check(cfg, std::isfinite(s.c2) && s.c2 >= 0.0, "strategy.c2", "c2 >= 0 required");
        check(cfg, std::isfinite(s.gamma) && s.gamma >= 0.0, "strategy.gamma", "gamma >= 0 required");
    } else {
        check(cfg, std::isfinite(s.c2) && s.c2 > 0.0, "strategy.c2", "c2 > 0 required");
        check(cfg, std::isfinite(s.gamma) && s.gamma > 0.0, "strategy.gamma", "gamma > 0 required");
        check(cfg, s.a > 0.0, "strategy.a", "a > 0 required");
        check(cfg, m.mean_drift() - s.c1 - s.c2 > 0.0, "strategy.c2",
              "positive drift required: E[Y(1)] - c1 - c2 > 0");
    }
    if (cmd == Command::value || cmd == Command::optimize)
        check(cfg, std::isfinite(cfg.delta) && cfg.delta > 0.0, "delta", "delta > 0 required");
    else
        check(cfg, std::isfinite(cfg.delta) && cfg.delta >= 0.0, "delta", "delta >= 0 required");
    check(cfg, std::isfinite(cfg.y) && cfg.y >= 0.0, "y", "y >= 0 required");
    if (cfg.backend == ScaleBackend::closed_form)
        check(cfg, closed_form_available(m), "backend",
              "closed_form backend needs sigma = 0 when jumps are present");
    if (sim) {
        check(cfg, std::isfinite(cfg.sim.dt) && cfg.sim.dt > 0.0, "simulation.dt", "dt > 0 required");
        check(cfg, !(s.gamma > 0.0) || cfg.sim.dt <= 1.0 / (10.0 * s.gamma), "simulation.dt",
              "dt <= 1/(10 gamma) required so decision times are resolved (dt=" + fmt(cfg.sim.dt) +
                  ", gamma=" + fmt(s.gamma) + ")");
        check(cfg, std::isfinite(cfg.sim.t_max) && cfg.sim.t_max > 0.0, "simulation.tmax",
              "tmax > 0 required");
        check(cfg, cfg.sim.n_paths > 0, "simulation.paths", "paths > 0 required");
        check(cfg, !cfg.sim.antithetic || cfg.sim.n_paths % 2 == 0, "simulation.paths",
              "antithetic sampling needs an even number of paths");
        check(cfg, cfg.target == "both" || cfg.target == "dividends" || cfg.target == "ruin",
              "simulation.target", "expected both, dividends or ruin");
    }
    if (cmd == Command::optimize) {
        check(cfg, cfg.optimize == "a" || cfg.optimize == "b", "optimize", "expected a or b");
        check(cfg, cfg.tolerance > 0.0, "tolerance", "tolerance > 0 required");
    }
}

namespace detail {

inline void write_csv(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError(path.string() + ": cannot write output file");
    f << content;
}

inline std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows,
                             const std::vector<std::optional<bool>>* concave = nullptr)
{
    std::string out;
    const std::string q(to_string(spec.quantity));
    if (spec.axis == SweepAxis::c1c2_grid) out = "c1,c2," + q + ",error";
    else out = std::string(to_string(spec.axis)) + "," + q + ",error";
    if (concave) out += ",concave";
    out += "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out += fmt(r.x) + ",";
        if (spec.axis == SweepAxis::c1c2_grid) out += fmt(r.x2) + ",";
        out += (r.ok() ? fmt(r.value) : std::string()) + ",";
        std::string e = r.error;
        for (auto& ch : e)
            if (ch == ',' || ch == '\n') ch = ';';
        out += e;
        if (concave) out += "," + ((*concave)[i] ? std::string((*concave)[i].value() ? "true" : "false") : "");
        out += "\n";
    }
    return out;
}

}  // namespace detail

/// Runs one CLI invocation; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Dividend value and ruin transform under a ratcheting-periodic strategy", "ratchet_levy"};
    app.require_subcommand(1);
    std::string config_path, preset, out_path, paths_csv;
    unsigned threads = 0;
    Overrides ov;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--y", ov.y, "initial surplus");
        sub->add_option("--a", ov.a, "periodic barrier");
        sub->add_option("--b", ov.b, "ratcheting barrier");
        sub->add_option("--c1", ov.c1, "initial dividend rate");
        sub->add_option("--c2", ov.c2, "ratchet increment");
        sub->add_option("--gamma", ov.gamma, "decision intensity");
        sub->add_option("--delta", ov.delta, "discount rate");
        sub->add_option("--mu", ov.mu, "drift of Y");
        sub->add_option("--sigma", ov.sigma, "Gaussian coefficient of Y");
        sub->add_option("--lambda", ov.lambda, "claim intensity");
        sub->add_option("--eta", ov.eta, "exponential claim rate");
        sub->add_option("--model", ov.model, "brownian or compound_poisson_exp");
        sub->add_option("--backend", ov.backend, "closed_form, inversion or auto");
        sub->add_option("--out", out_path, "output file or directory");
    };
    auto* cmd_value = app.add_subcommand("value", "expected NPV of dividends V(y;a,b)");
    auto* cmd_laplace = app.add_subcommand("laplace", "Laplace transform of the ruin time L(y;a,b)");
    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo estimate of V and L");
    auto* cmd_sweep = app.add_subcommand("sweep", "parameter sweep / figure preset to CSV");
    auto* cmd_opt = app.add_subcommand("optimize", "optimal periodic barrier a or approximate b*");
    for (auto* sub : {cmd_value, cmd_laplace, cmd_sim, cmd_sweep, cmd_opt}) common(sub);
    cmd_sim->add_option("--seed", ov.seed, "RNG seed");
    cmd_sim->add_option("--paths", ov.paths, "number of paths");
    cmd_sim->add_option("--dt", ov.dt, "time step");
    cmd_sim->add_option("--tmax", ov.tmax, "horizon");
    cmd_sim->add_option("--target", ov.target, "both, dividends or ruin");
    cmd_sim->add_flag("--antithetic", ov.antithetic, "antithetic Gaussian pairs");
    cmd_sim->add_option("--threads", threads, "worker threads (0: automatic)");
    cmd_sim->add_option("--paths-csv", paths_csv, "write per-path outcomes to this CSV");
    cmd_sweep->add_option("--preset", preset, "figure preset")
        ->check(CLI::IsMember(preset_names()));
    cmd_sweep->add_option("--threads", threads, "worker threads (0: automatic)");
    cmd_opt->add_option("--optimize", ov.optimize, "a (periodic barrier) or b (ratcheting barrier)");
    cmd_opt->add_option("--tol", ov.tol, "relative tolerance for the b approximation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    }

    const Command cmd = cmd_value->parsed()     ? Command::value
                        : cmd_laplace->parsed() ? Command::laplace
                        : cmd_sim->parsed()     ? Command::simulate
                        : cmd_sweep->parsed()   ? Command::sweep
                                                : Command::optimize;
    try {
        RunConfig cfg;
        if (!config_path.empty()) load_config_file(config_path, cfg);
        ov.apply(cfg);
        if (cmd != Command::sweep || preset.empty()) validate(cfg, cmd);

        nlohmann::json echo = cfg.to_json();
        if (cmd == Command::simulate)
            echo["simulation"] = {{"dt", cfg.sim.dt},         {"tmax", cfg.sim.t_max},
                                  {"paths", cfg.sim.n_paths}, {"seed", cfg.sim.seed},
                                  {"antithetic", cfg.sim.antithetic}, {"target", cfg.target}};
        if (cmd == Command::sweep) {
            if (!preset.empty()) echo = {{"preset", preset}};
            else
                echo["sweep"] = {{"quantity", std::string(to_string(cfg.quantity))},
                                 {"axis", std::string(to_string(cfg.axis))},
                                 {"lo", cfg.range.lo}, {"hi", cfg.range.hi}, {"n", cfg.range.n},
                                 {"lo2", cfg.range2.lo}, {"hi2", cfg.range2.hi}, {"n2", cfg.range2.n}};
        }
        if (cmd == Command::optimize) {
            echo["optimize"] = cfg.optimize;
            echo["tolerance"] = cfg.tolerance;
        }
        out << "config=" << echo.dump() << "\n";

        switch (cmd) {
        case Command::value: {
            const auto r = Valuator(cfg.model, cfg.strategy, cfg.delta, cfg.backend).value(cfg.y);
            out << "value=" << fmt(r.value) << " region=" << to_string(r.region)
                << " ratchet=" << fmt(r.ratchet_part) << " periodic=" << fmt(r.periodic_part);
            if (r.region != Region::upper) out << " continuation=" << fmt(r.continuation);
            out << "\n";
            if (!out_path.empty())
                detail::write_csv(out_path, "y,value,region,ratchet,periodic,continuation\n" + fmt(cfg.y) +
                                                "," + fmt(r.value) + "," + std::string(to_string(r.region)) +
                                                "," + fmt(r.ratchet_part) + "," + fmt(r.periodic_part) +
                                                "," + fmt(r.continuation) + "\n");
            break;
        }
        case Command::laplace: {
            const auto r = RuinEvaluator(cfg.model, cfg.strategy, cfg.delta, cfg.backend)(cfg.y);
            out << "laplace=" << fmt(r.value) << " region=" << to_string(r.region) << "\n";
            break;
        }
        case Command::simulate: {
            SimConfig sc = cfg.sim;
            sc.workers = threads;
            const auto both = estimate_all(cfg.model, cfg.strategy, cfg.delta, cfg.y, sc);
            const auto report = [&](const char* name, const McEstimate& e, std::optional<double> exact) {
                out << "target=" << name << " mean=" << fmt(e.mean) << " std_error=" << fmt(e.std_error)
                    << " n=" << e.n << " censored_fraction=" << fmt(e.censored_fraction);
                if (!e.se_defined) out << " se=undefined";
                if (exact) {
                    out << " closed_form=" << fmt(*exact);
                    if (e.se_defined && e.std_error > 0.0) out << " z=" << fmt((e.mean - *exact) / e.std_error);
                }
                out << "\n";
            };
            const auto closed = [&](auto&& f) -> std::optional<double> {
                try {
                    return f();
                } catch (const Error&) {
                    return std::nullopt;
                }
            };
            if (cfg.target != "ruin")
                report("DividendNPV", both.dividends, closed([&] {
                           return Valuator(cfg.model, cfg.strategy, cfg.delta, cfg.backend).value(cfg.y).value;
                       }));
            if (cfg.target != "dividends")
                report("RuinLaplace", both.ruin, closed([&] {
                           return RuinEvaluator(cfg.model, cfg.strategy, cfg.delta, cfg.backend)(cfg.y).value;
                       }));
            if (!paths_csv.empty()) {
                std::string csv = "path,ruined,censored,tau,disc_ratchet,disc_periodic,disc_ruin_indicator\n";
                for (std::uint64_t i = 0; i < sc.n_paths; ++i) {
                    const auto o = simulate_path(cfg.model, cfg.strategy, cfg.delta, cfg.y, sc, i);
                    csv += std::to_string(i) + "," + (o.ruined ? "1" : "0") + "," + (o.censored ? "1" : "0") +
                           "," + fmt(o.tau) + "," + fmt(o.disc_ratchet) + "," + fmt(o.disc_periodic) + "," +
                           fmt(o.disc_ruin_indicator) + "\n";
                }
                detail::write_csv(paths_csv, csv);
            }
            break;
        }
        case Command::sweep: {
            const std::filesystem::path dir = out_path.empty() ? "." : out_path;
            std::vector<Panel> panels;
            if (!preset.empty()) {
                panels = figure_preset(preset);
            } else {
                ParameterSet fixed{cfg.model, cfg.strategy, cfg.delta, cfg.y};
                panels.push_back({"sweep", PanelKind::sweep,
                                  SweepSpec{cfg.quantity, cfg.axis, cfg.range, cfg.range2, fixed}});
            }
            for (const auto& p : panels) {
                const auto file = dir / (p.name + ".csv");
                out << "panel=" << p.name;
                if (p.kind == PanelKind::sigma_profile) {
                    const auto& f = p.spec.fixed;
                    const auto prof = sigma_profile(f.model, f.y, f.strategy, f.delta, p.spec.range);
                    detail::write_csv(file, detail::sweep_csv(p.spec, prof.rows, &prof.concave));
                    out << " rows=" << prof.rows.size() << " argmax_sigma=" << fmt(prof.argmax_sigma)
                        << " max_value=" << fmt(prof.max_value)
                        << " interior_argmax=" << (prof.interior_argmax ? "true" : "false")
                        << " all_concave=" << (prof.all_concave ? "true" : "false");
                } else {
                    const auto rows = sweep(p.spec, threads ? threads : worker_count());
                    std::size_t errors = 0;
                    for (const auto& r : rows) errors += r.ok() ? 0 : 1;
                    detail::write_csv(file, detail::sweep_csv(p.spec, rows));
                    out << " rows=" << rows.size() << " errors=" << errors;
                }
                out << " file=" << file.generic_string() << "\n";
            }
            break;
        }
        case Command::optimize: {
            const auto& s = cfg.strategy;
            if (cfg.optimize == "a") {
                const auto rep = optimize_a(cfg.model, cfg.y, s.b, s.c1, s.c2, s.gamma, cfg.delta);
                out << "argmax_a=" << fmt(rep.argmax) << " max_value=" << fmt(rep.max_value)
                    << " refined=" << (rep.refined ? "true" : "false") << "\n";
                if (!out_path.empty()) {
                    std::string csv = "a,V\n";
                    for (const auto& [a, v] : rep.grid) csv += fmt(a) + "," + fmt(v) + "\n";
                    detail::write_csv(out_path, csv);
                }
            } else {
                const auto rep =
                    approximate_b_star(ParameterSet{cfg.model, s, cfg.delta, cfg.y}, cfg.tolerance);
                out << "b_star=inf b_tilde=" << fmt(rep.b_tilde) << " asymptote=" << fmt(rep.asymptote)
                    << " tolerance=" << fmt(cfg.tolerance) << " found=" << (rep.found ? "true" : "false")
                    << " note=\"" << rep.note << "\"\n";
                if (!out_path.empty()) {
                    std::string csv = "b,V\n";
                    for (const auto& [b, v] : rep.grid) csv += fmt(b) + "," + fmt(v) + "\n";
                    detail::write_csv(out_path, csv);
                }
            }
            break;
        }
        }
        return exit_ok;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
}

}  // namespace ratchet_levy::cli
