#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ratchet_levy/cli.hpp"

using namespace ratchet_levy;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "ratchet_levy");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

// Second line of the output (the first echoes the resolved config).
std::string result_line(const std::string& out)
{
    std::istringstream in(out);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    return line;
}

std::filesystem::path scratch_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("ratchet_levy_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(CliFormat, ShortestRoundTrip)
{
    EXPECT_EQ(cli::fmt(0.1), "0.1");
    EXPECT_EQ(cli::fmt(1.0), "1");
    EXPECT_EQ(cli::fmt(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(std::stod(cli::fmt(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(CliFormat, KeyLines)
{
    const auto lines = cli::key_lines("{\n  \"model\": {\n    \"mu\": 1,\n    \"sigma\": 2\n  },\n  \"y\": 3\n}\n");
    EXPECT_EQ(lines.at("model"), 2);
    EXPECT_EQ(lines.at("model.mu"), 3);
    EXPECT_EQ(lines.at("model.sigma"), 4);
    EXPECT_EQ(lines.at("y"), 6);
}

TEST(CliValue, BaseConfigLine)
{
    const auto v = invoke({"value", "--y", "8"});
    ASSERT_EQ(v.code, 0) << v.err;
    EXPECT_EQ(v.out.rfind("config={", 0), 0u);
    const std::string line = result_line(v.out);
    EXPECT_TRUE(std::regex_match(line, std::regex(R"(value=\S+ region=Upper ratchet=\S+ periodic=\S+)"))) << line;
    EXPECT_NEAR(std::stod(line.substr(6)), 13.6492877681096, 1e-10);
}

TEST(CliValue, ConfigEchoIsResolved)
{
    const auto v = invoke({"value", "--y", "4", "--c1", "0.05"});
    ASSERT_EQ(v.code, 0);
    const auto echo = nlohmann::json::parse(v.out.substr(7, v.out.find('\n') - 7));
    EXPECT_EQ(echo["y"], 4.0);
    EXPECT_EQ(echo["strategy"]["c1"], 0.05);
    EXPECT_EQ(echo["strategy"]["b"], 5.0);
    EXPECT_EQ(echo["model"]["kind"], "brownian");
    EXPECT_NE(result_line(v.out).find("region=Middle"), std::string::npos);
}

TEST(CliValue, NegativeSurplusRejected)
{
    const auto v = invoke({"value", "--y", "-1"});
    EXPECT_EQ(v.code, 2);
    EXPECT_NE(v.err.find("y >= 0"), std::string::npos) << v.err;
    EXPECT_NE(v.err.find("--y"), std::string::npos) << v.err;
}

TEST(CliValue, ZeroDiscountRejectedForValueOnly)
{
    EXPECT_EQ(invoke({"value", "--delta", "0"}).code, 2);
    const auto l = invoke({"laplace", "--delta", "0"});
    EXPECT_EQ(l.code, 0) << l.err;
}

TEST(CliLaplace, Boundaries)
{
    const auto z = invoke({"laplace", "--y", "0"});
    ASSERT_EQ(z.code, 0);
    EXPECT_EQ(result_line(z.out), "laplace=1 region=Lower");
    const auto d = invoke({"laplace", "--y", "8", "--delta", "1e-8"});
    ASSERT_EQ(d.code, 0);
    EXPECT_NEAR(std::stod(result_line(d.out).substr(8)), 1.0, 1e-6);
    const auto bad = invoke({"laplace", "--a", "6", "--b", "5"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("b >= a"), std::string::npos);
}

TEST(CliParse, UnknownFlagAndCommand)
{
    EXPECT_EQ(invoke({"value", "--bogus", "1"}).code, 2);
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"value", "--backend", "fft"}).code, 2);
}

TEST(CliParse, MixedModelNeedsInversion)
{
    const std::vector<std::string> base{"value", "--model", "compound_poisson_exp", "--mu", "2",
                                        "--sigma", "0.5", "--lambda", "1", "--eta", "1", "--y", "2"};
    auto closed = base;
    closed.insert(closed.end(), {"--backend", "closed_form"});
    EXPECT_EQ(invoke(closed).code, 2);
    const auto r = invoke(base);
    EXPECT_EQ(r.code, 0) << r.err;
}

TEST(CliConfig, LinePreciseErrors)
{
    const auto dir = scratch_dir("config");
    const auto path = (dir / "bad.json").string();
    std::ofstream(path) << "{\n  \"strategy\": {\n    \"a\": 3,\n    \"b\": 2\n  },\n  \"y\": 1\n}\n";
    const auto r = invoke({"value", "--config", path});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find(path + ":4: strategy.b"), std::string::npos) << r.err;

    std::ofstream(path) << "{\n  \"model\": {\n    \"mu\": 1,\n    \"nu\": 2\n  }\n}\n";
    const auto u = invoke({"value", "--config", path});
    EXPECT_EQ(u.code, 2);
    EXPECT_NE(u.err.find(path + ":4: model.nu: unknown key"), std::string::npos) << u.err;

    std::ofstream(path) << "{\n  \"delta\": \"high\"\n}\n";
    EXPECT_NE(invoke({"value", "--config", path}).err.find(":2: delta: expected a number"), std::string::npos);

    std::ofstream(path) << "{\n  \"delta\": 0.05,\n";
    EXPECT_EQ(invoke({"value", "--config", path}).code, 2);
    EXPECT_EQ(invoke({"value", "--config", (dir / "missing.json").string()}).code, 2);
}

TEST(CliConfig, FlagsOverrideFile)
{
    const auto dir = scratch_dir("override");
    const auto path = (dir / "cfg.json").string();
    std::ofstream(path) << R"({"strategy": {"a": 2, "b": 4}, "y": 3, "delta": 0.05})";
    const auto r = invoke({"value", "--config", path, "--y", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(result_line(r.out).find("region=Upper"), std::string::npos);
}

TEST(CliConfig, SampleConfigsLoad)
{
    for (const auto& entry : std::filesystem::directory_iterator(RATCHET_LEVY_SAMPLES_DIR "/configs")) {
        cli::RunConfig cfg;
        EXPECT_NO_THROW(cli::load_config_file(entry.path().string(), cfg)) << entry.path();
    }
}

TEST(CliSimulate, ByteIdenticalAcrossRunsAndThreads)
{
    const std::vector<std::string> args{"simulate", "--y", "5", "--paths", "600", "--dt", "0.01", "--seed", "42"};
    std::string first;
    for (const char* threads : {"1", "4", "16"}) {
        auto a = args;
        a.insert(a.end(), {"--threads", threads});
        const auto r = invoke(a);
        ASSERT_EQ(r.code, 0) << r.err;
        if (first.empty()) first = r.out;
        EXPECT_EQ(r.out, first);
    }
    EXPECT_NE(first.find("target=DividendNPV mean="), std::string::npos);
    EXPECT_NE(first.find("target=RuinLaplace mean="), std::string::npos);
    EXPECT_NE(first.find(" z="), std::string::npos);
    EXPECT_NE(first.find("censored_fraction="), std::string::npos);
}

TEST(CliSimulate, CoarseStepRejected)
{
    const auto r = invoke({"simulate", "--dt", "0.5", "--paths", "10"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("dt <= 1/(10 gamma)"), std::string::npos) << r.err;
}

TEST(CliSimulate, PerPathCsv)
{
    const auto dir = scratch_dir("paths");
    const auto csv = dir / "paths.csv";
    const auto r = invoke({"simulate", "--paths", "5", "--dt", "0.01", "--paths-csv", csv.string(), "--target", "ruin"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.find("DividendNPV"), std::string::npos);
    const auto text = slurp(csv);
    EXPECT_EQ(text.rfind("path,ruined,censored,tau,", 0), 0u);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 6);
}

TEST(CliSweep, PresetWritesCsvPerPanel)
{
    const auto dir = scratch_dir("sweep");
    const auto r = invoke({"sweep", "--preset", "fig1b", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto text = slurp(dir / "fig1b_y8.csv");
    EXPECT_EQ(text.rfind("a,V,error\n", 0), 0u);
    EXPECT_TRUE(std::filesystem::exists(dir / "fig1b_y2.csv"));
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    double prev = -1.0, last_a = 0.0;
    int rows = 0;
    while (std::getline(in, line)) {
        const auto c = line.find(',');
        last_a = std::stod(line.substr(0, c));
        const double v = std::stod(line.substr(c + 1));
        EXPECT_GE(v, prev);
        prev = v;
        ++rows;
    }
    EXPECT_EQ(rows, 100);
    EXPECT_EQ(last_a, 5.0);
    EXPECT_EQ(text.find('\r'), std::string::npos);
}

TEST(CliSweep, RuinPresetIncreasesInDecisionRate)
{
    const auto dir = scratch_dir("fig6a");
    ASSERT_EQ(invoke({"sweep", "--preset", "fig6a", "--out", dir.string()}).code, 0);
    std::istringstream in(slurp(dir / "fig6a.csv"));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "gamma,L,error");
    double prev = 0.0;
    while (std::getline(in, line)) {
        const double v = std::stod(line.substr(line.find(',') + 1));
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(CliSweep, CustomSweepTagsErrors)
{
    const auto dir = scratch_dir("custom");
    const auto path = (dir / "cfg.json").string();
    std::ofstream(path) << R"({"y": 5, "sweep": {"quantity": "L", "axis": "c2", "lo": 0.5, "hi": 1.5, "n": 3}})";
    const auto r = invoke({"sweep", "--config", path, "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("errors=2"), std::string::npos) << r.out;
    const auto text = slurp(dir / "sweep.csv");
    EXPECT_NE(text.find("1.5,,positive drift"), std::string::npos) << text;
}

TEST(CliSweep, SigmaPresetReportsConcavityFlags)
{
    const auto dir = scratch_dir("fig5");
    const auto r = invoke({"sweep", "--preset", "fig5", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("panel=fig5b rows=79"), std::string::npos);
    EXPECT_NE(r.out.find("interior_argmax=true"), std::string::npos);
    const auto text = slurp(dir / "fig5c.csv");
    EXPECT_EQ(text.rfind("sigma,V,error,concave\n", 0), 0u);
}

TEST(CliOptimize, PeriodicBarrierAndRatchetBarrier)
{
    const auto a = invoke({"optimize", "--y", "8", "--b", "5"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(result_line(a.out).rfind("argmax_a=5 ", 0), 0u) << a.out;
    const auto b = invoke({"optimize", "--optimize", "b", "--y", "5", "--a", "3"});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(result_line(b.out).rfind("b_star=inf b_tilde=10.509", 0), 0u) << b.out;
    EXPECT_EQ(invoke({"optimize", "--optimize", "c"}).code, 2);
    EXPECT_EQ(invoke({"optimize", "--delta", "0"}).code, 2);
}
