#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "ris/io.hpp"

namespace fs = std::filesystem;
using ris::io::json;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + std::string(RIS_CLI_PATH) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    const int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const fs::path& p) { return ris::io::read_text(p); }

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / ("ris_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string d(const std::string& sub = "") const { return (dir / sub).string(); }
    fs::path dir;
};

}  // namespace

TEST_F(Cli, CodeGenBarker) {
    const auto r = run("code gen --family barker --m 13 --out " + d());
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(slurp(dir / "code_barker_m13.json"));
    EXPECT_EQ(j["m"], 13);
    EXPECT_EQ(j["family"], "barker");
    const std::string signs = "+++++--++-+-+";
    ASSERT_EQ(j["phases_rad"].size(), 13u);
    for (int i = 0; i < 13; ++i) EXPECT_EQ(j["phases_rad"][i].get<double>(), signs[i] == '-' ? ris::kPi : 0.0);
    EXPECT_TRUE(fs::exists(dir / "code_barker_m13.manifest.json"));
}

TEST_F(Cli, CodeGenErrors) {
    auto r = run("code gen --family chu --m 16 --q 12 --out " + d());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("gcd"), std::string::npos);
    r = run("code gen --family frank --m 15 --out " + d());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("perfect-square M"), std::string::npos);
    r = run("code gen --family barker --m 6 --out " + d());
    EXPECT_EQ(r.code, 2);
    r = run("code gen --family nope --m 6 --out " + d());
    EXPECT_EQ(r.code, 2);
    r = run("code gen --family barker --out " + d());
    EXPECT_EQ(r.code, 2);
    r = run("code gen --family proposed --m 13 --theta-h 30furlongs --out " + d());
    EXPECT_EQ(r.code, 2);
}

TEST_F(Cli, CodeGenMaxAverageAlternates) {
    ASSERT_EQ(run("code gen --family max-average --m 8 --theta-h 0 --name ma --out " + d()).code, 0);
    const auto j = json::parse(slurp(dir / "ma.json"));
    for (int i = 0; i < 8; ++i) EXPECT_EQ(j["phases_rad"][i].get<double>(), i % 2 ? ris::kPi : 0.0);
}

TEST_F(Cli, CodeGenChuSearchAndAngles) {
    ASSERT_EQ(run("code gen --family chu --m 16 --name c --out " + d()).code, 0);
    EXPECT_EQ(json::parse(slurp(dir / "c.json"))["params"]["q"], 11);
    ASSERT_EQ(run("code gen --family proposed --m 13 --theta-h 30deg --name p --out " + d()).code, 0);
    EXPECT_NEAR(json::parse(slurp(dir / "p.json"))["theta_h_design"].get<double>(), ris::kPi / 6, 1e-15);
}

TEST_F(Cli, EvalOutputs) {
    ASSERT_EQ(run("code gen --family proposed --m 64 --name p64 --out " + d()).code, 0);
    auto r = run("eval --code " + d("p64.json") + " --d 1000 --out " + d("ev"));
    ASSERT_EQ(r.code, 0) << r.out;
    const auto m = json::parse(slurp(dir / "ev" / "metrics.json"));
    EXPECT_NEAR(m["a_min_db"].get<double>(), 14.0971, 0.05);
    const auto prof = slurp(dir / "ev" / "profile.csv");
    EXPECT_EQ(prof.rfind("theta_rad,pdaf_linear,pdaf_db\n", 0), 0u);
    EXPECT_EQ(std::count(prof.begin(), prof.end(), '\n'), 1 + 1001);

    ASSERT_EQ(run("code gen --family barker --m 13 --name b --out " + d()).code, 0);
    ASSERT_EQ(run("eval --code " + d("b.json") + " --m 13 --out " + d("eb")).code, 0);
    std::istringstream acf(slurp(dir / "eb" / "acf.csv"));
    std::string line;
    std::getline(acf, line);
    EXPECT_EQ(line, "lag,re,im");
    int rows = 0;
    while (std::getline(acf, line)) {
        int lag;
        double re, im;
        ASSERT_EQ(std::sscanf(line.c_str(), "%d,%lf,%lf", &lag, &re, &im), 3);
        if (lag != 0) EXPECT_LE(std::abs(re), 1.0);
        EXPECT_EQ(im, 0.0);
        ++rows;
    }
    EXPECT_EQ(rows, 25);
    EXPECT_EQ(run("eval --code " + d("b.json") + " --m 12 --out " + d("eb")).code, 2);
}

TEST_F(Cli, EvalMalformedCodeFile) {
    std::ofstream(dir / "bad.json") << "{\n  \"m\": 2,\n  \"phases_rad\": [0, 1\n}\n";
    auto r = run("eval --code " + d("bad.json") + " --out " + d("x"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("bad.json:4:"), std::string::npos) << r.out;
    std::ofstream(dir / "bad2.json") << R"({"m": 2, "theta_h_design": 0, "spacing_ratio": 0.5, "family": "x"})";
    r = run("eval --code " + d("bad2.json") + " --out " + d("x"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("'phases_rad'"), std::string::npos);
    EXPECT_EQ(run("eval --code " + d("missing.json") + " --out " + d("x")).code, 2);
}

TEST_F(Cli, SimSmokeAndBounds) {
    ASSERT_EQ(run("code gen --family proposed --m 13 --name p --out " + d()).code, 0);
    ASSERT_EQ(run("sim --code " + d("p.json") + " --k 4 --out " + d("s4")).code, 0);
    const auto ecdf = slurp(dir / "s4" / "ecdf.csv");
    EXPECT_EQ(std::count(ecdf.begin(), ecdf.end(), '\n'), 5);
    EXPECT_NE(ecdf.find(",0.25\n"), std::string::npos);
    EXPECT_NE(ecdf.find(",1\n"), std::string::npos);

    ASSERT_EQ(run("sim --code " + d("p.json") + " --preset prop1 --bounds --out " + d("b")).code, 0);
    const auto b = json::parse(slurp(dir / "b" / "bounds.json"));
    const auto se = json::parse(slurp(dir / "b" / "se_report.json"));
    EXPECT_LE(b["lower"].get<double>(), se["s_mean"].get<double>());
    EXPECT_LE(se["s_mean"].get<double>(), b["upper"].get<double>());
    EXPECT_TRUE(b["sandwich_holds"].get<bool>());
    EXPECT_TRUE(b["scenario_is_half_ring"].get<bool>());
    EXPECT_FALSE(fs::exists(dir / "s4" / "bounds.json"));
}

TEST_F(Cli, SimPaperMeanAndScenarioFile) {
    ASSERT_EQ(run("code gen --family proposed --m 13 --name p --out " + d()).code, 0);
    ASSERT_EQ(run("sim --code " + d("p.json") + " --out " + d("s")).code, 0);
    const auto se = json::parse(slurp(dir / "s" / "se_report.json"));
    const double lo = se["ci95"][0].get<double>(), hi = se["ci95"][1].get<double>();
    EXPECT_LE(lo, 3.1530 + 0.0146);
    EXPECT_GE(hi, 3.1530 - 0.0146);

    std::ofstream(dir / "sc.cfg") << "preset = prop1\nue_count = 100\ntheta_max = 45deg\n";
    ASSERT_EQ(run("sim --code " + d("p.json") + " --scenario " + d("sc.cfg") + " --seed 4 --out " + d("f")).code, 0);
    const auto sf = json::parse(slurp(dir / "f" / "se_report.json"));
    EXPECT_EQ(sf["sample_count"], 100);
    EXPECT_EQ(sf["scenario"]["seed"], 4);
    EXPECT_NEAR(sf["scenario"]["theta_max"].get<double>(), ris::kPi / 4, 1e-15);
    EXPECT_EQ(sf["scenario"]["theta_min"].get<double>(), -ris::kHalfPi);
}

TEST_F(Cli, SimScenarioErrors) {
    ASSERT_EQ(run("code gen --family proposed --m 13 --name p --out " + d()).code, 0);
    EXPECT_EQ(run("sim --code " + d("p.json") + " --r-min 120 --out " + d("s")).code, 2);
    EXPECT_EQ(run("sim --code " + d("p.json") + " --k 1 --out " + d("s")).code, 2);
    EXPECT_EQ(run("sim --code " + d("p.json") + " --theta-max 100deg --out " + d("s")).code, 2);
    EXPECT_EQ(run("sim --code " + d("p.json") + " --preset moon --out " + d("s")).code, 2);
    std::ofstream(dir / "bad.cfg") << "ue_count = 10\nwat = 1\n";
    const auto r = run("sim --code " + d("p.json") + " --scenario " + d("bad.cfg") + " --out " + d("s"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("bad.cfg:2"), std::string::npos);
}

TEST_F(Cli, OptimizeIsReproducibleAndReplayable) {
    const std::string args = "optimize --m 8 --pop 60,80 --gens 15 --runs 2 --seed 7 --quiet";
    ASSERT_EQ(run(args + " --out " + d("a")).code, 0);
    ASSERT_EQ(run(args + " --threads 3 --out " + d("b")).code, 0);
    ASSERT_EQ(run("replay --manifest " + d("a/manifest.json") + " --out " + d("c")).code, 0);
    for (const char* f : {"best_code.json", "runs.json", "trace.csv"}) {
        EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
        EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "c" / f)) << f;
    }
    const auto runs = json::parse(slurp(dir / "a" / "runs.json"));
    EXPECT_EQ(runs["runs"].size(), 4u);
    const auto trace = slurp(dir / "a" / "trace.csv");
    EXPECT_EQ(trace.rfind("generation,pop60_run0,pop60_run1,pop80_run0,pop80_run1\n", 0), 0u);
    EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 16);
    const auto man = json::parse(slurp(dir / "a" / "manifest.json"));
    EXPECT_EQ(man["command"], "optimize");
    EXPECT_EQ(man["config"]["ga"]["seed"], 7);
    EXPECT_EQ(man["outputs"].size(), 3u);
    EXPECT_FALSE(man["timestamp"].get<std::string>().empty());
    EXPECT_FALSE(man["tool_version"].get<std::string>().empty());
}

TEST_F(Cli, OptimizeRejectsBadHyperparameters) {
    EXPECT_EQ(run("optimize --m 8 --pop 61 --gens 2 --out " + d()).code, 2);
    EXPECT_EQ(run("optimize --m 8 --pop 60 --gens 0 --out " + d()).code, 2);
    EXPECT_EQ(run("optimize --m 8 --pop 60 --mutation-prob 2 --out " + d()).code, 2);
    EXPECT_EQ(run("optimize --m 8 --pop 8000:1000:1000 --out " + d()).code, 2);
    EXPECT_EQ(run("optimize --m 1 --pop 60 --out " + d()).code, 2);
}

TEST_F(Cli, ReplayStochasticCommands) {
    ASSERT_EQ(run("code gen --family random-best --m 16 --seed 3 --name rb --out " + d()).code, 0);
    ASSERT_EQ(run("replay --manifest " + d("rb.manifest.json") + " --out " + d("r")).code, 0);
    EXPECT_EQ(slurp(dir / "rb.json"), slurp(dir / "r" / "rb.json"));
    ASSERT_EQ(run("sim --code " + d("rb.json") + " --k 500 --seed 11 --preset prop1 --bounds --out " + d("s")).code, 0);
    ASSERT_EQ(run("replay --manifest " + d("s/manifest.json") + " --out " + d("s2")).code, 0);
    for (const char* f : {"se_report.json", "ecdf.csv", "bounds.json"}) EXPECT_EQ(slurp(dir / "s" / f), slurp(dir / "s2" / f)) << f;
    std::ofstream(dir / "junk.json") << "{\"command\": \"dance\", \"config\": {}}";
    EXPECT_EQ(run("replay --manifest " + d("junk.json")).code, 2);
}

TEST_F(Cli, ReproduceTables) {
    auto r = run("reproduce --table 1 --out " + d());
    EXPECT_EQ(r.code, 0) << r.out;
    auto t1 = slurp(dir / "table1.csv");
    EXPECT_EQ(std::count(t1.begin(), t1.end(), '\n'), 1 + 9);
    EXPECT_EQ(t1.find("FAIL"), std::string::npos);
    r = run("reproduce --table 3 --out " + d());
    EXPECT_EQ(r.code, 0) << r.out;
    auto t3 = slurp(dir / "table3.csv");
    std::size_t pass = 0, pos = 0;
    while ((pos = t3.find(",pass", pos)) != std::string::npos) ++pass, ++pos;
    EXPECT_EQ(pass, 24u);
    EXPECT_EQ(t3.find("FAIL"), std::string::npos);
    EXPECT_EQ(run("reproduce --table 2 --out " + d()).code, 2);
}

TEST_F(Cli, DefaultOutputDirectoryFromEnvironment) {
    ASSERT_EQ(run("code gen --family frank --m 16", "RIS_OUT_DIR=" + d("envout")).code, 0);
    EXPECT_TRUE(fs::exists(dir / "envout" / "code_frank_m16.json"));
}
