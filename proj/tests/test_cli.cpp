#include "cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using fdshock::cli::dispatch;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "fdshock");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    Outcome o;
    o.code = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fdshock_test_cli_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST(Cli, NoArgumentsIsUsageError) {
    const Outcome o = run({});
    EXPECT_EQ(o.code, 1);
    EXPECT_NE(o.out.find("simulate"), std::string::npos);
}

TEST(Cli, Version) {
    const Outcome o = run({"--version"});
    EXPECT_EQ(o.code, 0);
    EXPECT_EQ(o.out.rfind("fdshock ", 0), 0u);
}

TEST(Cli, CaseWritesRunDirectory) {
    const fs::path dir = scratch("case");
    const Outcome o = run({"case", "1", "--t-end", "1", "--n-cells", "200", "-o", dir.string()});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_TRUE(fs::exists(dir / "manifest.json"));
    EXPECT_TRUE(fs::exists(dir / "diagnostics.csv"));
    EXPECT_TRUE(fs::exists(dir / "snapshot_0000.csv"));
    EXPECT_TRUE(fs::exists(dir / "snapshot_0001.csv"));
}

TEST(Cli, ProfileReportsTailRate) {
    const fs::path dir = scratch("profile");
    const Outcome o = run({"profile", "--case", "2", "-o", dir.string()});
    ASSERT_EQ(o.code, 0) << o.err;
    std::ifstream in(dir / "profile.json");
    const nlohmann::json j = nlohmann::json::parse(in);
    EXPECT_NEAR(j["rates"]["right"]["fitted"].get<double>(), -0.5, 0.025);
    EXPECT_EQ(j["shock"]["class"].get<std::string>(), "DegeneratePlus");
    EXPECT_TRUE(fs::exists(dir / "profile.csv"));
}

TEST(Cli, ProfileFromFluxFlag) {
    const fs::path dir = scratch("flux");
    const Outcome o = run({"profile", "--flux", "0,0,0.5", "--u-minus", "2", "--nodes", "1001", "-o", dir.string()});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(run({"profile", "--flux", "0,0,-0.5", "--u-minus", "2", "-o", dir.string()}).code, 1);
}

TEST(Cli, SimulateFromConfigWithOverride) {
    const fs::path dir = scratch("sim");
    fs::create_directories(dir);
    std::ofstream(dir / "c.json") << R"({"case": 3, "n_cells": 200, "t_end": 0.5})";
    const Outcome o = run({"simulate", "-c", (dir / "c.json").string(), "--override", "t_end=0.25", "-o",
                           (dir / "out").string()});
    ASSERT_EQ(o.code, 0) << o.err;
    std::ifstream in(dir / "out" / "manifest.json");
    const nlohmann::json j = nlohmann::json::parse(in);
    EXPECT_EQ(j["config"]["t_end"].get<double>(), 0.25);
}

TEST(Cli, BadConfigIsValidationError) {
    const fs::path dir = scratch("bad");
    fs::create_directories(dir);
    std::ofstream(dir / "c.json") << R"({"case": 1, "n_cells": -5})";
    const Outcome a = run({"simulate", "-c", (dir / "c.json").string(), "-o", (dir / "out").string()});
    EXPECT_EQ(a.code, 1);
    EXPECT_NE(a.err.find("n_cells"), std::string::npos) << a.err;
    EXPECT_EQ(run({"case", "1", "--override", "nonsense=1", "-o", (dir / "o2").string()}).code, 1);
    EXPECT_EQ(run({"case", "7"}).code, 1);
    EXPECT_EQ(run({"simulate", "-c", (dir / "missing.json").string()}).code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
}

TEST(Cli, DiagnoseRecomputesFromSnapshots) {
    const fs::path dir = scratch("diag");
    ASSERT_EQ(run({"case", "1", "--t-end", "1", "--n-cells", "200", "--output-stride", "10", "-o", dir.string()}).code,
              0);
    const Outcome o = run({"diagnose", dir.string()});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_TRUE(fs::exists(dir / "diagnostics_snapshots.csv"));
    EXPECT_EQ(run({"diagnose", (dir / "nowhere").string()}).code, 1);
}

TEST(Cli, VerifySingleCriterion) {
    const Outcome o = run({"verify", "--only", "shock-speeds"});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.err.find("PASS shock-speeds"), std::string::npos) << o.err;
    EXPECT_EQ(run({"verify", "--only", "no-such-criterion"}).code, 1);
}
