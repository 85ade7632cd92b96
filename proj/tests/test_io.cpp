#include "fdshock/error.hpp"
#include "fdshock/io.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

using namespace fdshock;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fdshock_test_io_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string error_of(const std::string& text, std::vector<std::string> overrides = {}) {
    try {
        parse_config(text, overrides);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Config, CaseOneDefaults) {
    const RunSpec s = parse_config(R"({"case": 1})");
    ASSERT_TRUE(s.case_id.has_value());
    EXPECT_EQ(*s.case_id, 1);
    EXPECT_EQ(s.flux, (std::vector<double>{0.0, 0.0, 0.5}));
    EXPECT_EQ(s.u_minus, 2.0);
    EXPECT_EQ(s.config.n_cells, 800);
    EXPECT_EQ(s.initial.kind, InitialData::Kind::Case1);
    EXPECT_EQ(s.config.scheme, Scheme::ImexLagged);
    EXPECT_TRUE(s.shift_boundary);
}

TEST(Config, CaseThreeCoefficients) {
    const RunSpec s = parse_config(R"({"case": 3})");
    EXPECT_EQ(s.flux, (std::vector<double>{0.0, -0.5, 2.0, -1.0}));
    EXPECT_EQ(s.u_minus, 1.0);
    EXPECT_EQ(s.initial.kind, InitialData::Kind::Case3);
}

TEST(Config, ExplicitFluxWithoutCase) {
    const RunSpec s = parse_config(
        R"({"flux": [0, 0, 0.5], "u_minus": 2, "z_left": -20, "z_right": 40, "n_cells": 300,
            "initial": "profile", "initial_amplitude": 0.01, "frame_speed": 0.25})");
    EXPECT_FALSE(s.case_id.has_value());
    EXPECT_EQ(s.config.n_cells, 300);
    EXPECT_EQ(s.config.z_left, -20.0);
    EXPECT_EQ(s.initial.amplitude, 0.01);
    ASSERT_TRUE(s.config.frame_speed.has_value());
    EXPECT_EQ(*s.config.frame_speed, 0.25);
}

TEST(Config, UnknownKeyNamesPath) {
    const std::string e = error_of(R"({"case": 1, "n_cels": 10})");
    EXPECT_NE(e.find("config.n_cels"), std::string::npos) << e;
}

TEST(Config, TypeMismatchNamesPath) {
    const std::string e = error_of(R"({"case": 1, "n_cells": "many"})");
    EXPECT_NE(e.find("config.n_cells"), std::string::npos) << e;
    const std::string f = error_of(R"({"case": 1, "flux": [0, "x"]})");
    EXPECT_NE(f.find("config.flux"), std::string::npos) << f;
}

TEST(Config, NonPositiveUpstreamState) {
    const std::string e = error_of(R"({"flux": [0, 0, 0.5], "u_minus": 0})");
    EXPECT_NE(e.find("config.u_minus"), std::string::npos) << e;
    EXPECT_FALSE(error_of(R"({"flux": [0, 0, 0.5], "u_minus": -2})").empty());
}

TEST(Config, RejectsMalformedDocuments) {
    EXPECT_FALSE(error_of("{").empty());
    EXPECT_FALSE(error_of("[1, 2]").empty());
    EXPECT_FALSE(error_of(R"({"case": 4})").empty());
    EXPECT_FALSE(error_of(R"({"case": 1, "scheme": "crank"})").empty());
}

TEST(Config, OverridesWin) {
    const std::vector<std::string> o{"n_cells=1200", "scheme=explicit", "t_end=3.5"};
    const RunSpec s = parse_config(R"({"case": 2, "n_cells": 400})", o);
    EXPECT_EQ(s.config.n_cells, 1200);
    EXPECT_EQ(s.config.scheme, Scheme::ExplicitRk2);
    EXPECT_EQ(s.config.t_end, 3.5);
    EXPECT_FALSE(error_of(R"({"case": 1})", {"bogus=1"}).empty());
    EXPECT_FALSE(error_of(R"({"case": 1})", {"no_equals_sign"}).empty());
}

TEST(Config, JsonRoundTrip) {
    for (int id : {1, 2, 3}) {
        RunSpec s = case_spec(id);
        s.config.cfl_safety = 0.37;
        s.config.frame_speed = 0.1 + 0.2;
        s.diagnostics_interval = 1.0 / 3.0;
        const std::string j = config_json(s);
        const RunSpec back = parse_config(j);
        EXPECT_EQ(config_json(back), j);
        EXPECT_EQ(back.config.cfl_safety, 0.37);
        EXPECT_EQ(*back.config.frame_speed, 0.1 + 0.2);
        EXPECT_EQ(back.diagnostics_interval, 1.0 / 3.0);
    }
}

TEST(Config, TabulatedInitialData) {
    const RunSpec s = parse_config(
        R"({"flux": [0, 0, 0.5], "u_minus": 2, "initial": "tabulated",
            "initial_x": [-1, 0, 1], "initial_u": [2, 1, 0.5]})");
    EXPECT_EQ(s.initial.kind, InitialData::Kind::Tabulated);
    EXPECT_EQ(s.initial.u.size(), 3u);
    EXPECT_EQ(parse_config(config_json(s)).initial.x, s.initial.x);
}

TEST(Format, SeventeenSignificantDigits) {
    EXPECT_EQ(std::stod(format_double(0.1)), 0.1);
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-1e6, 1e6);
    for (int k = 0; k < 1000; ++k) {
        const double v = d(rng) * std::pow(10.0, k % 40 - 20);
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
}

TEST(Csv, BitExactRoundTrip) {
    const fs::path dir = scratch("csv");
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<std::vector<double>> rows;
    for (int r = 0; r < 50; ++r) {
        rows.push_back({d(rng), d(rng) * 1e-300, d(rng) * 1e300, std::numeric_limits<double>::denorm_min()});
    }
    const std::vector<std::string> header{"a", "b", "c", "d"};
    write_csv(dir / "t.csv", header, rows);
    const CsvTable t = read_csv(dir / "t.csv");
    EXPECT_EQ(t.header, header);
    EXPECT_EQ(t.rows, rows);
    EXPECT_EQ(t.column("c")[7], rows[7][2]);
    EXPECT_THROW(t.column("e"), ValidationError);
    const std::string text = slurp(dir / "t.csv");
    EXPECT_EQ(text.find('\r'), std::string::npos);
    EXPECT_EQ(text.back(), '\n');
}

TEST(Csv, EmptyRecordIsHeaderOnly) {
    const fs::path dir = scratch("empty");
    write_record(DiagnosticsRecord{}, dir / "d.csv");
    const std::string text = slurp(dir / "d.csv");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
    EXPECT_EQ(text.rfind("t,sup_err,", 0), 0u);
    EXPECT_TRUE(read_record(dir / "d.csv").rows.empty());
}

TEST(Csv, RejectsRaggedAndNonNumeric) {
    const fs::path dir = scratch("bad");
    {
        std::ofstream(dir / "r.csv") << "a,b\n1,2\n3\n";
        std::ofstream(dir / "n.csv") << "a,b\n1,x\n";
    }
    EXPECT_THROW(read_csv(dir / "r.csv"), ValidationError);
    EXPECT_THROW(read_csv(dir / "n.csv"), ValidationError);
    EXPECT_THROW(read_csv(dir / "missing.csv"), Error);
}

TEST(Csv, UnwritablePathRaisesError) {
    const std::vector<std::string> header{"a"};
    EXPECT_THROW(write_csv("/proc/fdshock/nope.csv", header, {}), Error);
}

TEST(Output, SnapshotColumns) {
    const fs::path dir = scratch("snap");
    RunSpec s = case_spec(1);
    s.config.n_cells = 200;
    s.config.t_end = 0.5;
    const RunResult r = run_case(s);
    const RunManifest m = write_run(s, r, dir);
    const CsvTable t = read_csv(dir / "snapshot_0000.csv");
    EXPECT_EQ(t.header, (std::vector<std::string>{"z", "u", "U", "u_minus_U"}));
    ASSERT_EQ(t.rows.size(), 200u);
    EXPECT_DOUBLE_EQ(t.rows[0][0], s.config.z_left + 0.5 * s.config.dz());
    for (const auto& row : t.rows) {
        EXPECT_EQ(row[3], row[1] - row[2]);
    }
    const DiagnosticsRecord rec = read_record(dir / "diagnostics.csv");
    ASSERT_EQ(rec.rows.size(), r.record.rows.size());
    for (std::size_t k = 0; k < rec.rows.size(); ++k) {
        EXPECT_EQ(row_values(rec.rows[k]), row_values(r.record.rows[k]));
    }
    EXPECT_EQ(m.files.size(), m.snapshot_times.size() + 1);
}

TEST(Output, ProfileColumns) {
    const fs::path dir = scratch("profile");
    const FluxSpec f({0.0, 0.0, 0.5});
    const ProfileTable p = build_profile(analyze_shock(f, 2.0), f);
    write_profile(p, dir / "profile.csv");
    const CsvTable t = read_csv(dir / "profile.csv");
    EXPECT_EQ(t.header, (std::vector<std::string>{"z", "U", "U_z", "U_zz"}));
    EXPECT_EQ(t.rows.size(), p.size());
}

TEST(Manifest, RoundTripAndRerun) {
    const fs::path dir = scratch("manifest");
    RunSpec s = case_spec(2);
    s.config.n_cells = 200;
    s.config.t_end = 0.5;
    s.config.output_stride = 5;
    const RunResult r = run_case(s);
    const RunManifest m = write_run(s, r, dir / "a", {{"drift_sup", 0.125}});
    const RunManifest back = read_manifest(dir / "a" / "manifest.json");
    EXPECT_EQ(config_json(back.spec), config_json(s));
    EXPECT_EQ(back.shift_x0, m.shift_x0);
    EXPECT_EQ(back.steps, m.steps);
    EXPECT_EQ(back.snapshot_times, m.snapshot_times);
    EXPECT_EQ(back.shock.shock_class, ShockClass::DegeneratePlus);
    EXPECT_EQ(back.shock.speed_exact, "2");
    ASSERT_EQ(back.notes.size(), 1u);
    EXPECT_EQ(back.notes[0].second, 0.125);
    ASSERT_EQ(back.files.size(), m.files.size());

    const RunResult again = run_case(back.spec);
    write_run(back.spec, again, dir / "b");
    for (const auto& f : m.files) {
        EXPECT_EQ(slurp(dir / "a" / f.name), slurp(dir / "b" / f.name)) << f.name;
    }
}

TEST(Manifest, VersionString) {
    EXPECT_EQ(version_string().rfind("fdshock ", 0), 0u);
}
