#include "cli.hpp"

#include "acceptance.hpp"

#include "fdshock/cases.hpp"
#include "fdshock/diagnostics.hpp"
#include "fdshock/error.hpp"
#include "fdshock/io.hpp"
#include "fdshock/profile.hpp"
#include "fdshock/run.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

namespace fdshock::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Flags shared by `simulate` and `case`; each maps onto one config key.
struct RunFlags {
    std::optional<int> n_cells;
    std::optional<double> t_end;
    std::optional<double> z_left;
    std::optional<double> z_right;
    std::optional<double> cfl_safety;
    std::optional<double> u_floor;
    std::optional<std::string> scheme;
    std::optional<int> output_stride;
    std::optional<double> frame_speed;
    std::optional<double> diagnostics_interval;
    std::vector<std::string> overrides;
    std::string output = "out";

    void attach(CLI::App* app) {
        app->add_option("--n-cells", n_cells, "number of cells");
        app->add_option("--t-end", t_end, "final time");
        app->add_option("--z-left", z_left, "left end of the moving-frame domain");
        app->add_option("--z-right", z_right, "right end of the moving-frame domain");
        app->add_option("--cfl-safety", cfl_safety, "CFL safety factor in (0, 1]");
        app->add_option("--u-floor", u_floor, "positivity floor");
        app->add_option("--scheme", scheme, "imex or explicit");
        app->add_option("--output-stride", output_stride, "steps between snapshots (0: first and last)");
        app->add_option("--frame-speed", frame_speed, "speed of the computational frame (default: shock speed)");
        app->add_option("--diagnostics-interval", diagnostics_interval, "time between diagnostics rows");
        app->add_option("--override", overrides, "key=value, applied after the file and flags")
            ->type_name("KEY=VALUE");
        app->add_option("-o,--output", output, "output directory")->capture_default_str();
    }

    std::vector<std::string> as_overrides() const {
        std::vector<std::string> out;
        auto num = [](double v) { return format_double(v); };
        if (n_cells) out.push_back("n_cells=" + std::to_string(*n_cells));
        if (t_end) out.push_back("t_end=" + num(*t_end));
        if (z_left) out.push_back("z_left=" + num(*z_left));
        if (z_right) out.push_back("z_right=" + num(*z_right));
        if (cfl_safety) out.push_back("cfl_safety=" + num(*cfl_safety));
        if (u_floor) out.push_back("u_floor=" + num(*u_floor));
        if (scheme) out.push_back("scheme=\"" + *scheme + "\"");
        if (output_stride) out.push_back("output_stride=" + std::to_string(*output_stride));
        if (frame_speed) out.push_back("frame_speed=" + num(*frame_speed));
        if (diagnostics_interval) out.push_back("diagnostics_interval=" + num(*diagnostics_interval));
        out.insert(out.end(), overrides.begin(), overrides.end());
        return out;
    }
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError(path.string() + ": cannot open config file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int simulate(const std::string& document, const RunFlags& flags, std::ostream& err) {
    const RunSpec spec = parse_config(document, flags.as_overrides());
    err << "fdshock: running " << (spec.case_id ? "case " + std::to_string(*spec.case_id) : std::string("custom flux"))
        << ", " << spec.config.n_cells << " cells on [" << spec.config.z_left << ", " << spec.config.z_right
        << "], t_end = " << spec.config.t_end << '\n';
    const double report_every = spec.config.t_end / 10.0;
    double next_report = report_every;
    const RunResult result = run_case(spec, [&](const SimState& s, const DiagnosticsRow& row) {
        if (s.t + 1e-12 >= next_report) {
            err << "  t = " << s.t << "  sup_err = " << row.sup_err << "  N = " << row.n_t << '\n';
            next_report += report_every;
        }
    });
    if (result.shift.warning) {
        err << "fdshock: warning: " << *result.shift.warning << '\n';
    }
    const RunManifest m = write_run(spec, result, flags.output);
    err << "fdshock: x0 = " << result.shift.x0 << ", " << result.steps << " steps, " << result.clamp_count
        << " floor clamps, " << m.files.size() << " files in " << flags.output << '\n';
    return kSuccess;
}

struct ProfileArgs {
    std::optional<int> case_id;
    std::string config;
    std::vector<double> flux;
    std::optional<double> u_minus;
    std::optional<int> nodes;
    std::string output = "out";
};

json rate_json(const RateReport& r, double lo, double hi) {
    return {{"fitted", r.fitted},       {"predicted", r.predicted}, {"relative_error", r.relative_error},
            {"n_points", r.n_points},   {"exponential", r.exponential}, {"window", {lo, hi}}};
}

int profile_command(const ProfileArgs& args, std::ostream& err) {
    RunSpec spec;
    if (args.case_id) {
        spec = case_spec(*args.case_id);
    } else if (!args.config.empty()) {
        spec = parse_config(read_file(args.config));
    } else if (!args.flux.empty() && args.u_minus) {
        spec.flux = args.flux;
        spec.u_minus = *args.u_minus;
    } else {
        throw ValidationError("profile: give --case, --config, or both --flux and --u-minus");
    }
    if (args.nodes) {
        spec.profile_options.n_nodes = *args.nodes;
    }
    const FluxSpec flux(spec.flux);
    const ShockData shock = analyze_shock(flux, spec.u_minus);
    if (!shock.valid()) {
        throw ValidationError("profile: the generalized shock condition fails for this flux and u_minus");
    }
    const ProfileTable table = build_profile(shock, flux, spec.profile_options);

    const double r_lo = 50.0;
    const double r_hi = 0.8 * table.z_max();
    const double l_lo = 0.8 * table.z_min();
    const double l_hi = 0.2 * table.z_min();
    const RateReport right = decay_rate_check(table, Side::Right, r_lo, r_hi);
    const RateReport left = decay_rate_check(table, Side::Left, l_lo, l_hi);

    fs::create_directories(args.output);
    write_profile(table, fs::path(args.output) / "profile.csv");
    json j;
    j["version"] = version_string();
    j["flux"] = spec.flux;
    j["shock"] = {{"u_minus", shock.u_minus},     {"u_plus", shock.u_plus},   {"speed", shock.speed},
                  {"speed_exact", shock.speed_exact}, {"class", std::string(to_string(shock.shock_class))},
                  {"k_plus", shock.k_plus},       {"k_minus", shock.k_minus}, {"lambda_minus", shock.lambda_minus}};
    j["nodes"] = table.size();
    j["z_range"] = {table.z_min(), table.z_max()};
    j["limited_nodes"] = table.limited_nodes();
    j["rates"] = {{"right", rate_json(right, r_lo, r_hi)}, {"left", rate_json(left, l_lo, l_hi)}};
    j["derivative_bound"] = {{"right", derivative_bound_constant(table, Side::Right)},
                             {"left", derivative_bound_constant(table, Side::Left)}};
    j["files"] = {{{"name", "profile.csv"}, {"rows", table.size()}}};
    std::ofstream(fs::path(args.output) / "profile.json", std::ios::binary) << j.dump(2) << '\n';

    err << "fdshock: s = " << shock.speed_exact << ", class " << to_string(shock.shock_class) << " (k+ = " << shock.k_plus
        << ", k- = " << shock.k_minus << ")\n";
    err << "  right tail exponent " << right.fitted << " (predicted " << right.predicted << ")\n";
    err << "  left tail " << (left.exponential ? "rate " : "exponent ") << left.fitted << " (predicted "
        << left.predicted << ")\n";
    return kSuccess;
}

int diagnose_command(const std::string& dir, const std::string& output, std::ostream& err) {
    const fs::path base(dir);
    const RunManifest m = read_manifest(base / "manifest.json");
    const FluxSpec flux(m.spec.flux);
    const ShockData shock = analyze_shock(flux, m.spec.u_minus);
    const ProfileTable table = build_profile(shock, flux, m.spec.profile_options);
    DiagnosticsAccumulator acc(m.shift_x0);
    std::size_t k = 0;
    for (const OutputFile& f : m.files) {
        if (f.name.rfind("snapshot_", 0) != 0) {
            continue;
        }
        if (k >= m.snapshot_times.size()) {
            throw ValidationError(dir + ": manifest lists more snapshots than snapshot times");
        }
        const CsvTable csv = read_csv(base / f.name);
        const auto z = csv.column("z");
        const auto u = csv.column("u");
        const auto big_u = csv.column("U");
        acc.add(m.snapshot_times[k], antiderivative_from_values(z, u, big_u, m.shift_x0), table);
        ++k;
    }
    const fs::path out = output.empty() ? base / "diagnostics_snapshots.csv" : fs::path(output);
    write_record(acc.record(), out);
    err << "fdshock: " << k << " snapshots -> " << out.string() << '\n';
    return kSuccess;
}

int verify_command(const AcceptanceOptions& options, std::ostream& err) {
    const auto results = run_acceptance(options, &err);
    bool all = true;
    std::string summary;
    for (const auto& r : results) {
        const std::string line = format_result(r);
        err << line << '\n';
        summary += line + '\n';
        all = all && r.passed;
    }
    if (options.output_dir) {
        fs::create_directories(*options.output_dir);
        std::ofstream(*options.output_dir / "verify.txt", std::ios::binary) << summary;
    }
    return all ? kSuccess : kRuntime;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Shock profiles and stability runs for u_t + f(u)_x = (ln u)_xx", "fdshock"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    ProfileArgs profile_args;
    auto* profile = app.add_subcommand("profile", "tabulate the shock profile and check its tail rates");
    profile->add_option("--case", profile_args.case_id, "built-in case 1, 2 or 3");
    profile->add_option("--config", profile_args.config, "flat JSON config");
    profile->add_option("--flux", profile_args.flux, "flux coefficients, constant term first")->delimiter(',');
    profile->add_option("--u-minus", profile_args.u_minus, "upstream state u- > 0");
    profile->add_option("--nodes", profile_args.nodes, "table nodes");
    profile->add_option("-o,--output", profile_args.output, "output directory")->capture_default_str();

    RunFlags sim_flags;
    std::string sim_config;
    std::optional<int> sim_case;
    auto* sim = app.add_subcommand("simulate", "run from a config file");
    sim->add_option("-c,--config", sim_config, "flat JSON config");
    sim->add_option("--case", sim_case, "start from built-in case 1, 2 or 3");
    sim_flags.attach(sim);

    RunFlags case_flags;
    int case_id = 0;
    auto* case_cmd = app.add_subcommand("case", "run a built-in case");
    case_cmd->add_option("id", case_id, "1, 2 or 3")->required();
    case_flags.attach(case_cmd);

    std::string diag_dir;
    std::string diag_out;
    auto* diag = app.add_subcommand("diagnose", "recompute diagnostics from snapshot CSVs");
    diag->add_option("dir", diag_dir, "run directory with manifest.json")->required();
    diag->add_option("-o,--output", diag_out, "output CSV (default <dir>/diagnostics_snapshots.csv)");

    std::string verify_out;
    std::vector<std::string> verify_only;
    auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
    verify->add_option("-o,--output", verify_out, "write run directories and verify.txt here");
    verify->add_option("--only", verify_only, "criterion ids to run");

    if (argc <= 1) {
        out << app.help();
        return kValidation;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::CallForVersion&) {
        out << version_string() << '\n';
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "fdshock: " << e.what() << '\n';
        err << app.help();
        return kValidation;
    }

    try {
        if (*profile) {
            return profile_command(profile_args, err);
        }
        if (*sim) {
            std::string doc;
            if (!sim_config.empty()) {
                doc = read_file(sim_config);
                if (sim_case) {
                    throw ValidationError("simulate: give either --config or --case, not both");
                }
            } else if (sim_case) {
                doc = "{\"case\": " + std::to_string(*sim_case) + "}";
            } else {
                throw ValidationError("simulate: --config or --case is required");
            }
            return simulate(doc, sim_flags, err);
        }
        if (*case_cmd) {
            return simulate("{\"case\": " + std::to_string(case_id) + "}", case_flags, err);
        }
        if (*diag) {
            return diagnose_command(diag_dir, diag_out, err);
        }
        if (*verify) {
            AcceptanceOptions options;
            if (!verify_out.empty()) {
                options.output_dir = verify_out;
            }
            for (const auto& id : verify_only) {
                const auto& ids = criterion_ids();
                if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
                    throw ValidationError("verify: unknown criterion '" + id + "'");
                }
            }
            options.only = verify_only;
            return verify_command(options, err);
        }
    } catch (const ValidationError& e) {
        err << "fdshock: error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        err << "fdshock: failure: " << e.what() << '\n';
        return kRuntime;
    }
    return kValidation;
}

}  // namespace fdshock::cli
