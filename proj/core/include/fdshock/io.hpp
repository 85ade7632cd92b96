#pragma once

#include "fdshock/diagnostics.hpp"
#include "fdshock/run.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fdshock {

/// "fdshock <version> (git <rev>)"
std::string version_string();

/// Parses one flat JSON document into a RunSpec. `case`
/// preloads a built-in scenario; every other key overrides it. Each
/// override is "key=value" with the value read as JSON, or as a bare
/// string when it is not valid JSON; overrides win over the document.
/// Unknown keys, type mismatches and constraint violations throw
/// ValidationError with the key path in the message.
RunSpec parse_config(std::string_view text, std::span<const std::string> overrides = {});
RunSpec parse_config_file(const std::filesystem::path& path, std::span<const std::string> overrides = {});

/// Flat JSON echo of every field; parse_config(config_json(s)) == s.
std::string config_json(const RunSpec& spec);

/// Shortest decimal with 17 significant digits.
std::string format_double(double v);

/// Writes rows with a header; an empty row set gives a header-only file.
/// Filesystem errors are thrown as Error with the OS message.
void write_csv(const std::filesystem::path& path, std::span<const std::string> header,
               const std::vector<std::vector<double>>& rows);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Column by name; throws ValidationError when absent.
    std::vector<double> column(std::string_view name) const;
};

/// Throws ValidationError on ragged rows or non-numeric fields.
CsvTable read_csv(const std::filesystem::path& path);

/// Columns z, u, U, u_minus_U where U = U(z + x0 - (s - c) t).
void write_snapshot(const SimState& state, const ProfileTable& profile, const SimConfig& config, double x0,
                    const std::filesystem::path& path);

/// Columns as diagnostics_columns().
void write_record(const DiagnosticsRecord& record, const std::filesystem::path& path);
DiagnosticsRecord read_record(const std::filesystem::path& path);

/// Columns z, U, U_z, U_zz at the table nodes.
void write_profile(const ProfileTable& profile, const std::filesystem::path& path);

struct OutputFile {
    std::string name;
    std::size_t rows = 0;
};

struct RunManifest {
    RunSpec spec;
    ShockData shock;
    double shift_x0 = 0.0;
    std::string version;
    double wall_seconds = 0.0;
    long steps = 0;
    long clamp_count = 0;
    std::vector<OutputFile> files;
    std::vector<double> snapshot_times;
    /// Free-form numeric annotations (e.g. baseline drift thresholds).
    std::vector<std::pair<std::string, double>> notes;
};

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

/// Writes snapshot_NNNN.csv, diagnostics.csv and manifest.json into `dir`
/// (created if needed) and returns the manifest.
RunManifest write_run(const RunSpec& spec, const RunResult& result, const std::filesystem::path& dir,
                      std::vector<std::pair<std::string, double>> notes = {});

}  // namespace fdshock
