#include "fdshock/io.hpp"

#include "fdshock/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#ifndef FDSHOCK_VERSION
#define FDSHOCK_VERSION "0.0.0"
#endif
#ifndef FDSHOCK_GIT_REV
#define FDSHOCK_GIT_REV "unknown"
#endif

namespace fdshock {

namespace {

using nlohmann::json;

[[noreturn]] void key_error(const std::string& key, const std::string& what) {
    throw ValidationError("config." + key + ": " + what);
}

double get_number(const json& v, const std::string& key) {
    if (!v.is_number()) {
        key_error(key, "expected a number, got " + std::string(v.type_name()));
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        key_error(key, "must be finite");
    }
    return d;
}

int get_int(const json& v, const std::string& key) {
    if (v.is_number_integer()) {
        return v.get<int>();
    }
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::floor(d) == d && std::abs(d) < 2e9) {
            return static_cast<int>(d);
        }
    }
    key_error(key, "expected an integer, got " + std::string(v.type_name()));
}

bool get_bool(const json& v, const std::string& key) {
    if (!v.is_boolean()) {
        key_error(key, "expected true or false, got " + std::string(v.type_name()));
    }
    return v.get<bool>();
}

std::string get_string(const json& v, const std::string& key) {
    if (!v.is_string()) {
        key_error(key, "expected a string, got " + std::string(v.type_name()));
    }
    return v.get<std::string>();
}

std::vector<double> get_numbers(const json& v, const std::string& key) {
    if (!v.is_array()) {
        key_error(key, "expected an array of numbers, got " + std::string(v.type_name()));
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(get_number(v[i], key + "[" + std::to_string(i) + "]"));
    }
    return out;
}

InitialData::Kind initial_kind(const std::string& name, const std::string& key) {
    for (auto k : {InitialData::Kind::Case1, InitialData::Kind::Case2, InitialData::Kind::Case3,
                   InitialData::Kind::Profile, InitialData::Kind::Tabulated}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    key_error(key, "unknown initial data '" + name + "' (case1, case2, case3, profile, tabulated)");
}

Scheme scheme_of(const std::string& name, const std::string& key) {
    if (name == "imex") {
        return Scheme::ImexLagged;
    }
    if (name == "explicit") {
        return Scheme::ExplicitRk2;
    }
    key_error(key, "unknown scheme '" + name + "' (imex, explicit)");
}

json parse_override_value(const std::string& text) {
    json v = json::parse(text, nullptr, false);
    if (v.is_discarded()) {
        return json(text);
    }
    return v;
}

RunSpec spec_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw ValidationError("config: expected a JSON object at the top level");
    }
    RunSpec spec;
    if (doc.contains("case")) {
        spec = case_spec(get_int(doc["case"], "case"));
    } else {
        if (!doc.contains("flux")) {
            key_error("flux", "required when no built-in case is selected");
        }
        if (!doc.contains("u_minus")) {
            key_error("u_minus", "required when no built-in case is selected");
        }
    }

    for (const auto& [key, v] : doc.items()) {
        if (key == "case") {
            continue;
        } else if (key == "flux") {
            spec.flux = get_numbers(v, key);
        } else if (key == "u_minus") {
            spec.u_minus = get_number(v, key);
        } else if (key == "z_left") {
            spec.config.z_left = get_number(v, key);
        } else if (key == "z_right") {
            spec.config.z_right = get_number(v, key);
        } else if (key == "n_cells") {
            spec.config.n_cells = get_int(v, key);
        } else if (key == "t_end") {
            spec.config.t_end = get_number(v, key);
        } else if (key == "cfl_safety") {
            spec.config.cfl_safety = get_number(v, key);
        } else if (key == "u_floor") {
            spec.config.u_floor = get_number(v, key);
        } else if (key == "scheme") {
            spec.config.scheme = scheme_of(get_string(v, key), key);
        } else if (key == "bc") {
            if (get_string(v, key) != "profile_dirichlet") {
                key_error(key, "only 'profile_dirichlet' is supported");
            }
        } else if (key == "output_stride") {
            spec.config.output_stride = get_int(v, key);
        } else if (key == "frame_speed") {
            if (v.is_string() && v.get<std::string>() == "shock") {
                spec.config.frame_speed.reset();
            } else {
                spec.config.frame_speed = get_number(v, key);
            }
        } else if (key == "initial") {
            spec.initial.kind = initial_kind(get_string(v, key), key);
        } else if (key == "initial_shift") {
            spec.initial.shift = get_number(v, key);
        } else if (key == "initial_amplitude") {
            spec.initial.amplitude = get_number(v, key);
        } else if (key == "initial_x") {
            spec.initial.x = get_numbers(v, key);
        } else if (key == "initial_u") {
            spec.initial.u = get_numbers(v, key);
        } else if (key == "diagnostics_interval") {
            spec.diagnostics_interval = get_number(v, key);
        } else if (key == "shift_boundary") {
            spec.shift_boundary = get_bool(v, key);
        } else if (key == "profile_nodes") {
            spec.profile_options.n_nodes = get_int(v, key);
        } else if (key == "profile_u_min") {
            spec.profile_options.u_min = get_number(v, key);
        } else if (key == "profile_deficit_min") {
            spec.profile_options.deficit_min = get_number(v, key);
        } else {
            key_error(key, "unknown key");
        }
    }
    if (!doc.contains("case")) {
        spec.case_id.reset();
    }

    if (spec.flux.empty()) {
        key_error("flux", "must list at least two coefficients");
    }
    if (!(spec.u_minus > 0.0)) {
        key_error("u_minus", "must be > 0");
    }
    if (!(spec.config.z_left < 0.0)) {
        key_error("z_left", "must be < 0");
    }
    if (!(spec.config.z_right > 0.0)) {
        key_error("z_right", "must be > 0");
    }
    if (spec.config.n_cells < 100) {
        key_error("n_cells", "must be >= 100");
    }
    if (!(spec.config.t_end > 0.0)) {
        key_error("t_end", "must be > 0");
    }
    if (!(spec.config.cfl_safety > 0.0 && spec.config.cfl_safety <= 1.0)) {
        key_error("cfl_safety", "must lie in (0, 1]");
    }
    if (spec.config.u_floor < 0.0) {
        key_error("u_floor", "must be > 0 (or 0 for the default)");
    }
    if (spec.config.output_stride < 0) {
        key_error("output_stride", "must be >= 0");
    }
    if (spec.diagnostics_interval < 0.0) {
        key_error("diagnostics_interval", "must be >= 0");
    }
    if (spec.initial.kind == InitialData::Kind::Tabulated) {
        if (spec.initial.x.size() < 2) {
            key_error("initial_x", "tabulated data needs at least two abscissae");
        }
        if (spec.initial.x.size() != spec.initial.u.size()) {
            key_error("initial_u", "must have as many entries as initial_x");
        }
        for (std::size_t i = 1; i < spec.initial.x.size(); ++i) {
            if (!(spec.initial.x[i] > spec.initial.x[i - 1])) {
                key_error("initial_x", "must be strictly increasing");
            }
        }
        for (double u : spec.initial.u) {
            if (u < 0.0) {
                key_error("initial_u", "values must be >= 0");
            }
        }
    }
    try {
        const FluxSpec flux(spec.flux);
        (void)flux;
    } catch (const Error& e) {
        key_error("flux", e.what());
    }
    return spec;
}

json spec_to_json(const RunSpec& spec) {
    json j;
    if (spec.case_id) {
        j["case"] = *spec.case_id;
    }
    j["flux"] = spec.flux;
    j["u_minus"] = spec.u_minus;
    j["z_left"] = spec.config.z_left;
    j["z_right"] = spec.config.z_right;
    j["n_cells"] = spec.config.n_cells;
    j["t_end"] = spec.config.t_end;
    j["cfl_safety"] = spec.config.cfl_safety;
    j["u_floor"] = spec.config.u_floor;
    j["scheme"] = std::string(to_string(spec.config.scheme));
    j["bc"] = "profile_dirichlet";
    j["output_stride"] = spec.config.output_stride;
    if (spec.config.frame_speed) {
        j["frame_speed"] = *spec.config.frame_speed;
    } else {
        j["frame_speed"] = "shock";
    }
    j["initial"] = std::string(to_string(spec.initial.kind));
    j["initial_shift"] = spec.initial.shift;
    j["initial_amplitude"] = spec.initial.amplitude;
    if (spec.initial.kind == InitialData::Kind::Tabulated) {
        j["initial_x"] = spec.initial.x;
        j["initial_u"] = spec.initial.u;
    }
    j["diagnostics_interval"] = spec.diagnostics_interval;
    j["shift_boundary"] = spec.shift_boundary;
    j["profile_nodes"] = spec.profile_options.n_nodes;
    j["profile_u_min"] = spec.profile_options.u_min;
    j["profile_deficit_min"] = spec.profile_options.deficit_min;
    return j;
}

json parse_document(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: malformed JSON: ") + e.what());
    }
}

std::string read_text(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw ValidationError(path.string() + ": no such file");
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(path.string() + ": " + std::strerror(errno));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(path.string() + ": " + std::strerror(errno));
    }
    out << text;
    out.flush();
    if (!out) {
        throw Error(path.string() + ": write failed: " + std::strerror(errno));
    }
}

double parse_double(std::string_view field, const std::filesystem::path& path, std::size_t line) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (!field.empty() && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        std::ostringstream os;
        os << path.string() << ":" << line << ": not a number: '" << field << "'";
        throw ValidationError(os.str());
    }
    return v;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::string version_string() {
    return std::string("fdshock ") + FDSHOCK_VERSION + " (git " + FDSHOCK_GIT_REV + ")";
}

RunSpec parse_config(std::string_view text, std::span<const std::string> overrides) {
    json doc = parse_document(text);
    if (!doc.is_object()) {
        throw ValidationError("config: expected a JSON object at the top level");
    }
    for (const std::string& o : overrides) {
        const std::size_t eq = o.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ValidationError("override '" + o + "': expected key=value");
        }
        doc[o.substr(0, eq)] = parse_override_value(o.substr(eq + 1));
    }
    return spec_from_json(doc);
}

RunSpec parse_config_file(const std::filesystem::path& path, std::span<const std::string> overrides) {
    return parse_config(read_text(path), overrides);
}

std::string config_json(const RunSpec& spec) {
    return spec_to_json(spec).dump(2) + "\n";
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (ec != std::errc()) {
        throw Error("format_double: conversion failed");
    }
    return std::string(buf, ptr);
}

void write_csv(const std::filesystem::path& path, std::span<const std::string> header,
               const std::vector<std::vector<double>>& rows) {
    std::string text;
    for (std::size_t i = 0; i < header.size(); ++i) {
        text += (i ? "," : "") + header[i];
    }
    text += '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size()) {
            throw Error(path.string() + ": row width differs from the header");
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                text += ',';
            }
            text += format_double(row[i]);
        }
        text += '\n';
    }
    write_text(path, text);
}

std::vector<double> CsvTable::column(std::string_view name) const {
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == name) {
            std::vector<double> out;
            out.reserve(rows.size());
            for (const auto& r : rows) {
                out.push_back(r[c]);
            }
            return out;
        }
    }
    throw ValidationError("csv: missing column '" + std::string(name) + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    CsvTable table;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) {
            end = text.size();
        }
        std::string_view line(text.data() + pos, end - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        pos = end + 1;
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto fields = split(line);
        if (table.header.empty()) {
            for (auto f : fields) {
                table.header.emplace_back(f);
            }
            continue;
        }
        if (fields.size() != table.header.size()) {
            std::ostringstream os;
            os << path.string() << ":" << line_no << ": expected " << table.header.size() << " fields, got "
               << fields.size();
            throw ValidationError(os.str());
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (auto f : fields) {
            row.push_back(parse_double(f, path, line_no));
        }
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty()) {
        throw ValidationError(path.string() + ": empty file, no header row");
    }
    return table;
}

void write_snapshot(const SimState& state, const ProfileTable& profile, const SimConfig& config, double x0,
                    const std::filesystem::path& path) {
    static const std::vector<std::string> header{"z", "u", "U", "u_minus_U"};
    const double drift = profile.shock().speed - config.frame_speed_for(profile);
    const double offset = x0 - drift * state.t;
    std::vector<std::vector<double>> rows;
    rows.reserve(state.z.size());
    for (std::size_t i = 0; i < state.z.size(); ++i) {
        const double big_u = profile.eval(state.z[i] + offset);
        rows.push_back({state.z[i], state.u[i], big_u, state.u[i] - big_u});
    }
    write_csv(path, header, rows);
}

void write_record(const DiagnosticsRecord& record, const std::filesystem::path& path) {
    std::vector<std::vector<double>> rows;
    rows.reserve(record.rows.size());
    for (const auto& r : record.rows) {
        rows.push_back(row_values(r));
    }
    write_csv(path, diagnostics_columns(), rows);
}

DiagnosticsRecord read_record(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    if (t.header != diagnostics_columns()) {
        throw ValidationError(path.string() + ": header does not match the diagnostics schema");
    }
    DiagnosticsRecord record;
    for (const auto& r : t.rows) {
        record.rows.push_back(row_from_values(r));
    }
    return record;
}

void write_profile(const ProfileTable& profile, const std::filesystem::path& path) {
    static const std::vector<std::string> header{"z", "U", "U_z", "U_zz"};
    std::vector<std::vector<double>> rows;
    rows.reserve(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const ProfileDerivatives d = profile.derivatives(profile.z()[i]);
        rows.push_back({profile.z()[i], profile.u()[i], profile.u_z()[i], d.u_zz});
    }
    write_csv(path, header, rows);
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
    json j;
    j["version"] = m.version;
    j["config"] = spec_to_json(m.spec);
    json shock;
    shock["u_minus"] = m.shock.u_minus;
    shock["u_plus"] = m.shock.u_plus;
    shock["speed"] = m.shock.speed;
    shock["speed_exact"] = m.shock.speed_exact;
    shock["class"] = std::string(to_string(m.shock.shock_class));
    shock["k_plus"] = m.shock.k_plus;
    shock["k_minus"] = m.shock.k_minus;
    shock["lambda_minus"] = m.shock.lambda_minus;
    j["shock"] = shock;
    j["grid"] = {{"dz", m.spec.config.dz()}, {"n_cells", m.spec.config.n_cells}};
    j["shift_x0"] = m.shift_x0;
    j["wall_seconds"] = m.wall_seconds;
    j["steps"] = m.steps;
    j["clamp_count"] = m.clamp_count;
    j["snapshot_times"] = m.snapshot_times;
    json files = json::array();
    for (const auto& f : m.files) {
        files.push_back({{"name", f.name}, {"rows", f.rows}});
    }
    j["files"] = files;
    json notes = json::object();
    for (const auto& [k, v] : m.notes) {
        notes[k] = v;
    }
    j["notes"] = notes;
    write_text(path, j.dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
    const json j = parse_document(read_text(path));
    RunManifest m;
    try {
        m.version = j.at("version").get<std::string>();
        m.spec = spec_from_json(j.at("config"));
        const json& s = j.at("shock");
        m.shock.u_minus = s.at("u_minus").get<double>();
        m.shock.u_plus = s.at("u_plus").get<double>();
        m.shock.speed = s.at("speed").get<double>();
        m.shock.speed_exact = s.at("speed_exact").get<std::string>();
        m.shock.k_plus = s.at("k_plus").get<int>();
        m.shock.k_minus = s.at("k_minus").get<int>();
        m.shock.lambda_minus = s.at("lambda_minus").get<double>();
        const std::string cls = s.at("class").get<std::string>();
        for (auto c : {ShockClass::Nondegenerate, ShockClass::DegeneratePlus, ShockClass::DegenerateMinus,
                       ShockClass::DegenerateBoth, ShockClass::Invalid}) {
            if (to_string(c) == cls) {
                m.shock.shock_class = c;
            }
        }
        m.shift_x0 = j.at("shift_x0").get<double>();
        m.wall_seconds = j.at("wall_seconds").get<double>();
        m.steps = j.at("steps").get<long>();
        m.clamp_count = j.at("clamp_count").get<long>();
        m.snapshot_times = j.at("snapshot_times").get<std::vector<double>>();
        for (const auto& f : j.at("files")) {
            m.files.push_back({f.at("name").get<std::string>(), f.at("rows").get<std::size_t>()});
        }
        for (const auto& [k, v] : j.at("notes").items()) {
            m.notes.emplace_back(k, v.get<double>());
        }
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": malformed manifest: " + e.what());
    }
    return m;
}

RunManifest write_run(const RunSpec& spec, const RunResult& result, const std::filesystem::path& dir,
                      std::vector<std::pair<std::string, double>> notes) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(dir.string() + ": " + ec.message());
    }
    RunManifest m;
    m.spec = spec;
    m.shock = result.profile->shock();
    m.shift_x0 = result.shift.x0;
    m.version = version_string();
    m.wall_seconds = result.wall_seconds;
    m.steps = result.steps;
    m.clamp_count = result.clamp_count;
    m.notes = std::move(notes);
    for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%04zu.csv", k);
        const SimState& s = result.snapshots[k];
        write_snapshot(s, *result.profile, result.config, result.shift.x0, dir / name);
        m.files.push_back({name, s.z.size()});
        m.snapshot_times.push_back(s.t);
    }
    write_record(result.record, dir / "diagnostics.csv");
    m.files.push_back({"diagnostics.csv", result.record.rows.size()});
    write_manifest(m, dir / "manifest.json");
    return m;
}

}  // namespace fdshock
