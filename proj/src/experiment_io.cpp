#include "pinchopt/experiment_io.hpp"

#include <cerrno>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pinchopt {

namespace {

[[noreturn]] void config_error(const std::string& msg) {
    throw ValidationError("config: " + msg);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_double_value(std::string_view key, std::string_view value) {
    const std::string v(value);
    errno = 0;
    char* end = nullptr;
    const double parsed = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE) {
        config_error("invalid number for key '" + std::string(key) + "': '" + v + "'");
    }
    return parsed;
}

long long parse_int_value(std::string_view key, std::string_view value) {
    const std::string v(value);
    errno = 0;
    char* end = nullptr;
    const long long parsed = std::strtoll(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE) {
        config_error("invalid integer for key '" + std::string(key) + "': '" + v + "'");
    }
    return parsed;
}

std::uint64_t parse_u64_value(std::string_view key, std::string_view value) {
    const std::string v(value);
    errno = 0;
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || v.empty() || v.front() == '-' || errno == ERANGE) {
        config_error("invalid unsigned integer for key '" + std::string(key) + "': '" + v +
                     "'");
    }
    return parsed;
}

bool parse_bool_value(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    config_error("invalid boolean for key '" + std::string(key) + "': '" +
                 std::string(value) + "' (expected true/false/1/0)");
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(trim(s.substr(start)));
            break;
        }
        parts.push_back(trim(s.substr(start, pos - start)));
        start = pos + 1;
    }
    return parts;
}

std::vector<double> parse_double_list(std::string_view key, std::string_view value) {
    std::vector<double> out;
    for (std::string_view part : split(value, ',')) {
        if (part.empty()) {
            config_error("empty entry in list for key '" + std::string(key) + "'");
        }
        out.push_back(parse_double_value(key, part));
    }
    if (out.empty()) config_error("empty list for key '" + std::string(key) + "'");
    return out;
}

void require_positive(std::string_view key, double v) {
    if (!(v > 0.0)) {
        config_error(std::string(key) + " must be > 0 (got " + std::to_string(v) + ")");
    }
}

std::string fmt_e17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17e", v);
    return buf;
}

} // namespace

std::string_view preset_name(ExperimentPreset preset) {
    switch (preset) {
        case ExperimentPreset::Fig2: return "fig2";
        case ExperimentPreset::Fig3: return "fig3";
        case ExperimentPreset::Fig4: return "fig4";
        case ExperimentPreset::Custom: return "custom";
    }
    return "unknown";
}

ExperimentPreset preset_from_name(std::string_view name) {
    if (name == "fig2") return ExperimentPreset::Fig2;
    if (name == "fig3") return ExperimentPreset::Fig3;
    if (name == "fig4") return ExperimentPreset::Fig4;
    if (name == "custom") return ExperimentPreset::Custom;
    throw ValidationError("unknown experiment preset: '" + std::string(name) + "'");
}

ExperimentSpec make_preset_spec(ExperimentPreset preset) {
    ExperimentSpec spec; // defaults are the Fig2 grid
    switch (preset) {
        case ExperimentPreset::Fig2:
        case ExperimentPreset::Custom:
            break;
        case ExperimentPreset::Fig3:
            spec.sweep_kind = SweepKind::FixedPowerDbm;
            spec.sweep_values = {0.0, 5.0, 10.0, 15.0, 20.0};
            break;
        case ExperimentPreset::Fig4:
            spec.sweep_kind = SweepKind::AreaLengthM;
            spec.sweep_values = {40.0, 80.0, 120.0, 160.0};
            break;
    }
    return spec;
}

ParsedConfig parse_config_text(std::string_view text, ExperimentPreset preset) {
    ParsedConfig parsed;
    parsed.spec = make_preset_spec(preset);
    ExperimentSpec& spec = parsed.spec;

    std::optional<std::string> sweep_param;
    std::optional<std::vector<double>> sweep_values;
    std::optional<std::vector<std::string>> scheme_names;
    std::optional<double> exhaustive_step;
    std::optional<std::vector<UserPosition>> user_positions;
    bool saw_waveguide_length = false;
    bool saw_couple = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = eol == std::string_view::npos
                                    ? text.substr(pos)
                                    : text.substr(pos, eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            config_error("line " + std::to_string(line_no) +
                         ": expected 'key = value', got '" + std::string(line) + "'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) config_error("line " + std::to_string(line_no) + ": empty key");
        if (value.empty()) config_error("empty value for key '" + key + "'");

        if (key == "sweep_param") {
            sweep_param = std::string(value);
        } else if (key == "sweep_values") {
            sweep_values = parse_double_list(key, value);
        } else if (key == "trials") {
            const long long v = parse_int_value(key, value);
            if (v < 1) config_error("trials must be >= 1 (got " + std::to_string(v) + ")");
            spec.trials = static_cast<int>(v);
        } else if (key == "n_users") {
            const long long v = parse_int_value(key, value);
            if (v < 1) config_error("n_users must be >= 1 (got " + std::to_string(v) + ")");
            spec.n_users = static_cast<int>(v);
        } else if (key == "master_seed") {
            spec.master_seed = parse_u64_value(key, value);
        } else if (key == "max_power_dbm") {
            spec.max_power_dbm = parse_double_value(key, value);
        } else if (key == "schemes") {
            scheme_names = std::vector<std::string>{};
            for (std::string_view part : split(value, ',')) {
                if (part.empty()) config_error("empty entry in list for key 'schemes'");
                scheme_names->emplace_back(part);
            }
        } else if (key == "exhaustive_step_m") {
            const double v = parse_double_value(key, value);
            require_positive(key, v);
            exhaustive_step = v;
        } else if (key == "carrier_frequency_ghz") {
            const double v = parse_double_value(key, value);
            require_positive(key, v);
            spec.base.carrier_frequency_hz = v * 1e9;
        } else if (key == "antenna_height_m") {
            const double v = parse_double_value(key, value);
            require_positive(key, v);
            spec.base.antenna_height_m = v;
        } else if (key == "area_x_m") {
            const double v = parse_double_value(key, value);
            require_positive(key, v);
            spec.base.area_x_m = v;
        } else if (key == "area_y_m") {
            const double v = parse_double_value(key, value);
            require_positive(key, v);
            spec.base.area_y_m = v;
        } else if (key == "waveguide_length_m") {
            const double v = parse_double_value(key, value);
            require_positive(key, v);
            spec.base.waveguide_length_m = v;
            saw_waveguide_length = true;
        } else if (key == "couple_waveguide_to_area") {
            spec.couple_waveguide_to_area = parse_bool_value(key, value);
            saw_couple = true;
        } else if (key == "noise_power_dbm") {
            spec.base.noise_power_w = dbm_to_watts(parse_double_value(key, value));
        } else if (key == "fixed_power_dbm") {
            spec.base.fixed_power_w = dbm_to_watts(parse_double_value(key, value));
        } else if (key == "dinkelbach_tolerance") {
            const double v = parse_double_value(key, value);
            require_positive(key, v);
            spec.ao.dinkelbach.tolerance = v;
        } else if (key == "dinkelbach_max_iterations") {
            const long long v = parse_int_value(key, value);
            if (v < 1) config_error("dinkelbach_max_iterations must be >= 1");
            spec.ao.dinkelbach.max_iterations = static_cast<int>(v);
        } else if (key == "dinkelbach_warm_start") {
            spec.ao.dinkelbach.warm_start = parse_bool_value(key, value);
        } else if (key == "pso_swarm_size") {
            const long long v = parse_int_value(key, value);
            if (v < 1) config_error("pso_swarm_size must be >= 1");
            spec.ao.pso.swarm_size = static_cast<int>(v);
        } else if (key == "pso_max_iterations") {
            const long long v = parse_int_value(key, value);
            if (v < 1) config_error("pso_max_iterations must be >= 1");
            spec.ao.pso.max_iterations = static_cast<int>(v);
        } else if (key == "pso_inertia_weight") {
            spec.ao.pso.inertia_weight = parse_double_value(key, value);
        } else if (key == "pso_cognitive_coeff") {
            spec.ao.pso.cognitive_coeff = parse_double_value(key, value);
        } else if (key == "pso_social_coeff") {
            spec.ao.pso.social_coeff = parse_double_value(key, value);
        } else if (key == "pso_velocity_clamp_fraction") {
            const double v = parse_double_value(key, value);
            require_positive(key, v);
            spec.ao.pso.velocity_clamp_fraction = v;
        } else if (key == "pso_stall_tolerance") {
            const double v = parse_double_value(key, value);
            require_positive(key, v);
            spec.ao.pso.stall_tolerance = v;
        } else if (key == "pso_stall_iterations") {
            const long long v = parse_int_value(key, value);
            if (v < 1) config_error("pso_stall_iterations must be >= 1");
            spec.ao.pso.stall_iterations = static_cast<int>(v);
        } else if (key == "ao_max_outer_iterations") {
            const long long v = parse_int_value(key, value);
            if (v < 1) config_error("ao_max_outer_iterations must be >= 1");
            spec.ao.max_outer_iterations = static_cast<int>(v);
        } else if (key == "ao_ee_improvement_tolerance") {
            const double v = parse_double_value(key, value);
            require_positive(key, v);
            spec.ao.ee_improvement_tolerance = v;
        } else if (key == "user_positions") {
            std::vector<UserPosition> users;
            for (std::string_view pair : split(value, ';')) {
                if (pair.empty()) continue;
                const std::size_t colon = pair.find(':');
                if (colon == std::string_view::npos) {
                    config_error("invalid entry for key 'user_positions': '" +
                                 std::string(pair) + "' (expected x:y)");
                }
                UserPosition p;
                p.x_m = parse_double_value(key, trim(pair.substr(0, colon)));
                p.y_m = parse_double_value(key, trim(pair.substr(colon + 1)));
                users.push_back(p);
            }
            if (users.empty()) config_error("empty list for key 'user_positions'");
            user_positions = std::move(users);
        } else {
            config_error("unknown key '" + key + "'");
        }
    }

    if (sweep_param) {
        if (*sweep_param == "max_power_dbm") {
            spec.sweep_kind = SweepKind::MaxPowerDbm;
        } else if (*sweep_param == "fixed_power_dbm") {
            spec.sweep_kind = SweepKind::FixedPowerDbm;
        } else if (*sweep_param == "area_length_m") {
            spec.sweep_kind = SweepKind::AreaLengthM;
        } else {
            config_error("invalid value for key 'sweep_param': '" + *sweep_param +
                         "' (expected max_power_dbm, fixed_power_dbm, or area_length_m)");
        }
        // When the sweep axis changes, the preset's grid is meaningless.
        if (!sweep_values) {
            config_error("sweep_param requires sweep_values in the same config");
        }
    }
    if (sweep_values) {
        for (std::size_t i = 1; i < sweep_values->size(); ++i) {
            if (!((*sweep_values)[i] > (*sweep_values)[i - 1])) {
                config_error("sweep_values must be strictly increasing");
            }
        }
        spec.sweep_values = *sweep_values;
    }
    if (scheme_names) {
        spec.schemes.clear();
        for (const std::string& name : *scheme_names) {
            const std::optional<SchemeKind> kind = scheme_from_name(name);
            if (!kind) {
                config_error("unknown scheme '" + name + "' for key 'schemes'");
            }
            Scheme s;
            s.kind = *kind;
            spec.schemes.push_back(s);
        }
    }
    if (exhaustive_step) {
        for (Scheme& s : spec.schemes) s.exhaustive_step_m = *exhaustive_step;
    }
    // An explicit waveguide length decouples L from the area sweep unless the
    // coupling flag itself was set.
    if (saw_waveguide_length && !saw_couple) spec.couple_waveguide_to_area = false;
    if (!saw_waveguide_length && spec.couple_waveguide_to_area) {
        spec.base.waveguide_length_m = spec.base.area_x_m;
    }

    if (user_positions) {
        UserSet users;
        users.positions = *user_positions;
        users.power_caps_w.assign(users.positions.size(),
                                  dbm_to_watts(spec.max_power_dbm));
        parsed.solve.explicit_users = std::move(users);
    }

    try {
        validate_experiment_spec(spec);
        if (parsed.solve.explicit_users) {
            validate_users(*parsed.solve.explicit_users, spec.base);
        }
    } catch (const ValidationError& e) {
        config_error(e.what());
    }
    return parsed;
}

ParsedConfig parse_config(const std::filesystem::path& path, ExperimentPreset preset) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("config: cannot open file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), preset);
}

std::string results_csv_text(const SweepResult& result) {
    std::string out = "sweep_param,sweep_value,scheme,ee_mean,ee_std,trials,flagged\n";
    const std::string param(sweep_kind_name(result.sweep_kind));
    for (const SweepCell& cell : result.cells) {
        out += param;
        out += ',';
        out += fmt_e17(cell.sweep_value);
        out += ',';
        out += std::string(scheme_name(cell.scheme));
        out += ',';
        out += fmt_e17(cell.ee_mean);
        out += ',';
        out += fmt_e17(cell.ee_std);
        out += ',';
        out += std::to_string(cell.trials);
        out += ',';
        out += std::to_string(cell.flagged);
        out += '\n';
    }
    return out;
}

std::string manifest_text(const SweepResult& result) {
    char buf[96];
    std::string out = "version=";
    out += std::string(kLibraryVersion);
    out += '\n';
    std::snprintf(buf, sizeof(buf), "spec_hash=%016" PRIx64 "\n", result.spec_hash);
    out += buf;
    std::snprintf(buf, sizeof(buf), "master_seed=%" PRIu64 "\n", result.master_seed);
    out += buf;
    return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("io: cannot open '" + path.string() + "' for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
        throw std::runtime_error("io: failed while writing '" + path.string() + "'");
    }
}

} // namespace

EmittedFiles emit_results(const SweepResult& result, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("io: cannot create directory '" + dir.string() +
                                 "': " + ec.message());
    }
    EmittedFiles files;
    files.csv_path = dir / "results.csv";
    files.manifest_path = dir / "manifest.txt";
    write_file(files.csv_path, results_csv_text(result));
    write_file(files.manifest_path, manifest_text(result));
    return files;
}

std::vector<CsvRow> read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("io: cannot open '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("io: empty results file '" + path.string() + "'");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "sweep_param,sweep_value,scheme,ee_mean,ee_std,trials,flagged") {
        throw std::runtime_error("io: unexpected CSV header in '" + path.string() + "'");
    }
    std::vector<CsvRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string_view> fields = split(line, ',');
        if (fields.size() != 7) {
            throw std::runtime_error("io: malformed row at line " +
                                     std::to_string(line_no) + " in '" + path.string() +
                                     "'");
        }
        CsvRow row;
        row.sweep_param = std::string(fields[0]);
        row.sweep_value = parse_double_value("sweep_value", fields[1]);
        row.scheme = std::string(fields[2]);
        row.ee_mean = parse_double_value("ee_mean", fields[3]);
        row.ee_std = parse_double_value("ee_std", fields[4]);
        row.trials = static_cast<int>(parse_int_value("trials", fields[5]));
        row.flagged = static_cast<int>(parse_int_value("flagged", fields[6]));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace pinchopt
