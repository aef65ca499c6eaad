// Command-line front end: single solves or full Monte Carlo sweeps, with CSV
// results and a provenance manifest written to an output directory.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pinchopt/experiment_io.hpp"

namespace {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel parse_log_level(const std::string& name) {
    if (name == "error") return LogLevel::Error;
    if (name == "info") return LogLevel::Info;
    return LogLevel::Debug;
}

int run_experiment_mode(const pinchopt::ExperimentSpec& spec, const std::string& out_dir,
                        LogLevel log) {
    using namespace pinchopt;
    const SweepProgressFn progress = [log](std::size_t idx, std::size_t count,
                                           double value) {
        if (log >= LogLevel::Info) {
            std::fprintf(stderr, "[%zu/%zu] sweep value %g\n", idx + 1, count, value);
        }
    };
    const SweepResult result = run_experiment(spec, 0, progress);
    const EmittedFiles files = emit_results(result, out_dir);
    if (log >= LogLevel::Info) {
        std::fprintf(stderr, "wrote %s and %s\n", files.csv_path.string().c_str(),
                     files.manifest_path.string().c_str());
    }

    std::printf("%-16s %12s %-16s %22s %22s %8s\n", "sweep_param", "sweep_value",
                "scheme", "ee_mean", "ee_std", "flagged");
    const std::string param(sweep_kind_name(result.sweep_kind));
    for (const SweepCell& cell : result.cells) {
        std::printf("%-16s %12g %-16s %22.15e %22.15e %8d\n", param.c_str(),
                    cell.sweep_value, std::string(scheme_name(cell.scheme)).c_str(),
                    cell.ee_mean, cell.ee_std, cell.flagged);
    }
    return 0;
}

int run_solve_mode(const pinchopt::ParsedConfig& parsed, const std::string& out_dir,
                   LogLevel log) {
    using namespace pinchopt;
    const ExperimentSpec& spec = parsed.spec;

    UserSet users;
    if (parsed.solve.explicit_users) {
        users = *parsed.solve.explicit_users;
    } else {
        SplitMix64 rng(trial_stream_seed(spec.master_seed, 0));
        users = generate_users(spec.base, spec.n_users, dbm_to_watts(spec.max_power_dbm),
                               rng);
    }
    if (log >= LogLevel::Info) {
        std::fprintf(stderr, "solving %zu scheme(s) on a %zu-user drop\n",
                     spec.schemes.size(), users.positions.size());
    }

    std::string csv =
        "scheme,ee_bits_per_joule,antenna_x_m,sum_rate_bits_per_s_per_hz,"
        "total_power_w,outer_iterations,flagged\n";
    std::printf("%-16s %22s %14s %14s %14s %8s %8s\n", "scheme", "ee_bits_per_joule",
                "antenna_x_m", "sum_rate", "total_power_w", "outer", "flagged");
    bool any_flagged = false;
    for (const Scheme& scheme : spec.schemes) {
        AoConfig cfg = spec.ao;
        cfg.pso.rng_seed = scheme_stream_seed(spec.master_seed, scheme.kind, 0);
        const EESolution sol = solve_scheme(scheme, spec.base, users, cfg);
        any_flagged = any_flagged || sol.flagged;
        const std::string name(scheme_name(scheme.kind));
        char row[256];
        std::snprintf(row, sizeof(row), "%s,%.17e,%.17e,%.17e,%.17e,%d,%d\n",
                      name.c_str(), sol.ee_bits_per_joule, sol.antenna.x_m,
                      sol.sum_rate_bits_per_s_hz, sol.total_power_w,
                      sol.outer_iterations, sol.flagged ? 1 : 0);
        csv += row;
        std::printf("%-16s %22.15e %14.6f %14.6f %14.6e %8d %8d\n", name.c_str(),
                    sol.ee_bits_per_joule, sol.antenna.x_m, sol.sum_rate_bits_per_s_hz,
                    sol.total_power_w, sol.outer_iterations, sol.flagged ? 1 : 0);
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error("io: cannot create directory '" + out_dir +
                                 "': " + ec.message());
    }
    const std::filesystem::path csv_path = std::filesystem::path(out_dir) / "solve.csv";
    {
        std::FILE* f = std::fopen(csv_path.string().c_str(), "wb");
        if (!f) throw std::runtime_error("io: cannot open '" + csv_path.string() + "'");
        std::fwrite(csv.data(), 1, csv.size(), f);
        std::fclose(f);
    }
    SweepResult provenance;
    provenance.master_seed = spec.master_seed;
    provenance.spec_hash = hash_spec(spec);
    const std::filesystem::path manifest_path =
        std::filesystem::path(out_dir) / "manifest.txt";
    {
        const std::string text = manifest_text(provenance);
        std::FILE* f = std::fopen(manifest_path.string().c_str(), "wb");
        if (!f) {
            throw std::runtime_error("io: cannot open '" + manifest_path.string() + "'");
        }
        std::fwrite(text.data(), 1, text.size(), f);
        std::fclose(f);
    }
    if (log >= LogLevel::Info) {
        std::fprintf(stderr, "wrote %s and %s\n", csv_path.string().c_str(),
                     manifest_path.string().c_str());
    }
    if (any_flagged) {
        std::fprintf(stderr, "warning: at least one solve was flagged\n");
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-efficiency optimizer for a waveguide-mounted movable antenna "
                 "serving NOMA uplink users"};
    app.set_help_flag("--help", "Print this help message and exit");

    std::string mode = "experiment";
    std::string experiment = "fig2";
    std::string config_path;
    std::string out_dir = "out";
    std::string log_level = "info";
    std::optional<std::uint64_t> seed_override;
    std::optional<int> trials_override;

    app.add_option("--mode", mode, "Run mode")
        ->check(CLI::IsMember({"solve", "experiment"}));
    app.add_option("--experiment", experiment, "Sweep preset")
        ->check(CLI::IsMember({"fig2", "fig3", "fig4", "custom"}));
    app.add_option("--config", config_path, "Flat key=value configuration file");
    app.add_option("--out", out_dir, "Output directory for results.csv/manifest.txt");
    app.add_option("--seed", seed_override, "Master seed override");
    app.add_option("--trials", trials_override, "Monte Carlo trial count override");
    app.add_option("--log-level", log_level, "Verbosity of stderr progress output")
        ->check(CLI::IsMember({"error", "info", "debug"}));

    CLI11_PARSE(app, argc, argv);

    const LogLevel log = parse_log_level(log_level);
    try {
        const pinchopt::ExperimentPreset preset = pinchopt::preset_from_name(experiment);
        pinchopt::ParsedConfig parsed =
            config_path.empty() ? pinchopt::parse_config_text("", preset)
                                : pinchopt::parse_config(config_path, preset);
        if (seed_override) parsed.spec.master_seed = *seed_override;
        if (trials_override) {
            if (*trials_override < 1) {
                throw pinchopt::ValidationError("--trials must be >= 1");
            }
            parsed.spec.trials = *trials_override;
        }
        if (log >= LogLevel::Debug) {
            std::fprintf(stderr, "--- effective spec ---\n%s----------------------\n",
                         pinchopt::canonical_spec_text(parsed.spec).c_str());
        }
        if (mode == "solve") return run_solve_mode(parsed, out_dir, log);
        return run_experiment_mode(parsed.spec, out_dir, log);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
