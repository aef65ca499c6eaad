#include "pinchopt/mc_harness.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pinchopt {

std::string_view sweep_kind_name(SweepKind kind) {
    switch (kind) {
        case SweepKind::MaxPowerDbm: return "max_power_dbm";
        case SweepKind::FixedPowerDbm: return "fixed_power_dbm";
        case SweepKind::AreaLengthM: return "area_length_m";
    }
    return "unknown";
}

void validate_experiment_spec(const ExperimentSpec& spec) {
    validate_scenario(spec.base);
    if (spec.sweep_values.empty()) {
        throw ValidationError("experiment: sweep_values must be non-empty");
    }
    for (std::size_t i = 1; i < spec.sweep_values.size(); ++i) {
        if (!(spec.sweep_values[i] > spec.sweep_values[i - 1])) {
            throw ValidationError("experiment: sweep_values must be strictly increasing");
        }
    }
    if (spec.trials < 1) throw ValidationError("experiment: trials must be >= 1");
    if (spec.n_users < 1) throw ValidationError("experiment: n_users must be >= 1");
    if (spec.schemes.empty()) throw ValidationError("experiment: schemes must be non-empty");
    if (!std::isfinite(spec.max_power_dbm)) {
        throw ValidationError("experiment: max_power_dbm must be finite");
    }
    if (spec.sweep_kind == SweepKind::AreaLengthM) {
        for (double v : spec.sweep_values) {
            if (!(v > 0.0)) {
                throw ValidationError("experiment: area_length_m sweep values must be positive");
            }
        }
    }
    validate_ao_config(spec.ao);
}

TrialParams apply_sweep_value(const ExperimentSpec& spec, double sweep_value) {
    TrialParams p;
    p.scenario = spec.base;
    p.cap_w = dbm_to_watts(spec.max_power_dbm);
    switch (spec.sweep_kind) {
        case SweepKind::MaxPowerDbm:
            p.cap_w = dbm_to_watts(sweep_value);
            break;
        case SweepKind::FixedPowerDbm:
            p.scenario.fixed_power_w = dbm_to_watts(sweep_value);
            break;
        case SweepKind::AreaLengthM:
            p.scenario.area_x_m = sweep_value;
            if (spec.couple_waveguide_to_area) p.scenario.waveguide_length_m = sweep_value;
            break;
    }
    return p;
}

UserSet generate_users(const Scenario& scenario, int n, double cap_w, SplitMix64& rng) {
    if (n < 1) throw ValidationError("generate_users: n_users must be >= 1");
    UserSet users;
    users.positions.reserve(n);
    users.power_caps_w.assign(n, cap_w);
    for (int i = 0; i < n; ++i) {
        const double x = rng.uniform(0.0, scenario.area_x_m);
        const double y = rng.uniform(-scenario.area_y_m / 2.0, scenario.area_y_m / 2.0);
        users.positions.push_back({x, y});
    }
    return users;
}

std::uint64_t trial_stream_seed(std::uint64_t master_seed, std::size_t trial_idx) {
    const std::uint64_t root = derive_stream(master_seed, 0xD201ULL, 0);
    return derive_stream(root, trial_idx, 0);
}

std::uint64_t scheme_stream_seed(std::uint64_t master_seed, SchemeKind scheme,
                                 std::size_t trial_idx) {
    const std::uint64_t root = derive_stream(master_seed, 0x5C01ULL, 0);
    return derive_stream(root, static_cast<std::uint64_t>(scheme), trial_idx);
}

namespace {

// Solves every scheme of one trial; writes one (ee, flag) pair per scheme.
void solve_one_trial(const ExperimentSpec& spec, const TrialParams& params,
                     std::size_t trial_idx, double* ee_out, char* flag_out) {
    SplitMix64 drop_rng(trial_stream_seed(spec.master_seed, trial_idx));
    const UserSet users =
        generate_users(params.scenario, spec.n_users, params.cap_w, drop_rng);
    for (std::size_t k = 0; k < spec.schemes.size(); ++k) {
        AoConfig cfg = spec.ao;
        cfg.pso.rng_seed = scheme_stream_seed(spec.master_seed, spec.schemes[k].kind,
                                              trial_idx);
        const EESolution sol = solve_scheme(spec.schemes[k], params.scenario, users, cfg);
        ee_out[k] = sol.ee_bits_per_joule;
        flag_out[k] = sol.flagged ? 1 : 0;
    }
}

SweepResult aggregate(const ExperimentSpec& spec,
                      const std::vector<std::vector<double>>& ee,
                      const std::vector<std::vector<char>>& flags) {
    SweepResult result;
    result.sweep_kind = spec.sweep_kind;
    result.sweep_values = spec.sweep_values;
    result.schemes = spec.schemes;
    result.master_seed = spec.master_seed;
    result.spec_hash = hash_spec(spec);

    const std::size_t n_schemes = spec.schemes.size();
    const std::size_t trials = static_cast<std::size_t>(spec.trials);
    for (std::size_t s = 0; s < spec.sweep_values.size(); ++s) {
        for (std::size_t k = 0; k < n_schemes; ++k) {
            SweepCell cell;
            cell.sweep_value = spec.sweep_values[s];
            cell.scheme = spec.schemes[k].kind;
            cell.trials = spec.trials;
            cell.trial_ee.reserve(trials);
            cell.trial_flagged.reserve(trials);
            double sum = 0.0;
            std::size_t used = 0;
            for (std::size_t t = 0; t < trials; ++t) {
                const double v = ee[s][t * n_schemes + k];
                const bool fl = flags[s][t * n_schemes + k] != 0;
                cell.trial_ee.push_back(v);
                cell.trial_flagged.push_back(fl);
                if (fl) {
                    ++cell.flagged;
                } else {
                    sum += v;
                    ++used;
                }
            }
            const double flagged_fraction =
                static_cast<double>(cell.flagged) / static_cast<double>(trials);
            if (flagged_fraction >= 1e-3) {
                char msg[160];
                std::snprintf(msg, sizeof(msg),
                              "experiment: %d/%d solves flagged for scheme %s at sweep "
                              "value %g; refusing to average",
                              cell.flagged, spec.trials,
                              std::string(scheme_name(cell.scheme)).c_str(),
                              cell.sweep_value);
                throw std::runtime_error(msg);
            }
            cell.ee_mean = used > 0 ? sum / static_cast<double>(used) : 0.0;
            double ss = 0.0;
            for (std::size_t t = 0; t < trials; ++t) {
                if (cell.trial_flagged[t]) continue;
                const double d = cell.trial_ee[t] - cell.ee_mean;
                ss += d * d;
            }
            cell.ee_std = used > 1 ? std::sqrt(ss / static_cast<double>(used - 1)) : 0.0;
            result.cells.push_back(std::move(cell));
        }
    }
    return result;
}

} // namespace

SweepResult run_experiment_serial(const ExperimentSpec& spec) {
    validate_experiment_spec(spec);
    const std::size_t n_schemes = spec.schemes.size();
    const std::size_t trials = static_cast<std::size_t>(spec.trials);

    std::vector<std::vector<double>> ee(spec.sweep_values.size());
    std::vector<std::vector<char>> flags(spec.sweep_values.size());
    for (std::size_t s = 0; s < spec.sweep_values.size(); ++s) {
        const TrialParams params = apply_sweep_value(spec, spec.sweep_values[s]);
        validate_scenario(params.scenario);
        ee[s].assign(trials * n_schemes, 0.0);
        flags[s].assign(trials * n_schemes, 0);
        for (std::size_t t = 0; t < trials; ++t) {
            solve_one_trial(spec, params, t, &ee[s][t * n_schemes],
                            &flags[s][t * n_schemes]);
        }
    }
    return aggregate(spec, ee, flags);
}

SweepResult run_experiment(const ExperimentSpec& spec, int workers,
                           const SweepProgressFn& on_sweep) {
    validate_experiment_spec(spec);
    const std::size_t n_schemes = spec.schemes.size();
    const std::size_t trials = static_cast<std::size_t>(spec.trials);

    std::vector<std::vector<double>> ee(spec.sweep_values.size());
    std::vector<std::vector<char>> flags(spec.sweep_values.size());
    std::exception_ptr first_error;
    for (std::size_t s = 0; s < spec.sweep_values.size(); ++s) {
        if (on_sweep) on_sweep(s, spec.sweep_values.size(), spec.sweep_values[s]);
        const TrialParams params = apply_sweep_value(spec, spec.sweep_values[s]);
        validate_scenario(params.scenario);
        ee[s].assign(trials * n_schemes, 0.0);
        flags[s].assign(trials * n_schemes, 0);

        const long long n_trials = static_cast<long long>(trials);
#ifdef _OPENMP
        const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#else
        (void)workers;
#endif
        for (long long t = 0; t < n_trials; ++t) {
            try {
                solve_one_trial(spec, params, static_cast<std::size_t>(t),
                                &ee[s][static_cast<std::size_t>(t) * n_schemes],
                                &flags[s][static_cast<std::size_t>(t) * n_schemes]);
            } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
                {
                    if (!first_error) first_error = std::current_exception();
                }
            }
        }
        if (first_error) std::rethrow_exception(first_error);
    }
    return aggregate(spec, ee, flags);
}

namespace {

void append_kv(std::string& out, const char* key, const std::string& value) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string canonical_spec_text(const ExperimentSpec& spec) {
    std::string out;
    append_kv(out, "sweep_kind", std::string(sweep_kind_name(spec.sweep_kind)));
    std::string vals;
    for (std::size_t i = 0; i < spec.sweep_values.size(); ++i) {
        if (i) vals += ',';
        vals += fmt_double(spec.sweep_values[i]);
    }
    append_kv(out, "sweep_values", vals);
    append_kv(out, "trials", std::to_string(spec.trials));
    append_kv(out, "n_users", std::to_string(spec.n_users));
    append_kv(out, "max_power_dbm", fmt_double(spec.max_power_dbm));
    append_kv(out, "master_seed", std::to_string(spec.master_seed));
    std::string schemes;
    for (std::size_t i = 0; i < spec.schemes.size(); ++i) {
        if (i) schemes += ',';
        schemes += std::string(scheme_name(spec.schemes[i].kind));
        if (spec.schemes[i].kind == SchemeKind::NomaExhaustive) {
            schemes += ':';
            schemes += fmt_double(spec.schemes[i].exhaustive_step_m);
        }
    }
    append_kv(out, "schemes", schemes);
    append_kv(out, "carrier_frequency_hz", fmt_double(spec.base.carrier_frequency_hz));
    append_kv(out, "wave_speed_m_per_s", fmt_double(spec.base.wave_speed_m_per_s));
    append_kv(out, "antenna_height_m", fmt_double(spec.base.antenna_height_m));
    append_kv(out, "waveguide_length_m", fmt_double(spec.base.waveguide_length_m));
    append_kv(out, "area_x_m", fmt_double(spec.base.area_x_m));
    append_kv(out, "area_y_m", fmt_double(spec.base.area_y_m));
    append_kv(out, "noise_power_w", fmt_double(spec.base.noise_power_w));
    append_kv(out, "fixed_power_w", fmt_double(spec.base.fixed_power_w));
    append_kv(out, "couple_waveguide_to_area",
              spec.couple_waveguide_to_area ? "1" : "0");
    append_kv(out, "dinkelbach_tolerance", fmt_double(spec.ao.dinkelbach.tolerance));
    append_kv(out, "dinkelbach_max_iterations",
              std::to_string(spec.ao.dinkelbach.max_iterations));
    append_kv(out, "dinkelbach_warm_start", spec.ao.dinkelbach.warm_start ? "1" : "0");
    append_kv(out, "pso_swarm_size", std::to_string(spec.ao.pso.swarm_size));
    append_kv(out, "pso_max_iterations", std::to_string(spec.ao.pso.max_iterations));
    append_kv(out, "pso_inertia_weight", fmt_double(spec.ao.pso.inertia_weight));
    append_kv(out, "pso_cognitive_coeff", fmt_double(spec.ao.pso.cognitive_coeff));
    append_kv(out, "pso_social_coeff", fmt_double(spec.ao.pso.social_coeff));
    append_kv(out, "pso_velocity_clamp_fraction",
              fmt_double(spec.ao.pso.velocity_clamp_fraction));
    append_kv(out, "pso_stall_tolerance", fmt_double(spec.ao.pso.stall_tolerance));
    append_kv(out, "pso_stall_iterations", std::to_string(spec.ao.pso.stall_iterations));
    append_kv(out, "ao_max_outer_iterations", std::to_string(spec.ao.max_outer_iterations));
    append_kv(out, "ao_ee_improvement_tolerance",
              fmt_double(spec.ao.ee_improvement_tolerance));
    return out;
}

std::uint64_t hash_spec(const ExperimentSpec& spec) {
    // FNV-1a over the canonical text
    const std::string text = canonical_spec_text(spec);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace pinchopt
