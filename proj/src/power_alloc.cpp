#include "pinchopt/power_alloc.hpp"

#include <cmath>
#include <numbers>

namespace pinchopt {

void validate_dinkelbach_config(const DinkelbachConfig& cfg) {
    if (!(cfg.tolerance > 0.0)) {
        throw ValidationError("dinkelbach: tolerance must be strictly positive");
    }
    if (cfg.max_iterations < 1) {
        throw ValidationError("dinkelbach: max_iterations must be >= 1");
    }
}

double stationary_power(double gain, double prefix_weighted_power, double beta,
                        const Scenario& s) {
    return 1.0 / (beta * std::numbers::ln2) -
           (prefix_weighted_power + s.noise_power_w) / gain;
}

double clamp_power(double p_der, double cap) {
    if (p_der < 0.0) return 0.0;
    if (p_der > cap) return cap;
    return p_der;
}

namespace {

// EE of the allocation "stronger users at caps, user n at p, rest silent".
double truncated_ee(double prefix_weighted, double prefix_power, double p, double gain,
                    const Scenario& s) {
    const double rate = std::log2(1.0 + (prefix_weighted + p * gain) / s.noise_power_w);
    return rate / (prefix_power + p + s.fixed_power_w);
}

DinkelbachUserResult run_dinkelbach(double gain, double cap, double prefix_weighted,
                                    double prefix_power, double beta0, const Scenario& s,
                                    const DinkelbachConfig& cfg) {
    DinkelbachUserResult res;
    res.beta_trace.reserve(8);
    res.beta_trace.push_back(beta0);

    double beta = beta0;
    double power = cap;
    res.converged = false;
    for (int l = 0; l < cfg.max_iterations; ++l) {
        power = clamp_power(stationary_power(gain, prefix_weighted, beta, s), cap);
        const double beta_next = truncated_ee(prefix_weighted, prefix_power, power, gain, s);
        const double gain_step = beta_next - beta;
        beta = beta_next;
        res.beta_trace.push_back(beta);
        ++res.iterations;
        if (gain_step < cfg.tolerance) {
            res.converged = true;
            break;
        }
    }
    res.power_w = power;
    res.beta = beta;
    return res;
}

} // namespace

DinkelbachUserResult dinkelbach_user(std::size_t n_index,
                                     const std::vector<double>& sorted_gains,
                                     const std::vector<double>& sorted_caps,
                                     const Scenario& s, const DinkelbachConfig& cfg) {
    validate_dinkelbach_config(cfg);
    if (n_index >= sorted_gains.size() || sorted_gains.size() != sorted_caps.size()) {
        throw ValidationError("dinkelbach_user: n_index/gain/cap size mismatch");
    }

    double prefix_weighted = 0.0;
    double prefix_power = 0.0;
    for (std::size_t i = 0; i < n_index; ++i) {
        prefix_weighted += sorted_caps[i] * sorted_gains[i];
        prefix_power += sorted_caps[i];
    }
    // Ratio of the all-caps point for users 1..n; a feasible ratio, so the
    // beta sequence can only move up from here.
    const double beta0 = truncated_ee(prefix_weighted, prefix_power, sorted_caps[n_index],
                                      sorted_gains[n_index], s);
    return run_dinkelbach(sorted_gains[n_index], sorted_caps[n_index], prefix_weighted,
                          prefix_power, beta0, s, cfg);
}

PowerSolveResult allocate_power(const ChannelGains& gains, const std::vector<double>& caps,
                                const Scenario& s, const DinkelbachConfig& cfg) {
    validate_dinkelbach_config(cfg);
    if (gains.size() == 0 || gains.size() != caps.size()) {
        throw ValidationError("allocate_power: gains and caps must be non-empty and equal length");
    }

    const std::size_t n_users = gains.size();
    const auto order = descending_gain_order(gains.gains);
    std::vector<double> sorted_gains(n_users), sorted_caps(n_users);
    for (std::size_t k = 0; k < n_users; ++k) {
        sorted_gains[k] = gains.gains[order[k]];
        sorted_caps[k] = caps[order[k]];
    }

    PowerSolveResult res;
    res.iterations_per_user.assign(n_users, 0);
    std::vector<double> sorted_powers(n_users, 0.0);

    double prefix_weighted = 0.0;
    double prefix_power = 0.0;
    double prev_beta = 0.0;
    double final_ee = 0.0;
    for (std::size_t n = 0; n < n_users; ++n) {
        double beta0 = truncated_ee(prefix_weighted, prefix_power, sorted_caps[n],
                                    sorted_gains[n], s);
        if (cfg.warm_start && n > 0 && prev_beta > beta0) beta0 = prev_beta;
        const auto user = run_dinkelbach(sorted_gains[n], sorted_caps[n], prefix_weighted,
                                         prefix_power, beta0, s, cfg);
        sorted_powers[n] = user.power_w;
        res.iterations_per_user[n] = user.iterations;
        res.converged = res.converged && user.converged;
        final_ee = user.beta;
        prev_beta = user.beta;
        if (user.power_w < sorted_caps[n]) {
            break;  // weaker users stay silent
        }
        prefix_weighted += sorted_caps[n] * sorted_gains[n];
        prefix_power += sorted_caps[n];
    }

    res.allocation.powers_w.assign(n_users, 0.0);
    for (std::size_t k = 0; k < n_users; ++k) {
        res.allocation.powers_w[order[k]] = sorted_powers[k];
        if (sorted_powers[k] > 0.0) ++res.active_users;
    }
    res.ee = final_ee;
    return res;
}

} // namespace pinchopt
