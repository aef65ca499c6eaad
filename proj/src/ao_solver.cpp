#include "pinchopt/ao_solver.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "pinchopt/rng.hpp"

namespace pinchopt {

void validate_ao_config(const AoConfig& cfg) {
    if (cfg.max_outer_iterations < 1) {
        throw ValidationError("ao: max_outer_iterations must be >= 1");
    }
    if (!(cfg.ee_improvement_tolerance > 0.0)) {
        throw ValidationError("ao: ee_improvement_tolerance must be strictly positive");
    }
    validate_dinkelbach_config(cfg.dinkelbach);
    validate_pso_config(cfg.pso);
    if (cfg.positioner.kind == Positioner::Kind::Exhaustive &&
        !(cfg.positioner.grid_step_m > 0.0)) {
        throw ValidationError("ao: positioner grid_step_m must be strictly positive");
    }
}

std::string_view scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::NomaPso: return "noma_pso";
        case SchemeKind::NomaExhaustive: return "noma_exhaustive";
        case SchemeKind::NomaRandomInit: return "noma_random";
        case SchemeKind::NomaFixed: return "noma_fixed";
        case SchemeKind::Tdma: return "tdma";
    }
    return "unknown";
}

std::optional<SchemeKind> scheme_from_name(std::string_view name) {
    if (name == "noma_pso") return SchemeKind::NomaPso;
    if (name == "noma_exhaustive") return SchemeKind::NomaExhaustive;
    if (name == "noma_random") return SchemeKind::NomaRandomInit;
    if (name == "noma_fixed") return SchemeKind::NomaFixed;
    if (name == "tdma") return SchemeKind::Tdma;
    return std::nullopt;
}

std::vector<double> tdma_per_user_rates(const ChannelGains& gains, const PowerAllocation& alloc,
                                        const Scenario& s) {
    if (gains.size() != alloc.powers_w.size()) {
        throw ValidationError("tdma_per_user_rates: gains and powers_w length mismatch");
    }
    const double slot = 1.0 / static_cast<double>(gains.size());
    std::vector<double> rates(gains.size());
    for (std::size_t n = 0; n < gains.size(); ++n) {
        rates[n] = slot * std::log2(1.0 + alloc.powers_w[n] * gains.gains[n] / s.noise_power_w);
    }
    return rates;
}

double tdma_sum_rate(const ChannelGains& gains, const PowerAllocation& alloc,
                     const Scenario& s) {
    double sum = 0.0;
    for (double r : tdma_per_user_rates(gains, alloc, s)) sum += r;
    return sum;
}

double tdma_energy_efficiency(const ChannelGains& gains, const PowerAllocation& alloc,
                              const Scenario& s) {
    const double avg_power = alloc.total_w() / static_cast<double>(gains.size());
    return tdma_sum_rate(gains, alloc, s) / (s.fixed_power_w + avg_power);
}

TdmaPowerResult tdma_allocate_power(const ChannelGains& gains, const std::vector<double>& caps,
                                    const Scenario& s, const DinkelbachConfig& cfg) {
    validate_dinkelbach_config(cfg);
    if (gains.size() == 0 || gains.size() != caps.size()) {
        throw ValidationError("tdma_allocate_power: gains and caps must be non-empty and equal length");
    }
    const std::size_t n_users = gains.size();

    TdmaPowerResult res;
    res.allocation.powers_w = caps;
    double beta = tdma_energy_efficiency(gains, res.allocation, s);
    res.converged = false;
    for (int l = 0; l < cfg.max_iterations; ++l) {
        for (std::size_t n = 0; n < n_users; ++n) {
            const double p_der = 1.0 / (beta * std::numbers::ln2) -
                                 s.noise_power_w / gains.gains[n];
            res.allocation.powers_w[n] = clamp_power(p_der, caps[n]);
        }
        const double beta_next = tdma_energy_efficiency(gains, res.allocation, s);
        const double gain_step = beta_next - beta;
        beta = beta_next;
        ++res.iterations;
        if (gain_step < cfg.tolerance) {
            res.converged = true;
            break;
        }
    }
    res.ee = beta;
    return res;
}

namespace {

struct AoStep {
    PowerAllocation alloc;
    double ee = 0.0;
    bool converged = true;
};

// Shared alternating loop. The policy supplies the power subproblem, the
// position proposal, and the final rate/power accounting.
template <typename Policy>
EESolution ao_loop(const Scenario& scenario, const UserSet& users, const AoConfig& cfg,
                   Policy&& policy) {
    validate_scenario(scenario);
    validate_users(users, scenario);
    validate_ao_config(cfg);

    const double length = scenario.waveguide_length_m;
    SplitMix64 rng(cfg.pso.rng_seed);

    double x = 0.0;
    switch (cfg.init.kind) {
        case InitMode::Kind::NearestUser:
            x = initialize_antenna(users, length).x_m;
            break;
        case InitMode::Kind::Random:
            x = rng.uniform(0.0, length);
            break;
        case InitMode::Kind::FixedAt:
            x = cfg.init.fixed_x_m;
            validate_antenna(AntennaPosition{x}, scenario);
            break;
    }

    EESolution sol;
    AoStep cur = policy.solve_powers(x);
    sol.flagged = !cur.converged;
    sol.trace.push_back({0, cur.ee});

    bool settled = false;
    for (int outer = 1; outer <= cfg.max_outer_iterations; ++outer) {
        const std::uint64_t proposal_seed = rng.next_u64();
        const double cand_x = policy.propose_position(x, cur.alloc, proposal_seed);
        const AoStep cand = policy.solve_powers(cand_x);
        sol.flagged = sol.flagged || !cand.converged;
        ++sol.outer_iterations;
        if (cand.ee > cur.ee + cfg.ee_improvement_tolerance) {
            x = cand_x;
            cur = cand;
            sol.trace.push_back({outer, cur.ee});
        } else {
            settled = true;  // keep the previous position and stop
            break;
        }
    }
    if (!settled) sol.flagged = true;  // improvement never levelled off in budget

    sol.antenna = AntennaPosition{x};
    sol.allocation = cur.alloc;
    sol.ee_bits_per_joule = cur.ee;
    sol.sum_rate_bits_per_s_hz = policy.sum_rate(x, cur.alloc);
    sol.total_power_w = policy.total_power(cur.alloc);
    return sol;
}

struct NomaPolicy {
    const Scenario& scenario;
    const UserSet& users;
    const AoConfig& cfg;

    AoStep solve_powers(double x) const {
        const auto gains = compute_channel_gains(users, AntennaPosition{x}, scenario);
        auto r = allocate_power(gains, users.power_caps_w, scenario, cfg.dinkelbach);
        return {std::move(r.allocation), r.ee, r.converged};
    }

    double propose_position(double x, const PowerAllocation& alloc,
                            std::uint64_t seed) const {
        const auto obj = make_position_objective(users, alloc, scenario);
        if (cfg.positioner.kind == Positioner::Kind::Exhaustive) {
            return exhaustive_search(obj, scenario.waveguide_length_m,
                                     cfg.positioner.grid_step_m).x;
        }
        PsoConfig pso = cfg.pso;
        pso.rng_seed = seed;
        return pso_optimize(obj, scenario.waveguide_length_m, pso, x).x;
    }

    double sum_rate(double x, const PowerAllocation& alloc) const {
        return sum_rate_noma(compute_channel_gains(users, AntennaPosition{x}, scenario),
                             alloc, scenario);
    }

    double total_power(const PowerAllocation& alloc) const {
        return scenario.fixed_power_w + alloc.total_w();
    }
};

struct TdmaPolicy {
    const Scenario& scenario;
    const UserSet& users;
    const AoConfig& cfg;

    AoStep solve_powers(double x) const {
        const auto gains = compute_channel_gains(users, AntennaPosition{x}, scenario);
        auto r = tdma_allocate_power(gains, users.power_caps_w, scenario, cfg.dinkelbach);
        return {std::move(r.allocation), r.ee, r.converged};
    }

    double propose_position(double x, const PowerAllocation& alloc,
                            std::uint64_t seed) const {
        double total = 0.0;
        for (double p : alloc.powers_w) total += p;
        if (total <= 0.0) return x;  // flat objective
        PsoConfig pso = cfg.pso;
        pso.rng_seed = seed;
        std::vector<double> seeds;
        seeds.reserve(users.size());
        for (const auto& u : users.positions) seeds.push_back(u.x_m);
        const auto rate_at = [&](double pos) {
            return tdma_sum_rate(compute_channel_gains(users, AntennaPosition{pos}, scenario),
                                 alloc, scenario);
        };
        return pso_maximize(rate_at, scenario.waveguide_length_m, pso, seeds).x;
    }

    double sum_rate(double x, const PowerAllocation& alloc) const {
        return tdma_sum_rate(compute_channel_gains(users, AntennaPosition{x}, scenario),
                             alloc, scenario);
    }

    double total_power(const PowerAllocation& alloc) const {
        return scenario.fixed_power_w +
               alloc.total_w() / static_cast<double>(users.size());
    }
};

} // namespace

EESolution alternating_optimize(const Scenario& scenario, const UserSet& users,
                                const AoConfig& cfg) {
    return ao_loop(scenario, users, cfg, NomaPolicy{scenario, users, cfg});
}

EESolution tdma_solve(const Scenario& scenario, const UserSet& users, const AoConfig& cfg) {
    return ao_loop(scenario, users, cfg, TdmaPolicy{scenario, users, cfg});
}

namespace {

EESolution solve_fixed_antenna(const Scenario& scenario, const UserSet& users,
                               const AoConfig& cfg) {
    validate_scenario(scenario);
    validate_users(users, scenario);
    validate_ao_config(cfg);

    const AntennaPosition antenna{0.0};
    const auto gains = compute_channel_gains(users, antenna, scenario);
    auto r = allocate_power(gains, users.power_caps_w, scenario, cfg.dinkelbach);

    EESolution sol;
    sol.antenna = antenna;
    sol.allocation = std::move(r.allocation);
    sol.ee_bits_per_joule = r.ee;
    sol.sum_rate_bits_per_s_hz = sum_rate_noma(gains, sol.allocation, scenario);
    sol.total_power_w = scenario.fixed_power_w + sol.allocation.total_w();
    sol.trace.push_back({0, r.ee});
    sol.flagged = !r.converged;
    return sol;
}

} // namespace

EESolution solve_scheme(const Scheme& scheme, const Scenario& scenario, const UserSet& users,
                        const AoConfig& cfg) {
    AoConfig local = cfg;
    switch (scheme.kind) {
        case SchemeKind::NomaPso:
            local.init = {InitMode::Kind::NearestUser, 0.0};
            local.positioner = {Positioner::Kind::Pso, local.positioner.grid_step_m};
            return alternating_optimize(scenario, users, local);
        case SchemeKind::NomaRandomInit:
            local.init = {InitMode::Kind::Random, 0.0};
            local.positioner = {Positioner::Kind::Pso, local.positioner.grid_step_m};
            return alternating_optimize(scenario, users, local);
        case SchemeKind::NomaExhaustive:
            local.init = {InitMode::Kind::NearestUser, 0.0};
            local.positioner = {Positioner::Kind::Exhaustive, scheme.exhaustive_step_m};
            return alternating_optimize(scenario, users, local);
        case SchemeKind::NomaFixed:
            return solve_fixed_antenna(scenario, users, local);
        case SchemeKind::Tdma:
            local.init = {InitMode::Kind::NearestUser, 0.0};
            return tdma_solve(scenario, users, local);
    }
    throw ValidationError("solve_scheme: unknown scheme kind");
}

} // namespace pinchopt
