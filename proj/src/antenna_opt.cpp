#include "pinchopt/antenna_opt.hpp"

#include <cmath>

namespace pinchopt {

void validate_pso_config(const PsoConfig& cfg) {
    if (cfg.swarm_size < 2) throw ValidationError("pso: swarm_size must be >= 2");
    if (cfg.max_iterations < 1) throw ValidationError("pso: max_iterations must be >= 1");
    if (cfg.inertia_weight < 0.0 || cfg.cognitive_coeff < 0.0 || cfg.social_coeff < 0.0) {
        throw ValidationError("pso: coefficients must be non-negative");
    }
    if (!(cfg.velocity_clamp_fraction > 0.0 && cfg.velocity_clamp_fraction <= 1.0)) {
        throw ValidationError("pso: velocity_clamp_fraction must be in (0, 1]");
    }
    if (!(cfg.stall_tolerance > 0.0)) {
        throw ValidationError("pso: stall_tolerance must be strictly positive");
    }
    if (cfg.stall_iterations < 1) throw ValidationError("pso: stall_iterations must be >= 1");
}

PositionObjective make_position_objective(const UserSet& users, const PowerAllocation& alloc,
                                          const Scenario& s) {
    if (alloc.powers_w.size() != users.size()) {
        throw ValidationError("position objective: powers_w length must match user count");
    }
    PositionObjective obj;
    obj.user_xy = users.positions;
    obj.powers_w = alloc.powers_w;
    obj.height_sq_m2 = s.antenna_height_m * s.antenna_height_m;
    return obj;
}

double antenna_objective(double x, const PositionObjective& obj) {
    double sum = 0.0;
    for (std::size_t n = 0; n < obj.user_xy.size(); ++n) {
        const double dx = x - obj.user_xy[n].x_m;
        const double y = obj.user_xy[n].y_m;
        sum += obj.powers_w[n] / (dx * dx + y * y + obj.height_sq_m2);
    }
    return sum;
}

SearchResult exhaustive_search(const PositionObjective& obj, double length,
                               double grid_step_m) {
    if (!(grid_step_m > 0.0 && grid_step_m <= length)) {
        throw ValidationError("exhaustive_search: grid_step_m must be in (0, length]");
    }
    SearchResult res;
    res.x = 0.0;
    res.value = antenna_objective(0.0, obj);
    const auto consider = [&](double x) {
        const double v = antenna_objective(x, obj);
        if (v > res.value) {
            res.value = v;
            res.x = x;
        }
    };
    const long long steps = static_cast<long long>(std::floor(length / grid_step_m));
    for (long long k = 1; k <= steps; ++k) {
        consider(static_cast<double>(k) * grid_step_m);
    }
    consider(length);
    return res;
}

SearchResult pso_optimize(const PositionObjective& obj, double length, const PsoConfig& cfg,
                          std::optional<double> x0) {
    if (obj.user_xy.size() != obj.powers_w.size()) {
        throw ValidationError("pso_optimize: user_xy and powers_w length mismatch");
    }
    if (obj.total_power() <= 0.0) {
        // Flat objective: every position is equally good, keep the current one.
        SearchResult res;
        res.x = std::clamp(x0.value_or(0.0), 0.0, length);
        res.value = antenna_objective(res.x, obj);
        res.gbest_trace.push_back(res.value);
        return res;
    }
    std::vector<double> seeds;
    seeds.reserve(obj.user_xy.size());
    for (const auto& u : obj.user_xy) seeds.push_back(u.x_m);
    return pso_maximize([&](double x) { return antenna_objective(x, obj); }, length, cfg,
                        seeds);
}

AntennaPosition initialize_antenna(const UserSet& users, double length) {
    if (users.positions.empty()) {
        throw ValidationError("initialize_antenna: at least one user required");
    }
    double best_x = 0.0;
    double best_dist_sq = std::numeric_limits<double>::infinity();
    for (const auto& u : users.positions) {
        const double cand = std::min(length, u.x_m);
        const double dx = cand - u.x_m;
        const double dist_sq = dx * dx + u.y_m * u.y_m;
        if (dist_sq < best_dist_sq) {
            best_dist_sq = dist_sq;
            best_x = cand;
        }
    }
    return AntennaPosition{best_x};
}

} // namespace pinchopt
