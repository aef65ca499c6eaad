#ifndef PINCHOPT_ANTENNA_OPT_HPP
#define PINCHOPT_ANTENNA_OPT_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "pinchopt/model.hpp"
#include "pinchopt/rng.hpp"

namespace pinchopt {

struct PsoConfig {
    int swarm_size = 30;
    int max_iterations = 200;
    double inertia_weight = 0.729;
    double cognitive_coeff = 1.49445;
    double social_coeff = 1.49445;
    double velocity_clamp_fraction = 0.2;  // of the search interval length
    double stall_tolerance = 1e-8;
    int stall_iterations = 20;
    std::uint64_t rng_seed = 1;
};

void validate_pso_config(const PsoConfig& cfg);

// Weighted inverse-square-distance objective for the antenna position:
// sum_n P_n / (|x - x_n|^2 + y_n^2 + d^2). Each term is a symmetric bump
// centered at x_n, so the sum is multi-modal.
struct PositionObjective {
    std::vector<UserPosition> user_xy;
    std::vector<double> powers_w;
    double height_sq_m2 = 9.0;

    double total_power() const {
        double s = 0.0;
        for (double p : powers_w) s += p;
        return s;
    }
};

PositionObjective make_position_objective(const UserSet& users, const PowerAllocation& alloc,
                                          const Scenario& s);

double antenna_objective(double x, const PositionObjective& obj);

struct SearchResult {
    double x = 0.0;
    double value = 0.0;
    int iterations = 0;
    std::vector<double> gbest_trace;  // best value after each iteration
};

// Grid scan over {0, step, 2 step, ..., L} (L always included). Ties go to
// the smaller x.
SearchResult exhaustive_search(const PositionObjective& obj, double length,
                               double grid_step_m);

// Global-best PSO on [0, length] for an arbitrary scalar objective.
// seed_positions pre-place the first particles (clamped to the interval);
// the rest start uniformly at random. Deterministic for a fixed rng_seed.
template <typename F>
SearchResult pso_maximize(F&& f, double length, const PsoConfig& cfg,
                          std::span<const double> seed_positions);

// PSO on the antenna objective with one particle seeded at each user's
// clamped x-coordinate. An all-zero power vector makes the objective flat;
// in that case the position x0 (or 0) is returned untouched.
SearchResult pso_optimize(const PositionObjective& obj, double length, const PsoConfig& cfg,
                          std::optional<double> x0 = std::nullopt);

// Antenna start: per user the interval point nearest to it is min(L, x_n);
// pick the candidate with the smallest squared horizontal+lateral distance,
// ties toward the smaller user index.
AntennaPosition initialize_antenna(const UserSet& users, double length);

// ---- implementation ----

template <typename F>
SearchResult pso_maximize(F&& f, double length, const PsoConfig& cfg,
                          std::span<const double> seed_positions) {
    validate_pso_config(cfg);
    if (!(length > 0.0)) throw ValidationError("pso: length must be strictly positive");

    SplitMix64 rng(cfg.rng_seed);
    const int n = cfg.swarm_size;
    const double v_max = cfg.velocity_clamp_fraction * length;

    std::vector<double> x(n), v(n), pbest_x(n), pbest_v(n);
    for (int i = 0; i < n; ++i) {
        if (i < static_cast<int>(seed_positions.size())) {
            x[i] = std::clamp(seed_positions[i], 0.0, length);
        } else {
            x[i] = rng.uniform(0.0, length);
        }
        v[i] = rng.uniform(-v_max, v_max);
    }

    SearchResult res;
    res.gbest_trace.reserve(cfg.max_iterations + 1);
    double gbest_x = 0.0;
    double gbest_v = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        pbest_x[i] = x[i];
        pbest_v[i] = f(x[i]);
        if (pbest_v[i] > gbest_v) {
            gbest_v = pbest_v[i];
            gbest_x = x[i];
        }
    }
    res.gbest_trace.push_back(gbest_v);

    int stall = 0;
    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        double iter_best_v = gbest_v;
        double iter_best_x = gbest_x;
        for (int i = 0; i < n; ++i) {
            const double r1 = rng.next_unit();
            const double r2 = rng.next_unit();
            v[i] = cfg.inertia_weight * v[i] +
                   cfg.cognitive_coeff * r1 * (pbest_x[i] - x[i]) +
                   cfg.social_coeff * r2 * (gbest_x - x[i]);
            v[i] = std::clamp(v[i], -v_max, v_max);
            x[i] += v[i];
            if (x[i] < 0.0) {
                x[i] = 0.0;
                v[i] = 0.0;  // kill the velocity so the particle does not hammer the wall
            } else if (x[i] > length) {
                x[i] = length;
                v[i] = 0.0;
            }
            const double val = f(x[i]);
            if (val > pbest_v[i]) {
                pbest_v[i] = val;
                pbest_x[i] = x[i];
            }
            if (val > iter_best_v) {
                iter_best_v = val;
                iter_best_x = x[i];
            }
        }
        const double improvement = iter_best_v - gbest_v;
        if (iter_best_v > gbest_v) {
            gbest_v = iter_best_v;
            gbest_x = iter_best_x;
        }
        res.gbest_trace.push_back(gbest_v);
        ++res.iterations;
        if (improvement < cfg.stall_tolerance) {
            if (++stall >= cfg.stall_iterations) break;
        } else {
            stall = 0;
        }
    }

    res.x = gbest_x;
    res.value = gbest_v;
    return res;
}

} // namespace pinchopt

#endif
