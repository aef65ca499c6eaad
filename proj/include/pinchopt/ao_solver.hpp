#ifndef PINCHOPT_AO_SOLVER_HPP
#define PINCHOPT_AO_SOLVER_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "pinchopt/antenna_opt.hpp"
#include "pinchopt/model.hpp"
#include "pinchopt/power_alloc.hpp"

namespace pinchopt {

struct InitMode {
    enum class Kind { NearestUser, Random, FixedAt };
    Kind kind = Kind::NearestUser;
    double fixed_x_m = 0.0;
};

struct Positioner {
    enum class Kind { Pso, Exhaustive };
    Kind kind = Kind::Pso;
    double grid_step_m = 0.01;
};

struct AoConfig {
    int max_outer_iterations = 20;
    double ee_improvement_tolerance = 1e-8;
    DinkelbachConfig dinkelbach{};
    PsoConfig pso{};
    InitMode init{};
    Positioner positioner{};
};

void validate_ao_config(const AoConfig& cfg);

enum class SchemeKind { NomaPso, NomaExhaustive, NomaRandomInit, NomaFixed, Tdma };

struct Scheme {
    SchemeKind kind = SchemeKind::NomaPso;
    double exhaustive_step_m = 0.01;  // used by NomaExhaustive only
};

// Canonical scheme token, also used in CSV output and config files.
std::string_view scheme_name(SchemeKind kind);
std::optional<SchemeKind> scheme_from_name(std::string_view name);

struct TracePoint {
    int iteration = 0;
    double ee = 0.0;
};

struct EESolution {
    AntennaPosition antenna{};
    PowerAllocation allocation{};
    double ee_bits_per_joule = 0.0;
    double sum_rate_bits_per_s_hz = 0.0;
    double total_power_w = 0.0;
    std::vector<TracePoint> trace;  // EE after each accepted power subproblem
    int outer_iterations = 0;       // position proposals evaluated
    bool flagged = false;           // subsolver non-convergence or outer budget hit
};

// Alternates power allocation and antenna positioning. A proposed position
// is accepted only if the EE after re-solving powers there improves by more
// than ee_improvement_tolerance; otherwise the previous position is kept and
// the loop stops, reporting the EE of the last accepted power subproblem.
EESolution alternating_optimize(const Scenario& scenario, const UserSet& users,
                                const AoConfig& cfg);

// TDMA baseline: every user gets an equal time slot, so rates carry a 1/N
// factor and carry no inter-user interference, and the EE denominator uses
// the time-averaged transmit power P_f + (1/N) sum P_n.
EESolution tdma_solve(const Scenario& scenario, const UserSet& users, const AoConfig& cfg);

// Dispatches to the scheme implementations; overrides cfg.init/cfg.positioner
// as each scheme prescribes.
EESolution solve_scheme(const Scheme& scheme, const Scenario& scenario, const UserSet& users,
                        const AoConfig& cfg);

// TDMA rate/EE helpers (exposed for tests and oracles).
std::vector<double> tdma_per_user_rates(const ChannelGains& gains, const PowerAllocation& alloc,
                                        const Scenario& s);
double tdma_sum_rate(const ChannelGains& gains, const PowerAllocation& alloc,
                     const Scenario& s);
double tdma_energy_efficiency(const ChannelGains& gains, const PowerAllocation& alloc,
                              const Scenario& s);

struct TdmaPowerResult {
    PowerAllocation allocation;
    double ee = 0.0;
    int iterations = 0;
    bool converged = true;
};

// Joint Dinkelbach for the TDMA EE objective; separable, so each iteration
// updates every user with the closed form clamp(1/(beta ln 2) - sigma^2/h_n).
TdmaPowerResult tdma_allocate_power(const ChannelGains& gains, const std::vector<double>& caps,
                                    const Scenario& s, const DinkelbachConfig& cfg);

} // namespace pinchopt

#endif
