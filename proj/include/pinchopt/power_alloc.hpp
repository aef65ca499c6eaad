#ifndef PINCHOPT_POWER_ALLOC_HPP
#define PINCHOPT_POWER_ALLOC_HPP

#include <cstddef>
#include <vector>

#include "pinchopt/model.hpp"

namespace pinchopt {

struct DinkelbachConfig {
    double tolerance = 1e-6;   // stop once the ratio gains less than this per step
    int max_iterations = 100;
    // Start user n from user n-1's converged ratio instead of the all-caps
    // ratio. Off by default; both starts converge to the same fixed point.
    bool warm_start = false;
};

void validate_dinkelbach_config(const DinkelbachConfig& cfg);

// Outcome of one per-user Dinkelbach run.
struct DinkelbachUserResult {
    double power_w = 0.0;
    double beta = 0.0;    // final ratio value = EE of the truncated allocation
    int iterations = 0;
    bool converged = true;
    std::vector<double> beta_trace;  // beta after each update, non-decreasing
};

struct PowerSolveResult {
    PowerAllocation allocation;            // original user index order
    double ee = 0.0;                       // EE of the returned allocation
    int active_users = 0;                  // users with strictly positive power
    std::vector<int> iterations_per_user;  // descending-gain order, 0 = skipped
    bool converged = true;
};

// Zero of the derivative of the parametric subtractive objective for one
// user given the weighted power of all stronger (cap-saturated) users:
//   P = 1/(beta ln 2) - (prefix_weighted_power + sigma^2) / gain.
// May be negative or exceed the cap; the caller clamps.
double stationary_power(double gain, double prefix_weighted_power, double beta,
                        const Scenario& s);

// Projects the stationary point onto [0, cap].
double clamp_power(double p_der, double cap);

// Dinkelbach iterations for the user at position n_index of the descending
// order, with users before it pinned at their caps. sorted_gains/sorted_caps
// are in descending-gain order.
DinkelbachUserResult dinkelbach_user(std::size_t n_index,
                                     const std::vector<double>& sorted_gains,
                                     const std::vector<double>& sorted_caps,
                                     const Scenario& s, const DinkelbachConfig& cfg);

// EE-optimal transmit powers for fixed channel gains: walks users in
// descending gain order, saturating caps until the first interior optimum,
// after which all weaker users stay silent.
PowerSolveResult allocate_power(const ChannelGains& gains, const std::vector<double>& caps,
                                const Scenario& s, const DinkelbachConfig& cfg);

} // namespace pinchopt

#endif
