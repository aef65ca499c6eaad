#ifndef PINCHOPT_MODEL_HPP
#define PINCHOPT_MODEL_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pinchopt {

// Raised whenever an input violates a model invariant. The message always
// names the offending field or key.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr double kSpeedOfLightMPerS = 299792458.0;

// Physical and system parameters, all in linear SI units. Configuration
// layers convert from dBm/GHz at the boundary; everything below computes
// in watts and Hz-normalized rates.
struct Scenario {
    double carrier_frequency_hz = 28e9;
    double wave_speed_m_per_s = kSpeedOfLightMPerS;
    double antenna_height_m = 3.0;
    double waveguide_length_m = 120.0;
    double area_x_m = 120.0;   // kept independent of waveguide_length_m
    double area_y_m = 20.0;
    double noise_power_w = 1e-12;
    double fixed_power_w = 0.01;
};

struct UserPosition {
    double x_m = 0.0;
    double y_m = 0.0;
};

// User coordinates plus per-user transmit power caps, index-aligned.
struct UserSet {
    std::vector<UserPosition> positions;
    std::vector<double> power_caps_w;

    std::size_t size() const { return positions.size(); }
};

// Scalar pinching-antenna position along the waveguide.
struct AntennaPosition {
    double x_m = 0.0;
};

struct PowerAllocation {
    std::vector<double> powers_w;

    double total_w() const {
        double s = 0.0;
        for (double p : powers_w) s += p;
        return s;
    }
};

// Channel gains snapshotted at a given antenna position. Gains must be
// recomputed whenever the antenna moves.
struct ChannelGains {
    std::vector<double> gains;
    AntennaPosition antenna;

    std::size_t size() const { return gains.size(); }
};

void validate_scenario(const Scenario& s);
// Rejects empty sets, size mismatches, non-positive caps and users outside
// the service area ([0, D_x] x [-D_y/2, D_y/2]).
void validate_users(const UserSet& users, const Scenario& s);
void validate_antenna(const AntennaPosition& a, const Scenario& s);
void validate_allocation(const PowerAllocation& alloc, const UserSet& users);

// P_w = 10^((P_dBm - 30)/10)
double dbm_to_watts(double p_dbm);
double watts_to_dbm(double p_w);

// Free-space line-of-sight gain between a user and the antenna at height d:
// c^2 / (16 pi^2 f_c^2 (|x_ant - x_n|^2 + y_n^2 + d^2)).
double channel_gain(const UserPosition& user, const AntennaPosition& antenna,
                    const Scenario& s);

ChannelGains compute_channel_gains(const UserSet& users, const AntennaPosition& antenna,
                                   const Scenario& s);

// Indices 0..N-1 ordered by descending gain; ties keep original order.
std::vector<std::size_t> descending_gain_order(const std::vector<double>& gains);

// Per-user uplink rates under SIC decoding in descending-gain order:
// R_n = log2(1 + P_n h_n / (sum of weaker users' P_i h_i + sigma^2)).
// Results are returned in the original user index order.
std::vector<double> per_user_rates(const ChannelGains& gains, const PowerAllocation& alloc,
                                   const Scenario& s);

// Closed form of the SIC rate sum: log2(1 + sum_n P_n h_n / sigma^2).
double sum_rate_noma(const ChannelGains& gains, const PowerAllocation& alloc,
                     const Scenario& s);

// sum_rate / (P_f + total transmit power), in bits/joule per Hz.
double energy_efficiency(const ChannelGains& gains, const PowerAllocation& alloc,
                         const Scenario& s);

} // namespace pinchopt

#endif
