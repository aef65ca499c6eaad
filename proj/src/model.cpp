#include "pinchopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pinchopt {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

void require_positive(double v, const char* name) {
    require(std::isfinite(v) && v > 0.0, std::string(name) + " must be strictly positive");
}

} // namespace

void validate_scenario(const Scenario& s) {
    require_positive(s.carrier_frequency_hz, "carrier_frequency_hz");
    require_positive(s.wave_speed_m_per_s, "wave_speed_m_per_s");
    require_positive(s.antenna_height_m, "antenna_height_m");
    require_positive(s.waveguide_length_m, "waveguide_length_m");
    require_positive(s.area_x_m, "area_x_m");
    require_positive(s.area_y_m, "area_y_m");
    require_positive(s.noise_power_w, "noise_power_w");
    require_positive(s.fixed_power_w, "fixed_power_w");
}

void validate_users(const UserSet& users, const Scenario& s) {
    require(!users.positions.empty(), "users: at least one user required (n_users >= 1)");
    require(users.positions.size() == users.power_caps_w.size(),
            "users: positions and power_caps_w must have equal length");
    for (std::size_t n = 0; n < users.size(); ++n) {
        const auto& u = users.positions[n];
        require(std::isfinite(u.x_m) && u.x_m >= 0.0 && u.x_m <= s.area_x_m,
                "users: x_m out of [0, area_x_m] at index " + std::to_string(n));
        require(std::isfinite(u.y_m) && std::abs(u.y_m) <= s.area_y_m / 2.0,
                "users: y_m out of [-area_y_m/2, area_y_m/2] at index " + std::to_string(n));
        require(std::isfinite(users.power_caps_w[n]) && users.power_caps_w[n] > 0.0,
                "users: power_caps_w must be strictly positive at index " + std::to_string(n));
    }
}

void validate_antenna(const AntennaPosition& a, const Scenario& s) {
    require(std::isfinite(a.x_m) && a.x_m >= 0.0 && a.x_m <= s.waveguide_length_m,
            "antenna: x_m out of [0, waveguide_length_m]");
}

void validate_allocation(const PowerAllocation& alloc, const UserSet& users) {
    require(alloc.powers_w.size() == users.size(),
            "allocation: powers_w length must match user count");
    for (std::size_t n = 0; n < alloc.powers_w.size(); ++n) {
        require(std::isfinite(alloc.powers_w[n]) && alloc.powers_w[n] >= 0.0 &&
                    alloc.powers_w[n] <= users.power_caps_w[n],
                "allocation: powers_w out of [0, cap] at index " + std::to_string(n));
    }
}

double dbm_to_watts(double p_dbm) {
    return std::pow(10.0, (p_dbm - 30.0) / 10.0);
}

double watts_to_dbm(double p_w) {
    return 10.0 * std::log10(p_w) + 30.0;
}

double channel_gain(const UserPosition& user, const AntennaPosition& antenna,
                    const Scenario& s) {
    const double dx = antenna.x_m - user.x_m;
    const double dist_sq = dx * dx + user.y_m * user.y_m +
                           s.antenna_height_m * s.antenna_height_m;
    const double c = s.wave_speed_m_per_s;
    const double fc = s.carrier_frequency_hz;
    const double pi = std::numbers::pi;
    return (c * c) / (16.0 * pi * pi * fc * fc * dist_sq);
}

ChannelGains compute_channel_gains(const UserSet& users, const AntennaPosition& antenna,
                                   const Scenario& s) {
    ChannelGains g;
    g.antenna = antenna;
    g.gains.reserve(users.size());
    for (const auto& u : users.positions) {
        g.gains.push_back(channel_gain(u, antenna, s));
    }
    return g;
}

std::vector<std::size_t> descending_gain_order(const std::vector<double>& gains) {
    std::vector<std::size_t> order(gains.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return gains[a] > gains[b]; });
    return order;
}

std::vector<double> per_user_rates(const ChannelGains& gains, const PowerAllocation& alloc,
                                   const Scenario& s) {
    if (gains.size() != alloc.powers_w.size()) {
        throw ValidationError("per_user_rates: gains and powers_w length mismatch");
    }
    const auto order = descending_gain_order(gains.gains);
    const std::size_t n_users = order.size();

    // Interference seen by the k-th strongest user is the weighted power of
    // everyone decoded after it.
    std::vector<double> rates(n_users, 0.0);
    double tail_weighted = 0.0;
    for (std::size_t k = n_users; k-- > 0;) {
        const std::size_t idx = order[k];
        const double own = alloc.powers_w[idx] * gains.gains[idx];
        rates[idx] = std::log2(1.0 + own / (tail_weighted + s.noise_power_w));
        tail_weighted += own;
    }
    return rates;
}

double sum_rate_noma(const ChannelGains& gains, const PowerAllocation& alloc,
                     const Scenario& s) {
    if (gains.size() != alloc.powers_w.size()) {
        throw ValidationError("sum_rate_noma: gains and powers_w length mismatch");
    }
    double weighted = 0.0;
    for (std::size_t n = 0; n < gains.size(); ++n) {
        weighted += alloc.powers_w[n] * gains.gains[n];
    }
    return std::log2(1.0 + weighted / s.noise_power_w);
}

double energy_efficiency(const ChannelGains& gains, const PowerAllocation& alloc,
                         const Scenario& s) {
    return sum_rate_noma(gains, alloc, s) / (s.fixed_power_w + alloc.total_w());
}

} // namespace pinchopt
