#ifndef WPCS_DEVICE_HPP
#define WPCS_DEVICE_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace wpcs {

inline constexpr double sleep_power_w = 1e-6;
inline constexpr double battery_capacity_default_j = 37.7;

enum class RadioKind { Ble, Lora, Zigbee };

/// Report radio. Transmission time follows the affine-in-payload model
/// t_ms = intercept + (D + header) / rate.
struct RadioSpec {
    RadioKind kind = RadioKind::Ble;
    double intercept_ms = 0;
    double header_bytes = 0;
    double rate_bytes_per_ms = 1;
    double tx_power_w = 0;
    double report_period_s = 5.0;
    double payload_bytes = 32.0;

    static RadioSpec make(RadioKind kind) {
        RadioSpec r;
        r.kind = kind;
        switch (kind) {
        case RadioKind::Ble: // Bluetooth Smart, advertisement channels
            r.intercept_ms = 0.15; r.header_bytes = 10; r.rate_bytes_per_ms = 125;
            r.tx_power_w = 18.3e-3;
            break;
        case RadioKind::Lora: // LoRaWAN at its highest rate
            r.intercept_ms = 0.215; r.header_bytes = 23; r.rate_bytes_per_ms = 6.25;
            r.tx_power_w = 40e-3;
            break;
        case RadioKind::Zigbee: // IEEE 802.15.4 2450 DSSS PHY
            r.intercept_ms = 1.0; r.header_bytes = 15; r.rate_bytes_per_ms = 31.25;
            r.tx_power_w = 18.3e-3;
            break;
        }
        return r;
    }
};

inline double tx_time_s(const RadioSpec& radio, double payload_bytes) {
    if (payload_bytes < 0) throw std::invalid_argument("payload_bytes must be non-negative");
    return 1e-3 * (radio.intercept_ms +
                   (payload_bytes + radio.header_bytes) / radio.rate_bytes_per_ms);
}

inline double report_energy_j(const RadioSpec& radio, double payload_bytes) {
    return radio.tx_power_w * tx_time_s(radio, payload_bytes);
}

/// Duty-cycled sensor. Consumption enters the step loop as average power;
/// the burst itself is far shorter than any step.
struct SensorSpec {
    std::string name;
    double active_power_w = 0;
    double active_time_s = 0;
    double period_s = 1;
    bool collective = false;

    double avg_power_w() const { return active_power_w * active_time_s / period_s; }

    void validate() const {
        if (!(active_time_s > 0 && active_time_s <= period_s))
            throw std::invalid_argument("sensor requires 0 < active_time_s <= period_s");
        if (active_power_w < 0) throw std::invalid_argument("sensor power must be non-negative");
    }

    static SensorSpec pedometer() {
        return {"pedometer", 28.5e-6, 1.0, 1.0, false};
    }
    static SensorSpec gas_voc() {
        return {"gas_voc", 32e-3, 25e-3, 100.0, true};
    }
};

enum class Policy { Default, Always, Policy1, Policy2 };

/// Wearable energy state: battery plus the harvested-energy credit ledger
/// that the participation policies spend.
struct DeviceState {
    double capacity_j = battery_capacity_default_j;
    double battery_j = battery_capacity_default_j;
    double credit_j = 0;
    SensorSpec personal = SensorSpec::pedometer();
    SensorSpec collective = SensorSpec::gas_voc();
    RadioSpec radio = RadioSpec::make(RadioKind::Ble);
    Policy policy = Policy::Default;
    bool collective_active = false;
    long collective_scheduled = 0;
    long collective_delivered = 0;
    bool alive = true;
    double depletion_time_s = -1; // < 0: never depleted

    static DeviceState make(RadioKind radio, Policy policy,
                            double capacity_j = battery_capacity_default_j) {
        DeviceState d;
        d.capacity_j = d.battery_j = capacity_j;
        d.radio = RadioSpec::make(radio);
        d.policy = policy;
        d.collective_active = policy == Policy::Always;
        return d;
    }
};

/// Average report power of one 32 B stream: energy per report / period.
inline double report_avg_power_w(const RadioSpec& radio) {
    return report_energy_j(radio, radio.payload_bytes) / radio.report_period_s;
}

/// Personal-side mean consumption: sleep + personal sensing + its report stream.
inline double personal_mean_consumption_w(const DeviceState& d) {
    return sleep_power_w + d.personal.avg_power_w() + report_avg_power_w(d.radio);
}

/// Collective-side mean consumption while active: sensing + its report stream.
inline double collective_mean_consumption_w(const DeviceState& d) {
    return d.collective.avg_power_w() + report_avg_power_w(d.radio);
}

/// Discharge rate under the current activation state.
inline double mean_consumption_w(const DeviceState& d) {
    double w = personal_mean_consumption_w(d);
    if (d.collective_active) w += collective_mean_consumption_w(d);
    return w;
}

/// Credit needed to run the collective sensor for one sensing period.
inline double collective_window_energy_j(const DeviceState& d) {
    const double sensing = d.collective.active_power_w * d.collective.active_time_s;
    const double reports_per_window = d.collective.period_s / d.radio.report_period_s;
    return sensing + 2.0 * reports_per_window * report_energy_j(d.radio, d.radio.payload_bytes);
}

/// Credit needed for the personal side over one collective period.
inline double personal_window_energy_j(const DeviceState& d) {
    return personal_mean_consumption_w(d) * d.collective.period_s;
}

/// Decide collective activation for the window starting now; policies 1 and 2
/// spend credit on activation. Returns the new activation state.
inline bool policy_gate(DeviceState& d) {
    switch (d.policy) {
    case Policy::Default:
        d.collective_active = false;
        return false;
    case Policy::Always:
        ++d.collective_scheduled;
        ++d.collective_delivered;
        d.collective_active = true;
        return true;
    case Policy::Policy1: {
        ++d.collective_scheduled;
        const double need = collective_window_energy_j(d);
        d.collective_active = d.credit_j >= need;
        if (d.collective_active) {
            d.credit_j -= need;
            ++d.collective_delivered;
        }
        return d.collective_active;
    }
    case Policy::Policy2: {
        ++d.collective_scheduled;
        const double need = collective_window_energy_j(d) + personal_window_energy_j(d);
        d.collective_active = d.credit_j >= need;
        if (d.collective_active) {
            d.credit_j -= need;
            ++d.collective_delivered;
        }
        return d.collective_active;
    }
    }
    return false;
}

namespace detail {
/// Count of multiples of `period` inside (clock, clock+dt], with relative
/// tolerance so epochs fire exactly on accumulated-float boundaries.
inline long events_in(double clock_s, double dt_s, double period_s) {
    const auto idx = [period_s](double t) {
        return static_cast<long>(std::floor(t / period_s + 1e-9));
    };
    return idx(clock_s + dt_s) - idx(clock_s);
}
} // namespace detail

/// Advance the battery over [clock, clock+dt): continuous sleep+sensing
/// drain, discrete report deductions every report period, harvest credited
/// to both the battery and the credit ledger (both capped at capacity).
/// Returns the energy consumed during the step.
inline double step_energy(DeviceState& d, double harvested_w, double dt_s,
                          double clock_s) {
    if (dt_s <= 0) throw std::invalid_argument("dt_s must be positive");
    if (!d.alive) return 0.0;

    double drain_w = sleep_power_w + d.personal.avg_power_w();
    if (d.collective_active) drain_w += d.collective.avg_power_w();

    const long n_reports = detail::events_in(clock_s, dt_s, d.radio.report_period_s);
    const double e_report = report_energy_j(d.radio, d.radio.payload_bytes);
    const int streams = d.collective_active ? 2 : 1;

    const double consumed_j =
        drain_w * dt_s + static_cast<double>(n_reports * streams) * e_report;
    const double harvested_j = harvested_w * dt_s;

    d.credit_j = std::min(d.credit_j + harvested_j, d.capacity_j);
    d.battery_j += harvested_j - consumed_j;
    if (d.battery_j <= 0) {
        d.battery_j = 0;
        d.alive = false;
        d.depletion_time_s = clock_s + dt_s;
    } else if (d.battery_j > d.capacity_j) {
        d.battery_j = d.capacity_j;
    }
    return consumed_j;
}

} // namespace wpcs

#endif
