#ifndef WPCS_METRICS_HPP
#define WPCS_METRICS_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpcs {

/// Per-device outcome of one replication.
struct DeviceResult {
    double mean_harvested_w = 0; // time average while alive
    double mean_consumed_w = 0;
    double depletion_time_s = -1; // < 0: survived the horizon
    double tail_net_j = 0;        // net energy over the final 20% of the horizon
    long collective_scheduled = 0;
    long collective_delivered = 0;

    bool depleted() const { return depletion_time_s >= 0; }
};

/// One replication's metric bundle.
struct RunRecord {
    int replication = 0;
    std::uint64_t seed = 0;
    double horizon_s = 0;
    double dt_s = 0;
    double pedestrian_zone_area_m2 = 0;
    std::vector<DeviceResult> devices;
    // decimated mean state-of-charge trace (one sample per trace_stride_s)
    std::vector<double> soc_trace_j;
    double trace_stride_s = 0;
};

enum class LifetimeKind { Depleted, Sustainable, Censored };

struct Lifetime {
    double seconds = 0;
    LifetimeKind kind = LifetimeKind::Censored;
};

/// Depletion time if the battery hit zero; otherwise sustainable when the
/// mean net power over the final 20% of the horizon is non-negative, else
/// right-censored at the horizon.
inline Lifetime lifetime_of(const RunRecord& run, const DeviceResult& dev) {
    if (dev.depleted()) return {dev.depletion_time_s, LifetimeKind::Depleted};
    if (run.horizon_s > 0 && dev.tail_net_j >= 0)
        return {run.horizon_s, LifetimeKind::Sustainable};
    return {run.horizon_s, LifetimeKind::Censored};
}

/// Time-average, then user-average, then replication-average.
inline double mean_harvested_power(std::span<const RunRecord> records) {
    if (records.empty()) throw std::invalid_argument("no records");
    double rep_sum = 0;
    for (const auto& r : records) {
        double dev_sum = 0;
        for (const auto& d : r.devices) dev_sum += d.mean_harvested_w;
        rep_sum += r.devices.empty() ? 0.0 : dev_sum / static_cast<double>(r.devices.size());
    }
    return rep_sum / static_cast<double>(records.size());
}

inline double mean_consumed_power(std::span<const RunRecord> records) {
    if (records.empty()) throw std::invalid_argument("no records");
    double rep_sum = 0;
    for (const auto& r : records) {
        double dev_sum = 0;
        for (const auto& d : r.devices) dev_sum += d.mean_consumed_w;
        rep_sum += r.devices.empty() ? 0.0 : dev_sum / static_cast<double>(r.devices.size());
    }
    return rep_sum / static_cast<double>(records.size());
}

/// Mean lifetime with sustainable/censored devices entering at the horizon.
inline double mean_lifetime_s(std::span<const RunRecord> records) {
    double total = 0;
    long n = 0;
    for (const auto& r : records)
        for (const auto& d : r.devices) {
            total += lifetime_of(r, d).seconds;
            ++n;
        }
    if (n == 0) throw std::invalid_argument("no devices");
    return total / static_cast<double>(n);
}

inline double sustainable_fraction(std::span<const RunRecord> records) {
    long sustainable = 0, n = 0;
    for (const auto& r : records)
        for (const auto& d : r.devices) {
            if (lifetime_of(r, d).kind == LifetimeKind::Sustainable) ++sustainable;
            ++n;
        }
    if (n == 0) throw std::invalid_argument("no devices");
    return static_cast<double>(sustainable) / static_cast<double>(n);
}

/// Mean WPCS lifetime over mean baseline lifetime; censored/sustainable
/// lifetimes are capped at the horizon.
inline double lifetime_gain(std::span<const RunRecord> wpcs_records,
                            std::span<const RunRecord> default_records) {
    const double base = mean_lifetime_s(default_records);
    if (!(base > 0)) throw std::invalid_argument("baseline lifetime must be positive");
    return mean_lifetime_s(wpcs_records) / base;
}

/// Delivered over scheduled collective measurements, pooled across devices.
inline double data_share(std::span<const RunRecord> records) {
    long delivered = 0, scheduled = 0;
    for (const auto& r : records)
        for (const auto& d : r.devices) {
            delivered += d.collective_delivered;
            scheduled += d.collective_scheduled;
        }
    if (scheduled == 0) return 0.0;
    return static_cast<double>(delivered) / static_cast<double>(scheduled);
}

/// One point of a sweep with replication records attached.
struct SweepPoint {
    double axis_value = 0;
    std::vector<RunRecord> records;
};

/// Smallest sweep value with at least 95% of devices sustainable.
inline std::optional<double> sustainability_density(std::span<const SweepPoint> sweep,
                                                    double required_fraction = 0.95) {
    for (const auto& p : sweep)
        if (sustainable_fraction(p.records) >= required_fraction) return p.axis_value;
    return std::nullopt;
}

/// Normal-approximation 95% half-width over per-replication means.
inline double confidence_halfwidth(std::span<const double> per_replication) {
    const auto n = per_replication.size();
    if (n < 2) return 0.0;
    double mean = 0;
    for (double v : per_replication) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0;
    for (double v : per_replication) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return 1.96 * sd / std::sqrt(static_cast<double>(n));
}

} // namespace wpcs

#endif
