#ifndef WPCS_WPT_HPP
#define WPCS_WPT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "wpcs/rng.hpp"

namespace wpcs {

inline constexpr double speed_of_light_mps = 299792458.0;

inline double dbm_to_w(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double w_to_dbm(double w) { return 10.0 * std::log10(w * 1e3); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct LinkBudgetParams {
    double frequency_hz = 915e6;
    double tx_power_dbm = 30.0; // 1 W
    double tx_gain_omni_dbi = 0.0;
    double tx_gain_dir_dbi = 16.0;
    double rx_gain_dbi = 0.0;
    double sensitivity_dbm = -20.0;
    double conversion_efficiency = 0.30;
    double min_distance_m = 0.5; // near-field clamp

    void validate() const {
        if (frequency_hz <= 0) throw std::invalid_argument("frequency_hz must be positive");
        if (conversion_efficiency <= 0 || conversion_efficiency > 1)
            throw std::invalid_argument("conversion_efficiency must lie in (0,1]");
        if (min_distance_m <= 0) throw std::invalid_argument("min_distance_m must be positive");
    }
};

enum class AntennaKind { Omni, Directional };

inline constexpr int directional_max_beams = 6;

/// Power transmitter: fixed position or mounted on a carrier vehicle.
struct Beacon {
    int id = -1;
    double x = 0, y = 0;
    double height_m = 3.0;
    AntennaKind antenna = AntennaKind::Omni;
    int max_beams = directional_max_beams;
    int carrier_agent = -1; // agent id when vehicle-mounted, else -1

    bool mobile() const { return carrier_agent >= 0; }
};

/// Human-body blocker geometry for the LoS link between a beacon at
/// beacon_height and a worn device at device_height.
struct BlockageGeometry {
    double beacon_height_m = 3.0;
    double device_height_m = 1.2;
    double blocker_height_m = 1.7;
    double body_diameter_m = 0.4;
    double blocker_density_per_m2 = 0.0;

    void validate() const {
        if (!(device_height_m < blocker_height_m && blocker_height_m < beacon_height_m))
            throw std::invalid_argument(
                "heights must satisfy device < blocker < beacon");
        if (body_diameter_m <= 0) throw std::invalid_argument("body_diameter_m must be positive");
        if (blocker_density_per_m2 < 0)
            throw std::invalid_argument("blocker density must be non-negative");
    }

    /// Fraction of the 2D link length over which the ray is below blocker
    /// height: (h_blk - h_dev) / (h_bcn - h_dev).
    double height_fraction() const {
        return (blocker_height_m - device_height_m) / (beacon_height_m - device_height_m);
    }
};

/// Free-space path loss in dB; distances below the clamp evaluate at the clamp.
inline double fspl_db(double d_m, double frequency_hz, double d_min_m = 0.5) {
    const double d = std::max(d_m, d_min_m);
    return 20.0 * std::log10(4.0 * M_PI * d * frequency_hz / speed_of_light_mps);
}

inline double rx_power_dbm(const LinkBudgetParams& p, double tx_gain_dbi, double d3d_m) {
    return p.tx_power_dbm + tx_gain_dbi + p.rx_gain_dbi -
           fspl_db(d3d_m, p.frequency_hz, p.min_distance_m);
}

/// Ground-plane coverage radius for a transmitter elevated dh_m above the
/// device plane; 0 when even the shortest link is below sensitivity.
inline double coverage_radius_2d(const LinkBudgetParams& p, double tx_gain_dbi,
                                 double dh_m) {
    const double max_fspl =
        p.tx_power_dbm + tx_gain_dbi + p.rx_gain_dbi - p.sensitivity_dbm;
    const double d3d_max = std::pow(10.0, max_fspl / 20.0) * speed_of_light_mps /
                           (4.0 * M_PI * p.frequency_hz);
    if (d3d_max < dh_m) return 0.0;
    return std::sqrt(d3d_max * d3d_max - dh_m * dh_m);
}

/// Probability that at least one body of a Poisson field blocks the below-
/// blocker-height part of the beacon->device ray. The wearer's own footprint
/// (half a body diameter around the device) is excluded.
inline double blockage_probability(double d2d_m, const BlockageGeometry& g) {
    if (d2d_m < 0) throw std::invalid_argument("d2d_m must be non-negative");
    const double body_radius = 0.5 * g.body_diameter_m;
    const double l_eff = std::max(0.0, g.height_fraction() * d2d_m - body_radius);
    return 1.0 - std::exp(-g.blocker_density_per_m2 * g.body_diameter_m * l_eff);
}

/// Candidate for directional beam assignment; assumed within coverage.
struct BeamCandidate {
    int device_id = -1;
    double d2d_m = 0;
    double d3d_m = 0;
};

/// Up to max_beams candidates whose per-step LoS draw succeeds, nearest
/// (3D) first, ties by device id.
template <class RngT>
inline std::vector<int> assign_beams(const Beacon& beacon,
                                     std::span<const BeamCandidate> candidates,
                                     const BlockageGeometry& geom, RngT&& rng) {
    if (beacon.antenna != AntennaKind::Directional)
        throw std::invalid_argument("assign_beams requires a directional beacon");
    std::vector<BeamCandidate> unblocked;
    unblocked.reserve(candidates.size());
    for (const auto& c : candidates)
        if (!rng.bernoulli(blockage_probability(c.d2d_m, geom))) unblocked.push_back(c);
    std::sort(unblocked.begin(), unblocked.end(), [](const auto& a, const auto& b) {
        if (a.d3d_m != b.d3d_m) return a.d3d_m < b.d3d_m;
        return a.device_id < b.device_id;
    });
    if (static_cast<int>(unblocked.size()) > beacon.max_beams)
        unblocked.resize(static_cast<std::size_t>(beacon.max_beams));
    std::vector<int> ids;
    ids.reserve(unblocked.size());
    for (const auto& c : unblocked) ids.push_back(c.device_id);
    return ids;
}

/// Harvested watts for one served link; 0 below sensitivity (gating).
inline double harvested_from_link_w(const LinkBudgetParams& p, double tx_gain_dbi,
                                    double d3d_m) {
    const double prx_dbm = rx_power_dbm(p, tx_gain_dbi, d3d_m);
    if (prx_dbm < p.sensitivity_dbm) return 0.0;
    return p.conversion_efficiency * dbm_to_w(prx_dbm);
}

/// Per-beacon beam sets for one step, indexed by beacon id.
using BeamMap = std::vector<std::vector<int>>;

/// Sum of converted power over all serving beacons for one device position.
/// Omni beacons serve any in-range device passing its LoS draw; directional
/// beacons serve exactly their assigned beam set.
template <class RngT>
inline double harvested_power_w(double dev_x, double dev_y, double dev_h, int device_id,
                                std::span<const Beacon> beacons,
                                const LinkBudgetParams& p, const BlockageGeometry& geom,
                                RngT&& rng, const BeamMap& beam_map) {
    double total = 0;
    for (const auto& b : beacons) {
        const double dx = b.x - dev_x, dy = b.y - dev_y, dz = b.height_m - dev_h;
        const double d2d = std::hypot(dx, dy);
        const double d3d = std::sqrt(d2d * d2d + dz * dz);
        if (b.antenna == AntennaKind::Omni) {
            const double w = harvested_from_link_w(p, p.tx_gain_omni_dbi, d3d);
            if (w <= 0) continue;
            if (rng.bernoulli(blockage_probability(d2d, geom))) continue;
            total += w;
        } else {
            const auto& beams = beam_map.at(static_cast<std::size_t>(b.id));
            if (std::find(beams.begin(), beams.end(), device_id) == beams.end()) continue;
            total += harvested_from_link_w(p, p.tx_gain_dir_dbi, d3d);
        }
    }
    return total;
}

} // namespace wpcs

#endif
