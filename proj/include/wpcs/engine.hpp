#ifndef WPCS_ENGINE_HPP
#define WPCS_ENGINE_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "wpcs/city.hpp"
#include "wpcs/device.hpp"
#include "wpcs/metrics.hpp"
#include "wpcs/mobility.hpp"
#include "wpcs/rng.hpp"
#include "wpcs/wpt.hpp"

namespace wpcs {

enum class LayoutKind { Manhattan, Random };
enum class BeaconMode { StaticRegular, StaticRandom, Mobile };

struct ScenarioConfig {
    LayoutKind layout = LayoutKind::Manhattan;
    double area_side_m = 400;
    double block_m = 100;
    double block_jitter_frac = 0.3;
    double street_width_m = 20;
    double road_width_m = 5;

    BeaconMode beacon_mode = BeaconMode::StaticRegular;
    int beacon_count = 16;
    AntennaKind antenna = AntennaKind::Omni;

    RadioKind radio = RadioKind::Ble;
    Policy policy = Policy::Always;
    int participants = 100;
    int background_vehicles = 0;
    double participation_frac = 0.1; // participants as a share of population

    double dt_s = 1.0;
    double horizon_s = 30.0 * 86400.0;
    int replications = 1;
    std::uint64_t master_seed = 1;

    LinkBudgetParams link;
    double battery_capacity_j = battery_capacity_default_j;
    double payload_bytes = 32;
    double report_period_s = 5.0;
    double beacon_height_m = 3.0;
    double device_height_m = 1.2;
    double blocker_height_m = 1.7;
    double body_diameter_m = 0.4;

    void validate() const {
        if (beacon_count < 0 || background_vehicles < 0 || replications < 1)
            throw std::invalid_argument("counts must be non-negative, replications >= 1");
        if (participants < 1) throw std::invalid_argument("participants must be positive");
        if (dt_s <= 0) throw std::invalid_argument("dt_s must be positive");
        if (horizon_s < 0) throw std::invalid_argument("horizon_s must be non-negative");
        if (participation_frac <= 0 || participation_frac > 1)
            throw std::invalid_argument("participation_frac must lie in (0,1]");
        if (area_side_m <= 0 || block_m <= 0 || street_width_m <= 0 || road_width_m <= 0)
            throw std::invalid_argument("layout dimensions must be positive");
        if (road_width_m >= street_width_m)
            throw std::invalid_argument("road_width_m must be smaller than street_width_m");
        if (area_side_m < block_m + street_width_m)
            throw std::invalid_argument("area_side_m must be at least block_m + street_width_m");
        if (layout == LayoutKind::Random && (block_jitter_frac < 0 || block_jitter_frac >= 1))
            throw std::invalid_argument("block_jitter_frac must lie in [0,1)");
        if (battery_capacity_j <= 0) throw std::invalid_argument("battery capacity must be positive");
        link.validate();
        blockage_geometry(1.0).validate();
    }

    BlockageGeometry blockage_geometry(double pedestrian_area_m2) const {
        BlockageGeometry g;
        g.beacon_height_m = beacon_height_m;
        g.device_height_m = device_height_m;
        g.blocker_height_m = blocker_height_m;
        g.body_diameter_m = body_diameter_m;
        g.blocker_density_per_m2 =
            static_cast<double>(participants) / participation_frac / pedestrian_area_m2;
        return g;
    }

    DeviceState make_device() const {
        DeviceState d = DeviceState::make(radio, policy, battery_capacity_j);
        d.radio.payload_bytes = payload_bytes;
        d.radio.report_period_s = report_period_s;
        return d;
    }
};

namespace detail {

/// (segment, side, arc) for a position along the concatenated boundary
/// chain: both sides of every segment, in id order, +1 side first.
struct BoundaryPos {
    int segment_id;
    int side;
    double arc_s;
};

inline BoundaryPos boundary_at(const CityLayout& city, double s) {
    for (const auto& seg : city.segments) {
        const double len = seg.length();
        if (s < len) return {seg.id, 1, s};
        s -= len;
        if (s < len) return {seg.id, -1, s};
        s -= len;
    }
    const auto& last = city.segments.back();
    return {last.id, -1, last.length()};
}

inline Beacon boundary_beacon(const CityLayout& city, int id, double s, double height,
                              AntennaKind antenna) {
    const BoundaryPos p = boundary_at(city, s);
    Beacon b;
    b.id = id;
    b.height_m = height;
    b.antenna = antenna;
    point_on_sidewalk(city, p.segment_id, p.side, p.arc_s, b.x, b.y);
    return b;
}

/// Uniform bucket grid for beacon proximity queries; cell size must be at
/// least the query radius so a 3x3 neighborhood suffices.
class SpatialGrid {
public:
    void reset(double area_side, double cell) {
        cell_ = std::max(cell, 1.0);
        n_ = std::max(1, static_cast<int>(area_side / cell_));
        cell_ = area_side / n_;
        inv_ = 1.0 / cell_;
        area_ = area_side;
        buckets_.assign(static_cast<std::size_t>(n_) * n_, {});
        touched_.clear();
    }

    void clear() {
        for (int c : touched_) buckets_[static_cast<std::size_t>(c)].clear();
        touched_.clear();
    }

    void insert(double x, double y, int id) {
        const int c = cell_index(x, y);
        auto& b = buckets_[static_cast<std::size_t>(c)];
        if (b.empty()) touched_.push_back(c);
        b.push_back(id);
    }

    template <class F>
    void for_near(double x, double y, F&& f) const {
        const int cx = clamp_axis(x), cy = clamp_axis(y);
        for (int dy = -1; dy <= 1; ++dy) {
            const int yy = cy + dy;
            if (yy < 0 || yy >= n_) continue;
            for (int dx = -1; dx <= 1; ++dx) {
                const int xx = cx + dx;
                if (xx < 0 || xx >= n_) continue;
                for (int id : buckets_[static_cast<std::size_t>(yy) * n_ + xx]) f(id);
            }
        }
    }

private:
    int clamp_axis(double v) const {
        int i = static_cast<int>(v * inv_);
        return std::clamp(i, 0, n_ - 1);
    }
    int cell_index(double x, double y) const { return clamp_axis(y) * n_ + clamp_axis(x); }

    double cell_ = 1, inv_ = 1, area_ = 1;
    int n_ = 1;
    std::vector<std::vector<int>> buckets_;
    std::vector<int> touched_;
};

} // namespace detail

/// Beacons at equal spacing along the concatenated boundary chain,
/// alternating street sides as the chain interleaves them.
inline std::vector<Beacon> deploy_static_regular(const CityLayout& city, int count,
                                                 AntennaKind antenna,
                                                 double height_m = 3.0) {
    if (count < 0) throw std::invalid_argument("beacon count must be non-negative");
    std::vector<Beacon> beacons;
    if (count == 0) return beacons;
    const double total = total_sidewalk_length(city);
    const double spacing = total / count;
    beacons.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        beacons.push_back(detail::boundary_beacon(city, i, i * spacing, height_m, antenna));
    return beacons;
}

/// Beacons i.i.d. uniform over the boundary chain.
inline std::vector<Beacon> deploy_static_random(const CityLayout& city, int count,
                                                AntennaKind antenna, Rng& rng,
                                                double height_m = 3.0) {
    if (count < 0) throw std::invalid_argument("beacon count must be non-negative");
    std::vector<Beacon> beacons;
    const double total = total_sidewalk_length(city);
    beacons.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        beacons.push_back(
            detail::boundary_beacon(city, i, rng.uniform() * total, height_m, antenna));
    return beacons;
}

/// One carrier vehicle per beacon; the beacon rides at the given height and
/// tracks its carrier every step.
inline std::pair<std::vector<Agent>, std::vector<Beacon>>
deploy_mobile(const CityLayout& city, int count, AntennaKind antenna, Rng& rng,
              int first_agent_id, double height_m = 3.0) {
    if (count < 0) throw std::invalid_argument("beacon count must be non-negative");
    std::vector<Agent> vehicles = spawn_agents(city, 0, count, rng);
    std::vector<Beacon> beacons;
    beacons.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        vehicles[static_cast<std::size_t>(i)].id = first_agent_id + i;
        Beacon b;
        b.id = i;
        b.height_m = height_m;
        b.antenna = antenna;
        b.carrier_agent = first_agent_id + i;
        double h;
        position3d(vehicles[static_cast<std::size_t>(i)], city, height_m, b.x, b.y, h);
        beacons.push_back(b);
    }
    return {std::move(vehicles), std::move(beacons)};
}

namespace detail {

struct DeviceAccum {
    double harvested_j = 0;
    double consumed_j = 0;
    double alive_time_s = 0;
    double tail_net_j = 0;
};

struct LinkCoeffs {
    double k_lin = 0;      // Prx = k_lin / d3d^2 [W m^2]
    double sens_w = 0;
    double d3d_max_sq = 0; // in-range iff d3d^2 <= d3d_max_sq
    double r2d_cov_sq = 0; // ground-plane coverage radius squared
    double dh = 0;         // beacon height - device height
    double dmin_sq = 0;
};

inline LinkCoeffs link_coeffs(const LinkBudgetParams& p, double tx_gain_dbi, double dh) {
    LinkCoeffs c;
    const double wavelength_term = speed_of_light_mps / (4.0 * M_PI * p.frequency_hz);
    c.k_lin = dbm_to_w(p.tx_power_dbm) * db_to_linear(tx_gain_dbi + p.rx_gain_dbi) *
              wavelength_term * wavelength_term;
    c.sens_w = dbm_to_w(p.sensitivity_dbm);
    c.dmin_sq = p.min_distance_m * p.min_distance_m;
    const double max_sq = c.k_lin / c.sens_w;
    // power at the clamp distance is the ceiling; no coverage if even that
    // falls below sensitivity
    c.d3d_max_sq = std::max(max_sq, 0.0);
    if (c.k_lin / std::max(c.dmin_sq, 1e-12) < c.sens_w) c.d3d_max_sq = 0.0;
    c.dh = dh;
    c.r2d_cov_sq = c.d3d_max_sq - dh * dh;
    return c;
}

} // namespace detail

/// Run one replication. Fully deterministic given (config, replication).
inline RunRecord run(const ScenarioConfig& cfg, int replication) {
    cfg.validate();
    const auto seed_of = [&](std::uint64_t subsystem) {
        return stream_seed(cfg.master_seed, static_cast<std::uint64_t>(replication),
                           subsystem);
    };

    // layout (random kind regenerated per replication)
    CityLayout city;
    if (cfg.layout == LayoutKind::Manhattan) {
        city = generate_manhattan(cfg.area_side_m, cfg.block_m, cfg.street_width_m,
                                  cfg.road_width_m);
    } else {
        Rng layout_rng(seed_of(stream::layout));
        city = generate_random_layout(cfg.area_side_m, cfg.block_m, cfg.block_jitter_frac,
                                      cfg.street_width_m, cfg.road_width_m, layout_rng);
    }

    Rng spawn_rng(seed_of(stream::spawn));
    std::vector<Agent> agents =
        spawn_agents(city, cfg.participants, cfg.background_vehicles, spawn_rng);

    std::vector<Beacon> beacons;
    switch (cfg.beacon_mode) {
    case BeaconMode::StaticRegular:
        beacons = deploy_static_regular(city, cfg.beacon_count, cfg.antenna,
                                        cfg.beacon_height_m);
        break;
    case BeaconMode::StaticRandom: {
        Rng deploy_rng(seed_of(stream::deploy));
        beacons = deploy_static_random(city, cfg.beacon_count, cfg.antenna, deploy_rng,
                                       cfg.beacon_height_m);
        break;
    }
    case BeaconMode::Mobile: {
        Rng deploy_rng(seed_of(stream::deploy));
        auto [vehicles, mobile] =
            deploy_mobile(city, cfg.beacon_count, cfg.antenna, deploy_rng,
                          static_cast<int>(agents.size()), cfg.beacon_height_m);
        agents.insert(agents.end(), vehicles.begin(), vehicles.end());
        beacons = std::move(mobile);
        break;
    }
    }

    const int n_devices = cfg.participants;
    std::vector<DeviceState> devices(static_cast<std::size_t>(n_devices));
    for (auto& d : devices) d = cfg.make_device();
    std::vector<detail::DeviceAccum> accum(static_cast<std::size_t>(n_devices));

    const BlockageGeometry geom = cfg.blockage_geometry(city.pedestrian_zone_area_m2);
    const double tx_gain = cfg.antenna == AntennaKind::Omni ? cfg.link.tx_gain_omni_dbi
                                                            : cfg.link.tx_gain_dir_dbi;
    const detail::LinkCoeffs lc =
        detail::link_coeffs(cfg.link, tx_gain, cfg.beacon_height_m - cfg.device_height_m);
    const double eta = cfg.link.conversion_efficiency;
    const double r_cov = lc.r2d_cov_sq > 0 ? std::sqrt(lc.r2d_cov_sq) : 0.0;
    const double f_h = geom.height_fraction();
    const double body_r = 0.5 * geom.body_diameter_m;
    const double blk_rate = geom.blocker_density_per_m2 * geom.body_diameter_m;
    const std::uint64_t blk_seed = seed_of(stream::blockage);
    const bool directional = cfg.antenna == AntennaKind::Directional;

    Rng mobility_rng(seed_of(stream::mobility));

    const long n_steps = static_cast<long>(std::floor(cfg.horizon_s / cfg.dt_s + 1e-9));
    const double tail_start_s = 0.8 * cfg.horizon_s;

    RunRecord rec;
    rec.replication = replication;
    rec.seed = seed_of(0);
    rec.horizon_s = cfg.horizon_s;
    rec.dt_s = cfg.dt_s;
    rec.pedestrian_zone_area_m2 = city.pedestrian_zone_area_m2;

    const long trace_every = std::max(1L, n_steps / 512);
    rec.trace_stride_s = static_cast<double>(trace_every) * cfg.dt_s;

    detail::SpatialGrid grid;
    if (!beacons.empty() && r_cov > 0) {
        grid.reset(cfg.area_side_m, std::max(r_cov, 8.0));
        for (const auto& b : beacons) grid.insert(b.x, b.y, b.id);
    }
    const bool any_coverage = !beacons.empty() && r_cov > 0;

    std::vector<double> dev_x(static_cast<std::size_t>(n_devices));
    std::vector<double> dev_y(static_cast<std::size_t>(n_devices));
    std::vector<double> harvest_w(static_cast<std::size_t>(n_devices), 0.0);

    struct BeamEntry {
        int device_id;
        double d3d_sq;
    };
    std::vector<std::vector<BeamEntry>> beam_cands;
    if (directional) beam_cands.resize(beacons.size());

    const double epoch_period = devices.empty() ? 100.0 : devices[0].collective.period_s;
    double next_epoch = 0.0;

    const auto p_blocked = [&](double d2d) {
        const double l_eff = f_h * d2d - body_r;
        if (l_eff <= 0 || blk_rate <= 0) return 0.0;
        return 1.0 - std::exp(-blk_rate * l_eff);
    };

    for (long step = 0; step < n_steps; ++step) {
        const double t = static_cast<double>(step) * cfg.dt_s;

        // collective-epoch policy gates
        while (t >= next_epoch - 1e-9 * std::max(1.0, next_epoch)) {
            for (auto& d : devices)
                if (d.alive) policy_gate(d);
            next_epoch += epoch_period;
        }

        for (auto& a : agents) advance(a, city, cfg.dt_s, mobility_rng);

        if (any_coverage) {
            if (cfg.beacon_mode == BeaconMode::Mobile) {
                grid.clear();
                for (auto& b : beacons) {
                    double h;
                    position3d(agents[static_cast<std::size_t>(b.carrier_agent)], city,
                               b.height_m, b.x, b.y, h);
                    grid.insert(b.x, b.y, b.id);
                }
            }
            for (int i = 0; i < n_devices; ++i) {
                if (!devices[static_cast<std::size_t>(i)].alive) continue;
                double h;
                position3d(agents[static_cast<std::size_t>(i)], city, cfg.device_height_m,
                           dev_x[static_cast<std::size_t>(i)],
                           dev_y[static_cast<std::size_t>(i)], h);
            }
            std::fill(harvest_w.begin(), harvest_w.end(), 0.0);

            if (directional) {
                for (auto& v : beam_cands) v.clear();
                for (int i = 0; i < n_devices; ++i) {
                    if (!devices[static_cast<std::size_t>(i)].alive) continue;
                    const double x = dev_x[static_cast<std::size_t>(i)];
                    const double y = dev_y[static_cast<std::size_t>(i)];
                    grid.for_near(x, y, [&](int bid) {
                        const auto& b = beacons[static_cast<std::size_t>(bid)];
                        const double dx = b.x - x, dy = b.y - y;
                        const double d2d_sq = dx * dx + dy * dy;
                        if (d2d_sq > lc.r2d_cov_sq) return;
                        const double u = link_uniform(blk_seed, static_cast<std::uint64_t>(step),
                                                      static_cast<std::uint64_t>(bid),
                                                      static_cast<std::uint64_t>(i));
                        if (u < p_blocked(std::sqrt(d2d_sq))) return;
                        beam_cands[static_cast<std::size_t>(bid)].push_back(
                            {i, d2d_sq + lc.dh * lc.dh});
                    });
                }
                for (std::size_t bi = 0; bi < beacons.size(); ++bi) {
                    auto& cands = beam_cands[bi];
                    const int budget = beacons[bi].max_beams;
                    if (static_cast<int>(cands.size()) > budget) {
                        std::sort(cands.begin(), cands.end(),
                                  [](const BeamEntry& a, const BeamEntry& b) {
                                      if (a.d3d_sq != b.d3d_sq) return a.d3d_sq < b.d3d_sq;
                                      return a.device_id < b.device_id;
                                  });
                        cands.resize(static_cast<std::size_t>(budget));
                    }
                    for (const auto& c : cands)
                        harvest_w[static_cast<std::size_t>(c.device_id)] +=
                            eta * lc.k_lin / std::max(c.d3d_sq, lc.dmin_sq);
                }
            } else {
                for (int i = 0; i < n_devices; ++i) {
                    if (!devices[static_cast<std::size_t>(i)].alive) continue;
                    const double x = dev_x[static_cast<std::size_t>(i)];
                    const double y = dev_y[static_cast<std::size_t>(i)];
                    double sum = 0;
                    grid.for_near(x, y, [&](int bid) {
                        const auto& b = beacons[static_cast<std::size_t>(bid)];
                        const double dx = b.x - x, dy = b.y - y;
                        const double d2d_sq = dx * dx + dy * dy;
                        if (d2d_sq > lc.r2d_cov_sq) return;
                        const double u = link_uniform(blk_seed, static_cast<std::uint64_t>(step),
                                                      static_cast<std::uint64_t>(bid),
                                                      static_cast<std::uint64_t>(i));
                        if (u < p_blocked(std::sqrt(d2d_sq))) return;
                        sum += eta * lc.k_lin / std::max(d2d_sq + lc.dh * lc.dh, lc.dmin_sq);
                    });
                    harvest_w[static_cast<std::size_t>(i)] = sum;
                }
            }
        }

        const bool in_tail = t >= tail_start_s;
        for (int i = 0; i < n_devices; ++i) {
            auto& d = devices[static_cast<std::size_t>(i)];
            if (!d.alive) continue;
            const double hw = harvest_w[static_cast<std::size_t>(i)];
            const double consumed = step_energy(d, hw, cfg.dt_s, t);
            auto& ac = accum[static_cast<std::size_t>(i)];
            ac.harvested_j += hw * cfg.dt_s;
            ac.consumed_j += consumed;
            ac.alive_time_s += cfg.dt_s;
            if (in_tail) ac.tail_net_j += hw * cfg.dt_s - consumed;
        }

        if (step % trace_every == 0) {
            double soc = 0;
            for (const auto& d : devices) soc += d.battery_j;
            rec.soc_trace_j.push_back(soc / static_cast<double>(n_devices));
        }
    }

    rec.devices.reserve(static_cast<std::size_t>(n_devices));
    for (int i = 0; i < n_devices; ++i) {
        const auto& d = devices[static_cast<std::size_t>(i)];
        const auto& ac = accum[static_cast<std::size_t>(i)];
        DeviceResult r;
        if (ac.alive_time_s > 0) {
            r.mean_harvested_w = ac.harvested_j / ac.alive_time_s;
            r.mean_consumed_w = ac.consumed_j / ac.alive_time_s;
        }
        r.depletion_time_s = d.depletion_time_s;
        r.tail_net_j = ac.tail_net_j;
        r.collective_scheduled = d.collective_scheduled;
        r.collective_delivered = d.collective_delivered;
        rec.devices.push_back(r);
    }
    return rec;
}

/// All replications with independent derived streams; `jobs` worker threads.
/// Results are ordered by replication index regardless of scheduling.
inline std::vector<RunRecord> run_replications(const ScenarioConfig& cfg, int jobs = 1) {
    cfg.validate();
    const int n = cfg.replications;
    std::vector<RunRecord> out(static_cast<std::size_t>(n));
    jobs = std::clamp(jobs, 1, n);
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = run(cfg, i);
        return out;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w)
        workers.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                out[static_cast<std::size_t>(i)] = run(cfg, i);
            }
        });
    for (auto& t : workers) t.join();
    return out;
}

} // namespace wpcs

#endif
