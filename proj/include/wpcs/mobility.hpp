#ifndef WPCS_MOBILITY_HPP
#define WPCS_MOBILITY_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wpcs/city.hpp"
#include "wpcs/rng.hpp"

namespace wpcs {

inline constexpr double kmph_to_mps = 1.0 / 3.6;
inline constexpr double pedestrian_speed_lo_mps = 3.0 * kmph_to_mps;
inline constexpr double pedestrian_speed_hi_mps = 6.0 * kmph_to_mps;
inline constexpr double vehicle_speed_mps = 30.0 * kmph_to_mps;

enum class AgentRole { Pedestrian, Vehicle };

/// Street-network walker. Pedestrians keep to a sidewalk mid-line (side is
/// the world sign of the lateral normal); vehicles ride the road centerline
/// (side 0).
struct Agent {
    int id = -1;
    AgentRole role = AgentRole::Pedestrian;
    int segment_id = -1;
    int side = 0;
    double arc_s = 0;
    int heading = 1; // +1 toward (x1,y1)
    double speed_mps = 0;
};

namespace detail {

/// World sign of the right-hand side of travel for the given axis/heading.
inline int right_side_sign(Axis axis, int heading) {
    return axis == Axis::Horizontal ? -heading : heading;
}

inline std::vector<double> cumulative_lengths(const CityLayout& city) {
    std::vector<double> cum;
    cum.reserve(city.segments.size());
    double total = 0;
    for (const auto& s : city.segments) {
        total += s.length();
        cum.push_back(total);
    }
    return cum;
}

inline int pick_segment(const std::vector<double>& cum, Rng& rng, double& arc) {
    const double u = rng.uniform() * cum.back();
    std::size_t lo = 0, hi = cum.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (cum[mid] < u) lo = mid + 1; else hi = mid;
    }
    arc = u - (lo == 0 ? 0.0 : cum[lo - 1]);
    return static_cast<int>(lo);
}

} // namespace detail

/// Uniform placement over total sidewalk length (pedestrians) / road length
/// (vehicles); headings uniform, pedestrian speeds i.i.d. uniform [3,6] km/h.
inline std::vector<Agent> spawn_agents(const CityLayout& city, int n_pedestrians,
                                       int n_vehicles, Rng& rng) {
    if (city.segments.empty()) throw LayoutError("cannot spawn agents on empty layout");
    if (n_pedestrians < 0 || n_vehicles < 0)
        throw std::invalid_argument("agent counts must be non-negative");

    const auto cum = detail::cumulative_lengths(city);
    std::vector<Agent> agents;
    agents.reserve(static_cast<std::size_t>(n_pedestrians + n_vehicles));
    int next_id = 0;
    for (int i = 0; i < n_pedestrians; ++i) {
        Agent a;
        a.id = next_id++;
        a.role = AgentRole::Pedestrian;
        a.segment_id = detail::pick_segment(cum, rng, a.arc_s);
        a.side = rng.bernoulli(0.5) ? 1 : -1;
        a.heading = rng.bernoulli(0.5) ? 1 : -1;
        a.speed_mps = rng.uniform(pedestrian_speed_lo_mps, pedestrian_speed_hi_mps);
        agents.push_back(a);
    }
    for (int i = 0; i < n_vehicles; ++i) {
        Agent a;
        a.id = next_id++;
        a.role = AgentRole::Vehicle;
        a.segment_id = detail::pick_segment(cum, rng, a.arc_s);
        a.side = 0;
        a.heading = rng.bernoulli(0.5) ? 1 : -1;
        a.speed_mps = vehicle_speed_mps;
        agents.push_back(a);
    }
    return agents;
}

/// Move the agent by speed*dt. At an intersection the continuation is chosen
/// uniformly among the non-reversing incident segments; at a dead end (area
/// boundary) the agent U-turns. Residual distance carries over.
inline void advance(Agent& agent, const CityLayout& city, double dt_s, Rng& rng) {
    if (dt_s <= 0) throw std::invalid_argument("dt_s must be positive");
    double dist = agent.speed_mps * dt_s;
    const StreetSegment* seg = &city.segments[static_cast<std::size_t>(agent.segment_id)];
    // bounded by dist/min-segment-length; loop until the move is spent
    while (dist > 0) {
        const double room =
            agent.heading > 0 ? seg->length() - agent.arc_s : agent.arc_s;
        if (dist <= room) {
            agent.arc_s += agent.heading * dist;
            return;
        }
        dist -= room;
        const int inter_id = agent.heading > 0 ? seg->inter_end : seg->inter_start;
        if (inter_id < 0) { // dead end at the area boundary
            agent.arc_s = agent.heading > 0 ? seg->length() : 0.0;
            agent.heading = -agent.heading;
            continue;
        }
        const auto& inter = city.intersections[static_cast<std::size_t>(inter_id)];
        int options[4];
        int n_options = 0;
        for (int sid : inter.segments)
            if (sid != agent.segment_id) options[n_options++] = sid;
        if (n_options == 0) { // isolated spur: forced U-turn
            agent.arc_s = agent.heading > 0 ? seg->length() : 0.0;
            agent.heading = -agent.heading;
            continue;
        }
        const int pick = options[rng.uniform_int(static_cast<std::uint64_t>(n_options))];
        const StreetSegment* next = &city.segments[static_cast<std::size_t>(pick)];
        const bool was_right =
            agent.side == detail::right_side_sign(seg->axis, agent.heading);
        const int new_heading = next->inter_start == inter_id ? 1 : -1;
        if (agent.side != 0) {
            const int r = detail::right_side_sign(next->axis, new_heading);
            agent.side = was_right ? r : -r;
        }
        agent.segment_id = pick;
        agent.heading = new_heading;
        agent.arc_s = new_heading > 0 ? 0.0 : next->length();
        seg = next;
    }
}

/// 3D position: centerline point plus lateral offset (sidewalk mid-line for
/// pedestrians, 0 for vehicles) at the carried height.
inline void position3d(const Agent& agent, const CityLayout& city,
                       double carried_height_m, double& x, double& y, double& h) {
    const auto& seg = city.segments[static_cast<std::size_t>(agent.segment_id)];
    const double lateral =
        agent.role == AgentRole::Pedestrian ? city.sidewalk_mid_offset_m() : 0.0;
    seg.offset_point(agent.arc_s, lateral, agent.side, x, y);
    h = carried_height_m;
}

} // namespace wpcs

#endif
