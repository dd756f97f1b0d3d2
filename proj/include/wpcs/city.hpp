#ifndef WPCS_CITY_HPP
#define WPCS_CITY_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "wpcs/rng.hpp"

namespace wpcs {

class LayoutError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Axis { Horizontal, Vertical };

/// One piece of street centerline between two intersections (or between an
/// intersection and the area boundary). Road is centered in the street; the
/// two sidewalks flank it symmetrically.
struct StreetSegment {
    int id = -1;
    Axis axis = Axis::Horizontal;
    double x0 = 0, y0 = 0; // centerline start
    double x1 = 0, y1 = 0; // centerline end (x1>=x0, y1>=y0)
    double street_width_m = 0;
    double road_width_m = 0;
    double sidewalk_width_m = 0;
    int inter_start = -1; // intersection id at (x0,y0), -1 = dead end
    int inter_end = -1;   // intersection id at (x1,y1), -1 = dead end

    double length() const { return (x1 - x0) + (y1 - y0); }

    /// Centerline point at arc-length s from the start.
    void centerline_at(double s, double& x, double& y) const {
        if (axis == Axis::Horizontal) {
            x = x0 + s;
            y = y0;
        } else {
            x = x0;
            y = y0 + s;
        }
    }

    /// World sign of the lateral normal: +1 means +y (horizontal) or +x
    /// (vertical); side arguments elsewhere use the same convention.
    void offset_point(double s, double lateral, int side, double& x, double& y) const {
        centerline_at(s, x, y);
        if (axis == Axis::Horizontal)
            y += side * lateral;
        else
            x += side * lateral;
    }
};

struct Intersection {
    int id = -1;
    double x = 0, y = 0;
    std::vector<int> segments; // incident segment ids, sorted
};

struct CityLayout {
    double area_side_m = 0;
    double street_width_m = 0;
    double road_width_m = 0;
    std::vector<StreetSegment> segments;
    std::vector<Intersection> intersections;
    double pedestrian_zone_area_m2 = 0;
    // street centerline coordinates per axis, ascending
    std::vector<double> h_streets; // y of horizontal streets
    std::vector<double> v_streets; // x of vertical streets

    double sidewalk_width_m() const { return 0.5 * (street_width_m - road_width_m); }

    /// Lateral offset of the road/sidewalk boundary line from the centerline.
    double boundary_offset_m() const { return 0.5 * road_width_m; }

    /// Lateral offset of the sidewalk mid-line from the centerline.
    double sidewalk_mid_offset_m() const {
        return 0.5 * road_width_m + 0.5 * sidewalk_width_m();
    }
};

namespace detail {

inline void check_widths(double area_side, double street_w, double road_w) {
    if (area_side <= 0 || street_w <= 0 || road_w <= 0)
        throw LayoutError("layout dimensions must be positive");
    if (road_w >= street_w)
        throw LayoutError("road_width_m must be smaller than street_width_m");
}

/// Build a rectilinear layout from street edge coordinates (lower edge of
/// each street strip). Shared by the Manhattan and jittered generators.
inline CityLayout build_grid(double area_side, std::vector<double> h_edges,
                             std::vector<double> v_edges, double street_w,
                             double road_w) {
    if (h_edges.empty() || v_edges.empty())
        throw LayoutError("area too small: no street fits");

    CityLayout city;
    city.area_side_m = area_side;
    city.street_width_m = street_w;
    city.road_width_m = road_w;
    for (double e : h_edges) city.h_streets.push_back(e + 0.5 * street_w);
    for (double e : v_edges) city.v_streets.push_back(e + 0.5 * street_w);

    const auto nh = city.h_streets.size();
    const auto nv = city.v_streets.size();

    // one intersection per crossing, row-major
    for (std::size_t iy = 0; iy < nh; ++iy)
        for (std::size_t ix = 0; ix < nv; ++ix) {
            Intersection in;
            in.id = static_cast<int>(iy * nv + ix);
            in.x = city.v_streets[ix];
            in.y = city.h_streets[iy];
            city.intersections.push_back(in);
        }

    auto add_segment = [&](Axis axis, double fixed, double lo, double hi, int ia,
                           int ib) {
        StreetSegment s;
        s.id = static_cast<int>(city.segments.size());
        s.axis = axis;
        s.street_width_m = street_w;
        s.road_width_m = road_w;
        s.sidewalk_width_m = 0.5 * (street_w - road_w);
        if (axis == Axis::Horizontal) {
            s.x0 = lo; s.x1 = hi; s.y0 = s.y1 = fixed;
        } else {
            s.y0 = lo; s.y1 = hi; s.x0 = s.x1 = fixed;
        }
        s.inter_start = ia;
        s.inter_end = ib;
        if (ia >= 0) city.intersections[ia].segments.push_back(s.id);
        if (ib >= 0) city.intersections[ib].segments.push_back(s.id);
        city.segments.push_back(s);
    };

    // horizontal streets: split at every vertical crossing
    for (std::size_t iy = 0; iy < nh; ++iy) {
        const double y = city.h_streets[iy];
        double prev = 0.0;
        int prev_id = -1;
        for (std::size_t ix = 0; ix < nv; ++ix) {
            const int cross = static_cast<int>(iy * nv + ix);
            add_segment(Axis::Horizontal, y, prev, city.v_streets[ix], prev_id, cross);
            prev = city.v_streets[ix];
            prev_id = cross;
        }
        add_segment(Axis::Horizontal, y, prev, area_side, prev_id, -1);
    }
    // vertical streets
    for (std::size_t ix = 0; ix < nv; ++ix) {
        const double x = city.v_streets[ix];
        double prev = 0.0;
        int prev_id = -1;
        for (std::size_t iy = 0; iy < nh; ++iy) {
            const int cross = static_cast<int>(iy * nv + ix);
            add_segment(Axis::Vertical, x, prev, city.h_streets[iy], prev_id, cross);
            prev = city.h_streets[iy];
            prev_id = cross;
        }
        add_segment(Axis::Vertical, x, prev, area_side, prev_id, -1);
    }

    // pedestrian zone = union of street strips minus union of road strips;
    // strips span the full square, so inclusion-exclusion is exact
    const double S = area_side;
    const double dnh = static_cast<double>(nh), dnv = static_cast<double>(nv);
    const double streets = (dnh + dnv) * street_w * S - dnh * dnv * street_w * street_w;
    const double roads = (dnh + dnv) * road_w * S - dnh * dnv * road_w * road_w;
    city.pedestrian_zone_area_m2 = streets - roads;

    return city;
}

inline std::vector<double> regular_edges(double area_side, double pitch,
                                         double street_w) {
    std::vector<double> edges;
    for (double e = 0.0; e + street_w <= area_side + 1e-9; e += pitch)
        edges.push_back(e);
    return edges;
}

} // namespace detail

/// Regular grid: equally spaced streets with pitch = block + street width,
/// first street edge at coordinate 0.
inline CityLayout generate_manhattan(double area_side_m, double block_m,
                                     double street_width_m, double road_width_m) {
    detail::check_widths(area_side_m, street_width_m, road_width_m);
    if (block_m <= 0) throw LayoutError("block_m must be positive");
    if (area_side_m < block_m + street_width_m)
        throw LayoutError("area_side_m must be at least block_m + street_width_m");
    const double pitch = block_m + street_width_m;
    auto edges = detail::regular_edges(area_side_m, pitch, street_width_m);
    return detail::build_grid(area_side_m, edges, edges, street_width_m, road_width_m);
}

/// Irregular rectilinear grid: successive street pitches drawn uniformly from
/// [pitch*(1-jitter), pitch*(1+jitter)], pitch = block mean + street width.
/// jitter 0 degenerates to the Manhattan grid.
inline CityLayout generate_random_layout(double area_side_m, double block_mean_m,
                                         double block_jitter_frac,
                                         double street_width_m, double road_width_m,
                                         Rng& rng) {
    detail::check_widths(area_side_m, street_width_m, road_width_m);
    if (block_mean_m <= 0) throw LayoutError("block_mean_m must be positive");
    if (block_jitter_frac < 0 || block_jitter_frac >= 1)
        throw LayoutError("block_jitter_frac must lie in [0,1)");
    if (area_side_m < block_mean_m + street_width_m)
        throw LayoutError("area_side_m must be at least block_mean_m + street_width_m");

    const double pitch = block_mean_m + street_width_m;
    auto draw_edges = [&]() {
        std::vector<double> edges{0.0};
        for (;;) {
            const double step =
                rng.uniform(pitch * (1 - block_jitter_frac), pitch * (1 + block_jitter_frac));
            const double e = edges.back() + step;
            if (e + street_width_m > area_side_m + 1e-9) break;
            edges.push_back(e);
        }
        return edges;
    };
    auto h_edges = draw_edges(); // horizontal street edges drawn first
    auto v_edges = draw_edges();
    return detail::build_grid(area_side_m, std::move(h_edges), std::move(v_edges),
                              street_width_m, road_width_m);
}

/// Point on the road/sidewalk boundary line of the given side (+1/-1 world
/// normal) at arc-length arc_s along the segment.
inline void point_on_sidewalk(const CityLayout& city, int segment_id, int side,
                              double arc_s, double& x, double& y) {
    const auto& seg = city.segments.at(static_cast<std::size_t>(segment_id));
    if (arc_s < -1e-9 || arc_s > seg.length() + 1e-9)
        throw LayoutError("arc_s outside segment: " + std::to_string(arc_s));
    seg.offset_point(arc_s, city.boundary_offset_m(), side, x, y);
}

/// Total boundary length available to pedestrians/beacons: both sides of
/// every segment centerline.
inline double total_sidewalk_length(const CityLayout& city) {
    double total = 0;
    for (const auto& s : city.segments) total += s.length();
    return 2.0 * total;
}

} // namespace wpcs

#endif
