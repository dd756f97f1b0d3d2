#ifndef WPCS_CONFIG_HPP
#define WPCS_CONFIG_HPP

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wpcs/engine.hpp"

namespace wpcs {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline double parse_double(std::string_view v, int line) {
    try {
        std::size_t used = 0;
        const std::string s(v);
        const double d = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse number '" + std::string(v) + "'", line);
    }
}

inline long parse_long(std::string_view v, int line) {
    const double d = parse_double(v, line);
    const long l = static_cast<long>(d);
    if (static_cast<double>(l) != d)
        throw ConfigError("expected integer, got '" + std::string(v) + "'", line);
    return l;
}

inline std::uint64_t parse_u64(std::string_view v, int line) {
    std::uint64_t out = 0;
    const auto* b = v.data();
    const auto* e = v.data() + v.size();
    const auto res = std::from_chars(b, e, out);
    if (res.ec != std::errc{} || res.ptr != e)
        throw ConfigError("cannot parse seed '" + std::string(v) + "'", line);
    return out;
}

} // namespace detail

/// Apply one `key = value` setting. Shared by the file parser and the sweep
/// axis so every swept key goes through identical validation.
inline void apply_config_key(ScenarioConfig& cfg, std::string_view key,
                             std::string_view value, int line = 0) {
    using detail::parse_double;
    using detail::parse_long;
    const std::string v(detail::trim(value));
    const auto bad_value = [&](const char* what) {
        throw ConfigError(std::string(key) + ": expected " + what + ", got '" + v + "'",
                          line);
    };

    if (key == "layout") {
        if (v == "manhattan") cfg.layout = LayoutKind::Manhattan;
        else if (v == "random") cfg.layout = LayoutKind::Random;
        else bad_value("manhattan|random");
    } else if (key == "area_side_m") cfg.area_side_m = parse_double(v, line);
    else if (key == "block_m") cfg.block_m = parse_double(v, line);
    else if (key == "block_jitter_frac") cfg.block_jitter_frac = parse_double(v, line);
    else if (key == "street_width_m") cfg.street_width_m = parse_double(v, line);
    else if (key == "road_width_m") cfg.road_width_m = parse_double(v, line);
    else if (key == "beacon_mode") {
        if (v == "static_regular") cfg.beacon_mode = BeaconMode::StaticRegular;
        else if (v == "static_random") cfg.beacon_mode = BeaconMode::StaticRandom;
        else if (v == "mobile") cfg.beacon_mode = BeaconMode::Mobile;
        else bad_value("static_regular|static_random|mobile");
    } else if (key == "beacon_count") {
        const long n = parse_long(v, line);
        if (n < 0) throw ConfigError("beacon_count must be non-negative", line);
        cfg.beacon_count = static_cast<int>(n);
    } else if (key == "antenna") {
        if (v == "omni") cfg.antenna = AntennaKind::Omni;
        else if (v == "directional") cfg.antenna = AntennaKind::Directional;
        else bad_value("omni|directional");
    } else if (key == "tx_gain_dir_dbi") cfg.link.tx_gain_dir_dbi = parse_double(v, line);
    else if (key == "radio") {
        if (v == "ble") cfg.radio = RadioKind::Ble;
        else if (v == "lora") cfg.radio = RadioKind::Lora;
        else if (v == "zigbee") cfg.radio = RadioKind::Zigbee;
        else bad_value("ble|lora|zigbee");
    } else if (key == "policy") {
        if (v == "default") cfg.policy = Policy::Default;
        else if (v == "always") cfg.policy = Policy::Always;
        else if (v == "policy1") cfg.policy = Policy::Policy1;
        else if (v == "policy2") cfg.policy = Policy::Policy2;
        else bad_value("default|always|policy1|policy2");
    } else if (key == "participants") {
        const long n = parse_long(v, line);
        if (n < 1) throw ConfigError("participants must be positive", line);
        cfg.participants = static_cast<int>(n);
    } else if (key == "background_vehicles") {
        const long n = parse_long(v, line);
        if (n < 0) throw ConfigError("background_vehicles must be non-negative", line);
        cfg.background_vehicles = static_cast<int>(n);
    } else if (key == "participation_frac") cfg.participation_frac = parse_double(v, line);
    else if (key == "dt_s") cfg.dt_s = parse_double(v, line);
    else if (key == "horizon_s") cfg.horizon_s = parse_double(v, line);
    else if (key == "replications") {
        const long n = parse_long(v, line);
        if (n < 1) throw ConfigError("replications must be at least 1", line);
        cfg.replications = static_cast<int>(n);
    } else if (key == "master_seed") cfg.master_seed = detail::parse_u64(v, line);
    else if (key == "frequency_hz") cfg.link.frequency_hz = parse_double(v, line);
    else if (key == "tx_power_dbm") cfg.link.tx_power_dbm = parse_double(v, line);
    else if (key == "tx_gain_omni_dbi") cfg.link.tx_gain_omni_dbi = parse_double(v, line);
    else if (key == "rx_gain_dbi") cfg.link.rx_gain_dbi = parse_double(v, line);
    else if (key == "sensitivity_dbm") cfg.link.sensitivity_dbm = parse_double(v, line);
    else if (key == "conversion_efficiency")
        cfg.link.conversion_efficiency = parse_double(v, line);
    else if (key == "min_distance_m") cfg.link.min_distance_m = parse_double(v, line);
    else if (key == "battery_capacity_j") cfg.battery_capacity_j = parse_double(v, line);
    else if (key == "payload_bytes") cfg.payload_bytes = parse_double(v, line);
    else if (key == "report_period_s") cfg.report_period_s = parse_double(v, line);
    else if (key == "beacon_height_m") cfg.beacon_height_m = parse_double(v, line);
    else if (key == "device_height_m") cfg.device_height_m = parse_double(v, line);
    else if (key == "blocker_height_m") cfg.blocker_height_m = parse_double(v, line);
    else if (key == "body_diameter_m") cfg.body_diameter_m = parse_double(v, line);
    else
        throw ConfigError("unknown key '" + std::string(key) + "'", line);
}

inline bool is_known_config_key(std::string_view key) {
    ScenarioConfig probe;
    try {
        apply_config_key(probe, key, "");
    } catch (const ConfigError& e) {
        return std::string_view(e.what()).find("unknown key") == std::string_view::npos;
    }
    return true;
}

/// Parse flat `key = value` text (# comments). Unset keys keep their
/// defaults; invariants are checked after the last line.
inline ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig cfg;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                              : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("expected 'key = value'", line_no);
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", line_no);
        apply_config_key(cfg, key, value, line_no);
    }
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

inline const char* to_string(LayoutKind k) {
    return k == LayoutKind::Manhattan ? "manhattan" : "random";
}
inline const char* to_string(BeaconMode m) {
    switch (m) {
    case BeaconMode::StaticRegular: return "static_regular";
    case BeaconMode::StaticRandom: return "static_random";
    default: return "mobile";
    }
}
inline const char* to_string(AntennaKind a) {
    return a == AntennaKind::Omni ? "omni" : "directional";
}
inline const char* to_string(RadioKind r) {
    switch (r) {
    case RadioKind::Ble: return "ble";
    case RadioKind::Lora: return "lora";
    default: return "zigbee";
    }
}
inline const char* to_string(Policy p) {
    switch (p) {
    case Policy::Default: return "default";
    case Policy::Always: return "always";
    case Policy::Policy1: return "policy1";
    default: return "policy2";
    }
}

/// Canonical `key = value` form; parse(serialize(c)) == c.
inline std::string serialize_config(const ScenarioConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << "layout = " << to_string(c.layout) << '\n'
       << "area_side_m = " << c.area_side_m << '\n'
       << "block_m = " << c.block_m << '\n'
       << "block_jitter_frac = " << c.block_jitter_frac << '\n'
       << "street_width_m = " << c.street_width_m << '\n'
       << "road_width_m = " << c.road_width_m << '\n'
       << "beacon_mode = " << to_string(c.beacon_mode) << '\n'
       << "beacon_count = " << c.beacon_count << '\n'
       << "antenna = " << to_string(c.antenna) << '\n'
       << "tx_gain_dir_dbi = " << c.link.tx_gain_dir_dbi << '\n'
       << "radio = " << to_string(c.radio) << '\n'
       << "policy = " << to_string(c.policy) << '\n'
       << "participants = " << c.participants << '\n'
       << "background_vehicles = " << c.background_vehicles << '\n'
       << "participation_frac = " << c.participation_frac << '\n'
       << "dt_s = " << c.dt_s << '\n'
       << "horizon_s = " << c.horizon_s << '\n'
       << "replications = " << c.replications << '\n'
       << "master_seed = " << c.master_seed << '\n'
       << "frequency_hz = " << c.link.frequency_hz << '\n'
       << "tx_power_dbm = " << c.link.tx_power_dbm << '\n'
       << "tx_gain_omni_dbi = " << c.link.tx_gain_omni_dbi << '\n'
       << "rx_gain_dbi = " << c.link.rx_gain_dbi << '\n'
       << "sensitivity_dbm = " << c.link.sensitivity_dbm << '\n'
       << "conversion_efficiency = " << c.link.conversion_efficiency << '\n'
       << "min_distance_m = " << c.link.min_distance_m << '\n'
       << "battery_capacity_j = " << c.battery_capacity_j << '\n'
       << "payload_bytes = " << c.payload_bytes << '\n'
       << "report_period_s = " << c.report_period_s << '\n'
       << "beacon_height_m = " << c.beacon_height_m << '\n'
       << "device_height_m = " << c.device_height_m << '\n'
       << "blocker_height_m = " << c.blocker_height_m << '\n'
       << "body_diameter_m = " << c.body_diameter_m << '\n';
    return os.str();
}

/// Stable id derived from the canonical serialization (FNV-1a 64).
inline std::string scenario_id(const ScenarioConfig& c) {
    const std::string s = serialize_config(c);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace wpcs

#endif
