// wpcs: wirelessly powered crowd sensing simulator CLI.
//
// Subcommands:
//   run <cfg> --out FILE [--seed N] [--jobs N] [--trace FILE]
//   sweep <cfg> --key K --values v1,v2,... --out FILE [--svg DIR] [--jobs N]
//   compare <cfgA> <cfgB> --out FILE [--jobs N]
//
// Exit codes: 0 success, 1 usage/config error, 2 runtime/I-O error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "wpcs/config.hpp"
#include "wpcs/csv.hpp"
#include "wpcs/engine.hpp"
#include "wpcs/metrics.hpp"
#include "wpcs/svg.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_io = 2;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + path + "'");
}

wpcs::ScenarioConfig baseline_of(const wpcs::ScenarioConfig& cfg) {
    wpcs::ScenarioConfig base = cfg;
    base.beacon_count = 0;
    base.beacon_mode = wpcs::BeaconMode::StaticRegular;
    base.policy = wpcs::Policy::Default;
    return base;
}

struct RepMetrics {
    double harvested = 0;
    double consumed = 0;
    double lifetime = 0;
    double sustainable = 0;
    double gain = 0;
    double share = 0;
};

RepMetrics rep_metrics(const wpcs::RunRecord& rec, const wpcs::RunRecord& base) {
    const std::span<const wpcs::RunRecord> r{&rec, 1}, b{&base, 1};
    RepMetrics m;
    m.harvested = wpcs::mean_harvested_power(r);
    m.consumed = wpcs::mean_consumed_power(r);
    m.lifetime = wpcs::mean_lifetime_s(r);
    m.sustainable = wpcs::sustainable_fraction(r);
    m.gain = wpcs::lifetime_gain(r, b);
    m.share = wpcs::data_share(r);
    return m;
}

std::string config_echo(const wpcs::ScenarioConfig& cfg) {
    std::istringstream in(wpcs::serialize_config(cfg));
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) out << "# " << line << '\n';
    return out.str();
}

void append_run_row(std::ostringstream& os, const wpcs::ScenarioConfig& cfg,
                    const std::string& id, long replication, std::uint64_t seed,
                    const RepMetrics& m) {
    wpcs::CsvRow row;
    row.field(wpcs::csv_schema_version)
        .field(id)
        .field(replication)
        .field(static_cast<unsigned long long>(seed))
        .field(wpcs::to_string(cfg.layout))
        .field(wpcs::to_string(cfg.beacon_mode))
        .field(cfg.beacon_count)
        .field(wpcs::to_string(cfg.antenna))
        .field(wpcs::to_string(cfg.radio))
        .field(wpcs::to_string(cfg.policy))
        .field(m.harvested)
        .field(m.consumed)
        .field(m.lifetime)
        .field(m.sustainable)
        .field(m.gain)
        .field(m.share);
    os << row.str() << '\n';
}

RepMetrics summary_metrics(const std::vector<wpcs::RunRecord>& recs,
                           const std::vector<wpcs::RunRecord>& base) {
    RepMetrics m;
    m.harvested = wpcs::mean_harvested_power(recs);
    m.consumed = wpcs::mean_consumed_power(recs);
    m.lifetime = wpcs::mean_lifetime_s(recs);
    m.sustainable = wpcs::sustainable_fraction(recs);
    m.gain = wpcs::lifetime_gain(recs, base);
    m.share = wpcs::data_share(recs);
    return m;
}

std::string trace_csv(const std::vector<wpcs::RunRecord>& recs,
                      const std::vector<wpcs::RunRecord>& base) {
    // mean SOC over replications plus lifetime gain as a function of a
    // truncated horizon, both on the decimated trace clock
    std::ostringstream os;
    os << "t_s,mean_soc_j,lifetime_gain_at_t\n";
    if (recs.empty() || recs.front().soc_trace_j.empty()) return os.str();
    std::size_t n_samples = recs.front().soc_trace_j.size();
    for (const auto& r : recs) n_samples = std::min(n_samples, r.soc_trace_j.size());

    std::vector<double> wpcs_lt, base_lt;
    for (const auto& r : recs)
        for (const auto& d : r.devices) wpcs_lt.push_back(wpcs::lifetime_of(r, d).seconds);
    for (const auto& r : base)
        for (const auto& d : r.devices) base_lt.push_back(wpcs::lifetime_of(r, d).seconds);

    const auto capped_mean = [](const std::vector<double>& v, double t) {
        double s = 0;
        for (double x : v) s += std::min(x, t);
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };

    for (std::size_t i = 0; i < n_samples; ++i) {
        const double t = static_cast<double>(i) * recs.front().trace_stride_s;
        double soc = 0;
        for (const auto& r : recs) soc += r.soc_trace_j[i];
        soc /= static_cast<double>(recs.size());
        const double denom = capped_mean(base_lt, std::max(t, recs.front().dt_s));
        const double gain =
            denom > 0 ? capped_mean(wpcs_lt, std::max(t, recs.front().dt_s)) / denom : 0.0;
        wpcs::CsvRow row;
        row.field(t).field(soc).field(gain);
        os << row.str() << '\n';
    }
    return os.str();
}

int cmd_run(const std::string& cfg_path, const std::string& out_path,
            std::optional<std::uint64_t> seed_override, int jobs,
            const std::string& trace_path) {
    wpcs::ScenarioConfig cfg = wpcs::parse_config(load_file(cfg_path));
    if (seed_override) cfg.master_seed = *seed_override;
    const auto records = wpcs::run_replications(cfg, jobs);
    const auto base_records = wpcs::run_replications(baseline_of(cfg), jobs);
    const std::string id = wpcs::scenario_id(cfg);

    std::ostringstream os;
    os << config_echo(cfg) << wpcs::run_csv_header << '\n';
    for (std::size_t i = 0; i < records.size(); ++i)
        append_run_row(os, cfg, id, records[i].replication, records[i].seed,
                       rep_metrics(records[i], base_records[i]));
    append_run_row(os, cfg, id, -1, cfg.master_seed, summary_metrics(records, base_records));
    write_file(out_path, os.str());
    if (!trace_path.empty()) write_file(trace_path, trace_csv(records, base_records));
    return exit_ok;
}

int cmd_sweep(const std::string& cfg_path, const std::string& key,
              const std::string& values_csv, const std::string& out_path,
              const std::string& svg_dir, int jobs) {
    if (!wpcs::is_known_config_key(key))
        throw wpcs::ConfigError("unknown sweep key '" + key + "'");
    std::vector<std::string> values;
    std::stringstream vs(values_csv);
    std::string item;
    while (std::getline(vs, item, ','))
        if (!item.empty()) values.push_back(item);
    if (values.empty()) throw wpcs::ConfigError("sweep requires a non-empty value list");

    const wpcs::ScenarioConfig base_cfg = wpcs::parse_config(load_file(cfg_path));

    std::ostringstream os;
    os << config_echo(base_cfg) << "# sweep_key = " << key << '\n'
       << wpcs::sweep_csv_header << '\n';

    std::vector<wpcs::ChartPoint> harvested_pts, gain_pts, share_pts;
    for (const auto& v : values) {
        wpcs::ScenarioConfig cfg = base_cfg;
        wpcs::apply_config_key(cfg, key, v);
        cfg.validate();
        const auto records = wpcs::run_replications(cfg, jobs);
        const auto base_records = wpcs::run_replications(baseline_of(cfg), jobs);

        std::vector<double> rep_h, rep_c, rep_l, rep_g, rep_s;
        for (std::size_t i = 0; i < records.size(); ++i) {
            const auto m = rep_metrics(records[i], base_records[i]);
            rep_h.push_back(m.harvested);
            rep_c.push_back(m.consumed);
            rep_l.push_back(m.lifetime);
            rep_g.push_back(m.gain);
            rep_s.push_back(m.share);
        }
        const auto m = summary_metrics(records, base_records);
        wpcs::CsvRow row;
        row.field(wpcs::csv_schema_version)
            .field(wpcs::scenario_id(cfg))
            .field(key)
            .field(v)
            .field(cfg.replications)
            .field(m.harvested)
            .field(wpcs::confidence_halfwidth(rep_h))
            .field(m.consumed)
            .field(wpcs::confidence_halfwidth(rep_c))
            .field(m.lifetime)
            .field(wpcs::confidence_halfwidth(rep_l))
            .field(m.gain)
            .field(wpcs::confidence_halfwidth(rep_g))
            .field(m.sustainable)
            .field(m.share)
            .field(wpcs::confidence_halfwidth(rep_s));
        os << row.str() << '\n';

        const double x = std::strtod(v.c_str(), nullptr);
        harvested_pts.push_back({x, m.harvested, wpcs::confidence_halfwidth(rep_h)});
        gain_pts.push_back({x, m.gain, wpcs::confidence_halfwidth(rep_g)});
        share_pts.push_back({x, m.share, wpcs::confidence_halfwidth(rep_s)});
    }
    write_file(out_path, os.str());

    if (!svg_dir.empty()) {
        std::filesystem::create_directories(svg_dir);
        const std::string prefix = (std::filesystem::path(svg_dir) / "").string();
        write_file(prefix + "harvested_power.svg",
                   wpcs::svg_line_chart("Mean harvested power", key, "watts", harvested_pts));
        write_file(prefix + "lifetime_gain.svg",
                   wpcs::svg_line_chart("Lifetime gain", key, "gain", gain_pts));
        write_file(prefix + "data_share.svg",
                   wpcs::svg_line_chart("Operator data share", key, "fraction", share_pts));
    }
    return exit_ok;
}

int cmd_compare(const std::string& cfg_a_path, const std::string& cfg_b_path,
                const std::string& out_path, int jobs) {
    wpcs::ScenarioConfig a = wpcs::parse_config(load_file(cfg_a_path));
    wpcs::ScenarioConfig b = wpcs::parse_config(load_file(cfg_b_path));

    // configs may differ only on declared scenario axes; everything else,
    // including seeding, must pair up
    b.master_seed = a.master_seed;
    wpcs::ScenarioConfig a_axes = a, b_axes = b;
    for (auto* c : {&a_axes, &b_axes}) {
        c->layout = wpcs::LayoutKind::Manhattan;
        c->beacon_mode = wpcs::BeaconMode::StaticRegular;
        c->beacon_count = 0;
        c->antenna = wpcs::AntennaKind::Omni;
        c->radio = wpcs::RadioKind::Ble;
        c->policy = wpcs::Policy::Default;
        c->link.tx_gain_dir_dbi = 0;
        c->block_jitter_frac = 0;
    }
    if (wpcs::serialize_config(a_axes) != wpcs::serialize_config(b_axes))
        throw wpcs::ConfigError(
            "configs differ outside the declared axes (layout, beacon_mode, "
            "beacon_count, antenna, radio, policy, tx_gain_dir_dbi, block_jitter_frac)");

    const auto rec_a = wpcs::run_replications(a, jobs);
    const auto rec_b = wpcs::run_replications(b, jobs);
    const auto base_a = wpcs::run_replications(baseline_of(a), jobs);
    const auto base_b = wpcs::run_replications(baseline_of(b), jobs);

    std::ostringstream os;
    os << "# config_a\n" << config_echo(a) << "# config_b\n" << config_echo(b)
       << wpcs::compare_csv_header << '\n';
    const auto emit = [&](long rep, std::uint64_t seed, const RepMetrics& ma,
                          const RepMetrics& mb) {
        wpcs::CsvRow row;
        row.field(wpcs::csv_schema_version)
            .field(rep)
            .field(static_cast<unsigned long long>(seed))
            .field(ma.harvested)
            .field(mb.harvested)
            .field(mb.harvested - ma.harvested)
            .field(ma.lifetime)
            .field(mb.lifetime)
            .field(mb.lifetime - ma.lifetime)
            .field(ma.gain)
            .field(mb.gain)
            .field(mb.gain - ma.gain)
            .field(ma.share)
            .field(mb.share)
            .field(mb.share - ma.share);
        os << row.str() << '\n';
    };
    for (std::size_t i = 0; i < rec_a.size(); ++i)
        emit(rec_a[i].replication, rec_a[i].seed, rep_metrics(rec_a[i], base_a[i]),
             rep_metrics(rec_b[i], base_b[i]));
    emit(-1, a.master_seed, summary_metrics(rec_a, base_a), summary_metrics(rec_b, base_b));
    write_file(out_path, os.str());
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wirelessly powered crowd sensing simulator"};
    app.require_subcommand(1);
    const int default_jobs =
        std::max(1u, std::thread::hardware_concurrency());

    std::string cfg_path, cfg_b_path, out_path, trace_path, sweep_key, sweep_values,
        svg_dir;
    std::optional<std::uint64_t> seed_override;
    int jobs = default_jobs;

    auto* run_cmd = app.add_subcommand("run", "run one scenario");
    run_cmd->add_option("config", cfg_path, "config file")->required();
    run_cmd->add_option("--out", out_path, "output CSV")->required();
    run_cmd->add_option("--seed", seed_override, "override master_seed");
    run_cmd->add_option("--jobs", jobs, "worker threads");
    run_cmd->add_option("--trace", trace_path, "SOC / gain-vs-horizon trace CSV");

    auto* sweep_cmd = app.add_subcommand("sweep", "sweep one config key");
    sweep_cmd->add_option("config", cfg_path, "base config file")->required();
    sweep_cmd->add_option("--key", sweep_key, "swept config key")->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated values")->required();
    sweep_cmd->add_option("--out", out_path, "output CSV")->required();
    sweep_cmd->add_option("--svg", svg_dir, "emit SVG charts into directory");
    sweep_cmd->add_option("--jobs", jobs, "worker threads");

    auto* compare_cmd = app.add_subcommand("compare", "paired-seed comparison");
    compare_cmd->add_option("config_a", cfg_path, "config A")->required();
    compare_cmd->add_option("config_b", cfg_b_path, "config B")->required();
    compare_cmd->add_option("--out", out_path, "output CSV")->required();
    compare_cmd->add_option("--jobs", jobs, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (run_cmd->parsed())
            return cmd_run(cfg_path, out_path, seed_override, jobs, trace_path);
        if (sweep_cmd->parsed())
            return cmd_sweep(cfg_path, sweep_key, sweep_values, out_path, svg_dir, jobs);
        return cmd_compare(cfg_path, cfg_b_path, out_path, jobs);
    } catch (const wpcs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_usage;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    }
}
