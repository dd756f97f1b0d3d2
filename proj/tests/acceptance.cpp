// Acceptance suite: one line per criterion, PASS or FAIL, nonzero exit on any
// failure. Optional argv: criterion numbers to run (default: all), e.g.
// `acceptance 2 5`. Scenario sizes and tolerances are pinned below.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wpcs/config.hpp"
#include "wpcs/csv.hpp"
#include "wpcs/engine.hpp"

using namespace wpcs;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << (detail.str().empty() ? "" : "; ") << what;
        }
    }
    void note(const std::string& what) {
        detail << (detail.str().empty() ? "" : "; ") << what;
    }
};

bool within(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

std::string fmt(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.4g", v);
    return b;
}

// ---------------------------------------------------------------------------
// 1. Energy arithmetic: closed-form consumption and zero-harvest lifetimes.

Outcome criterion1() {
    Outcome o;
    constexpr double tol_power = 1e-3;   // 0.1%
    constexpr double tol_lifetime = 5e-3; // 0.5%

    const double c_default = mean_consumption_w(DeviceState::make(RadioKind::Ble, Policy::Default));
    const double c_ble = mean_consumption_w(DeviceState::make(RadioKind::Ble, Policy::Always));
    const double c_lora = mean_consumption_w(DeviceState::make(RadioKind::Lora, Policy::Always));
    o.require(within(c_default, 31.28e-6, tol_power), "default-BLE " + fmt(c_default));
    o.require(within(c_ble, 41.06e-6, tol_power), "WPCS-BLE " + fmt(c_ble));
    o.require(within(c_lora, 181.7e-6, tol_power), "WPCS-LoRa " + fmt(c_lora));

    const auto simulated_lifetime = [&](Policy policy, double expect_consumption) {
        ScenarioConfig cfg;
        cfg.beacon_count = 0;
        cfg.participants = 4;
        cfg.policy = policy;
        cfg.dt_s = 60.0;
        cfg.horizon_s = 16.0 * 86400.0;
        const auto rec = run(cfg, 0);
        const double expect = battery_capacity_default_j / expect_consumption;
        for (const auto& d : rec.devices) {
            o.require(d.depleted(), "device survived a zero-harvest run");
            o.require(within(d.depletion_time_s, expect, tol_lifetime),
                      "lifetime " + fmt(d.depletion_time_s) + " vs " + fmt(expect));
        }
        return expect;
    };
    const double t_default = simulated_lifetime(Policy::Default, c_default);
    simulated_lifetime(Policy::Always, c_ble);
    o.require(within(t_default, 13.95 * 86400.0, tol_lifetime),
              "default lifetime not ~13.95 days");
    o.note("consumption " + fmt(c_default) + "/" + fmt(c_ble) + "/" + fmt(c_lora) +
           " W, default lifetime " + fmt(t_default / 86400.0) + " d");
    return o;
}

// ---------------------------------------------------------------------------
// 2. Link budget: FSPL, sensitivity ranges, harvest at the coverage edge.

Outcome criterion2() {
    Outcome o;
    LinkBudgetParams p;
    const double fspl1 = fspl_db(1.0, 915e6);
    o.require(std::abs(fspl1 - 31.68) <= 0.01, "FSPL(1m) " + fmt(fspl1));

    const double r_omni = coverage_radius_2d(p, p.tx_gain_omni_dbi, 0.0);
    const double r_dir = coverage_radius_2d(p, p.tx_gain_dir_dbi, 0.0);
    o.require(std::abs(r_omni - 8.24) <= 0.05, "omni range " + fmt(r_omni));
    o.require(std::abs(r_dir - 52.0) <= 0.1, "directional range " + fmt(r_dir));

    const double w_edge = harvested_from_link_w(p, p.tx_gain_omni_dbi, r_omni * (1 - 1e-9));
    o.require(within(w_edge, 0.3 * 1e-5, 1e-6), "edge harvest " + fmt(w_edge));
    o.require(harvested_from_link_w(p, p.tx_gain_omni_dbi, r_omni * 1.001) == 0.0,
              "beyond-sensitivity harvest not gated to zero");
    o.note("FSPL(1m) " + fmt(fspl1) + " dB, ranges " + fmt(r_omni) + "/" + fmt(r_dir) +
           " m, edge " + fmt(w_edge) + " W");
    return o;
}

// ---------------------------------------------------------------------------
// 3. Blockage closed form vs a Monte-Carlo disk-intersection oracle.

Outcome criterion3() {
    Outcome o;
    constexpr double tol_abs = 0.01;
    constexpr int trials = 300'000;

    BlockageGeometry probe;
    probe.blocker_density_per_m2 = 0.1;
    o.require(blockage_probability(0.72, probe) == 0.0, "P(0.72 m) != 0");
    probe.blocker_density_per_m2 = 0.0;
    o.require(blockage_probability(30.0, probe) == 0.0, "P(lambda=0) != 0");

    std::mt19937_64 gen(424242);
    std::uniform_real_distribution<double> uy(-1.0, 1.0);
    double worst = 0;
    for (double lambda : {0.01, 0.05, 0.1, 0.2}) {
        for (double d2d : {2.0, 5.0, 10.0, 20.0, 40.0}) {
            BlockageGeometry g;
            g.blocker_density_per_m2 = lambda;
            const double r = 0.5 * g.body_diameter_m;
            const double L = g.height_fraction() * d2d;
            const double x_hi = L + 1.0;
            std::poisson_distribution<int> pois(lambda * x_hi * 2.0);
            std::uniform_real_distribution<double> ux(0.0, x_hi);
            int blocked = 0;
            for (int t = 0; t < trials; ++t) {
                const int n = pois(gen);
                for (int i = 0; i < n; ++i) {
                    const double cx = ux(gen), cy = uy(gen);
                    if (cx >= r && cx <= L && std::abs(cy) <= r) {
                        ++blocked;
                        break;
                    }
                }
            }
            const double mc = static_cast<double>(blocked) / trials;
            const double err = std::abs(mc - blockage_probability(d2d, g));
            worst = std::max(worst, err);
            o.require(err <= tol_abs, "lambda " + fmt(lambda) + " d " + fmt(d2d) +
                                          " err " + fmt(err));
        }
    }
    o.note("max |MC - closed form| " + fmt(worst));
    return o;
}

// ---------------------------------------------------------------------------
// 4. Harvested power: non-decreasing in beacon count per cell, directional
//    above omni everywhere. Paired replications via the shared master seed.

Outcome criterion4() {
    Outcome o;
    const std::vector<int> counts{8, 24, 48};

    ScenarioConfig base;
    base.participants = 100;
    base.policy = Policy::Always;
    base.horizon_s = 7200.0;
    base.replications = 10;

    for (auto layout : {LayoutKind::Manhattan, LayoutKind::Random}) {
        for (auto mode : {BeaconMode::StaticRegular, BeaconMode::StaticRandom}) {
            std::map<int, double> omni, dir;
            for (auto antenna : {AntennaKind::Omni, AntennaKind::Directional}) {
                double prev = -1;
                for (int n : counts) {
                    ScenarioConfig cfg = base;
                    cfg.layout = layout;
                    cfg.beacon_mode = mode;
                    cfg.antenna = antenna;
                    cfg.beacon_count = n;
                    const auto recs = run_replications(cfg, 1);
                    const double h = mean_harvested_power(recs);
                    (antenna == AntennaKind::Omni ? omni : dir)[n] = h;
                    const std::string cell = std::string(to_string(layout)) + "/" +
                                             to_string(mode) + "/" + to_string(antenna);
                    o.require(h >= prev, cell + " not monotone at n=" + std::to_string(n));
                    prev = h;
                }
            }
            for (int n : counts)
                o.require(dir[n] > omni[n],
                          std::string(to_string(layout)) + "/" + to_string(mode) +
                              " directional <= omni at n=" + std::to_string(n));
        }
    }
    o.note("all 8 cells monotone, directional dominates");
    return o;
}

// ---------------------------------------------------------------------------
// 5. Minimal sustainable beacon count: BLE <= Zigbee, LoRa none in sweep.

Outcome criterion5() {
    Outcome o;
    const std::vector<int> counts{8, 16, 32, 64, 96};

    const auto minimal_sustainable = [&](RadioKind radio) -> std::optional<int> {
        for (int n : counts) {
            ScenarioConfig cfg;
            cfg.participants = 100;
            cfg.antenna = AntennaKind::Directional;
            cfg.policy = Policy::Always;
            cfg.radio = radio;
            cfg.beacon_count = n;
            cfg.horizon_s = 43200.0;
            cfg.replications = 10;
            const auto recs = run_replications(cfg, 1);
            if (sustainable_fraction(recs) >= 0.95) return n;
        }
        return std::nullopt;
    };

    const auto ble = minimal_sustainable(RadioKind::Ble);
    const auto zigbee = minimal_sustainable(RadioKind::Zigbee);
    const auto lora = minimal_sustainable(RadioKind::Lora);
    const auto show = [](const std::optional<int>& v) {
        return v ? std::to_string(*v) : std::string("none");
    };
    o.require(ble.has_value(), "BLE never sustainable in sweep");
    o.require(zigbee.has_value(), "Zigbee never sustainable in sweep");
    if (ble && zigbee) o.require(*ble <= *zigbee, "BLE needs more beacons than Zigbee");
    o.require(!lora.has_value(), "LoRa sustainable at " + show(lora));
    o.note("minimal sustainable count ble=" + show(ble) + " zigbee=" + show(zigbee) +
           " lora=" + show(lora));
    return o;
}

// ---------------------------------------------------------------------------
// 6. Mobile vs static beacons, paired seeds. The saturation mechanism needs a
//    storage buffer comparable to a charging episode, so this scenario uses a
//    20 mJ buffer; the directional advantage must flip to mobile, the omni
//    one must shrink away.

Outcome criterion6() {
    Outcome o;

    const auto gain_of = [&](BeaconMode mode, AntennaKind antenna, double dt) {
        ScenarioConfig cfg;
        cfg.participants = 100;
        cfg.beacon_count = 32;
        cfg.beacon_mode = mode;
        cfg.antenna = antenna;
        cfg.policy = Policy::Always;
        cfg.battery_capacity_j = 0.02;
        cfg.horizon_s = 21600.0;
        cfg.dt_s = dt;
        cfg.replications = 10;
        const auto recs = run_replications(cfg, 1);
        ScenarioConfig base = cfg;
        base.beacon_count = 0;
        base.policy = Policy::Default;
        const auto base_recs = run_replications(base, 1);
        return lifetime_gain(recs, base_recs);
    };

    const double d_dir = gain_of(BeaconMode::Mobile, AntennaKind::Directional, 1.0) -
                         gain_of(BeaconMode::StaticRegular, AntennaKind::Directional, 1.0);
    // finer steps for omni: the 8 m radius vs 8.3 m/s carriers
    const double d_omni = gain_of(BeaconMode::Mobile, AntennaKind::Omni, 0.5) -
                          gain_of(BeaconMode::StaticRegular, AntennaKind::Omni, 0.5);

    o.require(d_dir > 0, "mobile does not beat static for directional");
    o.require(d_omni < 0.5 * d_dir, "omni advantage did not shrink");
    o.note("gain delta directional " + fmt(d_dir) + ", omni " + fmt(d_omni));
    return o;
}

// ---------------------------------------------------------------------------
// 7. Policy ordering: policy1 >= policy2 data share pointwise, both
//    non-decreasing in beacon count.

Outcome criterion7() {
    Outcome o;
    const std::vector<int> counts{8, 16, 32, 64};

    const auto share_at = [&](Policy policy, int n) {
        ScenarioConfig cfg;
        cfg.participants = 100;
        cfg.antenna = AntennaKind::Directional;
        cfg.policy = policy;
        cfg.beacon_count = n;
        cfg.horizon_s = 21600.0;
        cfg.replications = 10;
        return data_share(run_replications(cfg, 1));
    };

    double prev1 = -1, prev2 = -1;
    std::ostringstream vals;
    for (int n : counts) {
        const double s1 = share_at(Policy::Policy1, n);
        const double s2 = share_at(Policy::Policy2, n);
        o.require(s1 >= s2, "policy1 < policy2 at n=" + std::to_string(n));
        o.require(s1 >= prev1, "policy1 share decreased at n=" + std::to_string(n));
        o.require(s2 >= prev2, "policy2 share decreased at n=" + std::to_string(n));
        prev1 = s1;
        prev2 = s2;
        vals << ' ' << n << ":" << fmt(s1) << "/" << fmt(s2);
    }
    o.note("share p1/p2 per count:" + vals.str());
    return o;
}

// ---------------------------------------------------------------------------
// 8. Determinism of the CLI: byte-identical CSV across re-runs and --jobs;
//    exit codes 0/1/2.

#ifndef WPCS_CLI_PATH
#define WPCS_CLI_PATH "wpcs"
#endif

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + WPCS_CLI_PATH + "\" " + args +
                            " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome criterion8() {
    Outcome o;
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "wpcs_acceptance";
    fs::create_directories(dir);
    const fs::path cfg = dir / "det.cfg";
    {
        std::ofstream out(cfg);
        out << "participants = 40\nbeacon_count = 16\nantenna = directional\n"
               "horizon_s = 1800\nreplications = 4\n";
    }
    const auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };

    o.require(run_cli("run " + q(cfg) + " --out " + q(dir / "r1.csv")) == 0, "run A failed");
    o.require(run_cli("run " + q(cfg) + " --out " + q(dir / "r2.csv")) == 0, "run B failed");
    o.require(run_cli("run " + q(cfg) + " --out " + q(dir / "r4.csv") + " --jobs 4") == 0,
              "run --jobs 4 failed");
    const std::string r1 = slurp(dir / "r1.csv");
    o.require(!r1.empty(), "empty run CSV");
    o.require(r1 == slurp(dir / "r2.csv"), "re-run CSV differs");
    o.require(r1 == slurp(dir / "r4.csv"), "--jobs changed the CSV");
    o.require(r1.find(run_csv_header) != std::string::npos, "run CSV header missing");
    o.require(r1.rfind("# layout", 0) == 0, "config echo missing");

    o.require(run_cli("sweep " + q(cfg) + " --key beacon_count --values 4,8 --out " +
                      q(dir / "s1.csv")) == 0, "sweep failed");
    o.require(run_cli("sweep " + q(cfg) + " --key beacon_count --values 4,8 --out " +
                      q(dir / "s2.csv") + " --jobs 3") == 0, "sweep --jobs failed");
    o.require(slurp(dir / "s1.csv") == slurp(dir / "s2.csv"), "sweep CSV not deterministic");

    o.require(run_cli("compare " + q(cfg) + " " + q(cfg) + " --out " + q(dir / "c.csv")) == 0,
              "self-compare failed");

    // exit codes: 1 for usage/config trouble, 2 for I/O trouble
    const fs::path bad = dir / "bad.cfg";
    std::ofstream(bad) << "no_such_key = 1\n";
    o.require(run_cli("run " + q(bad) + " --out " + q(dir / "x.csv")) == 1,
              "bad config should exit 1");
    o.require(run_cli("frobnicate") == 1, "unknown subcommand should exit 1");
    o.require(run_cli("run " + q(dir / "missing.cfg") + " --out " + q(dir / "x.csv")) == 2,
              "missing config should exit 2");
    o.require(run_cli("run " + q(cfg) + " --out \"" + (dir / "no_dir" / "x.csv").string() +
                      "\"") == 2, "unwritable output should exit 2");
    o.note("byte-identical across re-runs and --jobs; exit codes 0/1/2");
    return o;
}

// ---------------------------------------------------------------------------
// 9. Battery invariant fuzz: 1e6 randomized steps.

Outcome criterion9() {
    Outcome o;
    constexpr double rel_tol = 1e-12;
    std::mt19937_64 gen(192837465);
    std::uniform_real_distribution<double> uh(0.0, 5e-4);
    std::uniform_real_distribution<double> udt(0.05, 150.0);
    std::uniform_int_distribution<int> upol(0, 3), urad(0, 2);

    long steps = 0, clamps = 0;
    while (steps < 1'000'000) {
        auto d = DeviceState::make(static_cast<RadioKind>(urad(gen)),
                                   static_cast<Policy>(upol(gen)));
        double t = 0;
        for (int k = 0; k < 25'000 && d.alive && steps < 1'000'000; ++k, ++steps) {
            if (std::fmod(t, d.collective.period_s) < 1.0) policy_gate(d);
            const double before = d.battery_j;
            const double h = uh(gen), dt = udt(gen);
            const double consumed = step_energy(d, h, dt, t);
            t += dt;
            if (d.battery_j < 0 || d.battery_j > d.capacity_j || d.credit_j < 0 ||
                d.credit_j > d.capacity_j) {
                o.require(false, "SOC left [0, capacity] at step " + std::to_string(steps));
                return o;
            }
            const double unclamped = before + h * dt - consumed;
            if (unclamped > 0 && unclamped < d.capacity_j) {
                if (std::abs(d.battery_j - unclamped) >
                    rel_tol * std::max(1.0, std::abs(unclamped))) {
                    o.require(false, "energy conservation violated at step " +
                                         std::to_string(steps));
                    return o;
                }
            } else {
                ++clamps;
            }
        }
    }
    o.note(std::to_string(steps) + " steps, " + std::to_string(clamps) + " clamped");
    return o;
}

} // namespace

int main(int argc, char** argv) {
    using Criterion = Outcome (*)();
    const std::vector<std::pair<const char*, Criterion>> criteria{
        {"energy arithmetic oracle", criterion1},
        {"link-budget oracle", criterion2},
        {"blockage oracle", criterion3},
        {"harvested power trends", criterion4},
        {"radio sustainability ordering", criterion5},
        {"mobile vs static beacons", criterion6},
        {"policy ordering", criterion7},
        {"determinism and exit codes", criterion8},
        {"battery invariant fuzz", criterion9},
    };

    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int num = static_cast<int>(i) + 1;
        if (!wanted.empty() && !wanted.count(num)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        const Outcome o = criteria[i].second();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        std::cout << "criterion " << num << " (" << criteria[i].first
                  << "): " << (o.pass ? "PASS" : "FAIL");
        if (!o.detail.str().empty()) std::cout << " [" << o.detail.str() << "]";
        std::printf(" (%.1fs)\n", secs);
        std::cout.flush();
    }
    if (failed) std::cout << failed << " criterion(s) failed\n";
    return failed == 0 ? 0 : 1;
}
