#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "wpcs/wpt.hpp"

using namespace wpcs;

TEST_CASE("free-space path loss reference points") {
    CHECK(fspl_db(1.0, 915e6) == Catch::Approx(31.68).margin(0.01));
    // +20 dB per decade
    CHECK(fspl_db(10.0, 915e6) - fspl_db(1.0, 915e6) == Catch::Approx(20.0));
    // near-field clamp: below d_min the loss stops shrinking
    CHECK(fspl_db(0.1, 915e6, 0.5) == Catch::Approx(fspl_db(0.5, 915e6, 0.5)));
}

TEST_CASE("sensitivity range: omni 8.24 m, directional(16 dBi) 52.0 m") {
    LinkBudgetParams p;
    CHECK(coverage_radius_2d(p, p.tx_gain_omni_dbi, 0.0) == Catch::Approx(8.24).margin(0.05));
    CHECK(coverage_radius_2d(p, p.tx_gain_dir_dbi, 0.0) == Catch::Approx(52.0).margin(0.1));
    // elevated transmitter: ground radius shrinks pythagorean
    const double d3d = coverage_radius_2d(p, p.tx_gain_omni_dbi, 0.0);
    const double r2d = coverage_radius_2d(p, p.tx_gain_omni_dbi, 1.8);
    CHECK(r2d * r2d + 1.8 * 1.8 == Catch::Approx(d3d * d3d).epsilon(1e-9));
    // transmitter too high to reach the device plane at all
    CHECK(coverage_radius_2d(p, p.tx_gain_omni_dbi, 100.0) == 0.0);
}

TEST_CASE("harvest at the sensitivity edge is eta * 10 uW") {
    LinkBudgetParams p;
    const double edge = coverage_radius_2d(p, p.tx_gain_omni_dbi, 0.0);
    const double w = harvested_from_link_w(p, p.tx_gain_omni_dbi, edge * (1 - 1e-9));
    CHECK(w == Catch::Approx(3.0e-6).epsilon(1e-6));
    // just beyond the edge: gated to exactly zero, not attenuated
    CHECK(harvested_from_link_w(p, p.tx_gain_omni_dbi, edge * 1.001) == 0.0);
}

TEST_CASE("dB-domain harvest equals the linear Friis form") {
    LinkBudgetParams p;
    const double wl_term = speed_of_light_mps / (4.0 * M_PI * p.frequency_hz);
    for (double gain : {0.0, 16.0}) {
        const double k = 1.0 * std::pow(10.0, gain / 10.0) * wl_term * wl_term;
        for (double d : {0.7, 1.0, 2.5, 5.0, 8.0}) {
            const double expect = p.conversion_efficiency * k / (d * d);
            if (k / (d * d) < 1e-5) continue; // below sensitivity
            CHECK(harvested_from_link_w(p, gain, d) == Catch::Approx(expect).epsilon(1e-9));
        }
    }
    // inside the near-field clamp the power is evaluated at d_min
    CHECK(harvested_from_link_w(p, 0.0, 0.1) ==
          Catch::Approx(harvested_from_link_w(p, 0.0, 0.5)).epsilon(1e-12));
}

TEST_CASE("blockage probability closed form") {
    BlockageGeometry g;
    g.blocker_density_per_m2 = 0.1;
    CHECK(g.height_fraction() == Catch::Approx(0.5 / 1.8));
    CHECK(blockage_probability(20.0, g) == Catch::Approx(0.1928).margin(5e-4));
    // wearer's own footprint: short links are never blocked
    CHECK(blockage_probability(0.72, g) == 0.0);
    CHECK(blockage_probability(0.0, g) == 0.0);
    BlockageGeometry empty = g;
    empty.blocker_density_per_m2 = 0.0;
    CHECK(blockage_probability(50.0, empty) == 0.0);
    CHECK_THROWS_AS(blockage_probability(-1.0, g), std::invalid_argument);

    BlockageGeometry bad = g;
    bad.blocker_height_m = 5.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("blockage agrees with a Monte-Carlo disk-intersection oracle") {
    // Poisson field of body disks (radius W/2); the link segment below
    // blocker height runs from the device (x=0) toward the beacon, length
    // f_h * d2d, with the wearer's own half-body footprint excluded.
    std::mt19937_64 gen(987654321);
    std::uniform_real_distribution<double> uy(-1.0, 1.0);
    for (double lambda : {0.01, 0.05, 0.1, 0.2}) {
        for (double d2d : {2.0, 5.0, 10.0, 20.0, 40.0}) {
            BlockageGeometry g;
            g.blocker_density_per_m2 = lambda;
            const double r = 0.5 * g.body_diameter_m;
            const double L = g.height_fraction() * d2d;
            const double x_lo = 0.0, x_hi = L + 1.0;
            const double box_area = (x_hi - x_lo) * 2.0;
            std::poisson_distribution<int> pois(lambda * box_area);
            std::uniform_real_distribution<double> uxd(x_lo, x_hi);

            const int trials = 300'000;
            int blocked = 0;
            for (int t = 0; t < trials; ++t) {
                const int n = pois(gen);
                for (int i = 0; i < n; ++i) {
                    const double cx = uxd(gen);
                    const double cy = uy(gen);
                    // disk blocks iff it overlaps the segment strip and its
                    // center is outside the wearer footprint
                    if (cx >= r && cx <= L && std::abs(cy) <= r) {
                        ++blocked;
                        break;
                    }
                }
            }
            const double mc = static_cast<double>(blocked) / trials;
            INFO("lambda=" << lambda << " d2d=" << d2d);
            CHECK(mc == Catch::Approx(blockage_probability(d2d, g)).margin(0.01));
        }
    }
}

namespace {
struct FixedRng {
    std::vector<double> draws;
    std::size_t i = 0;
    bool bernoulli(double p) { return draws.at(i++) < p; }
};
} // namespace

TEST_CASE("beam assignment: LoS filter, nearest-first, budget, tie-break") {
    Beacon b;
    b.id = 0;
    b.antenna = AntennaKind::Directional;
    BlockageGeometry g;
    g.blocker_density_per_m2 = 0.2;

    std::vector<BeamCandidate> cands;
    for (int i = 0; i < 10; ++i)
        cands.push_back({i, 30.0, 30.0}); // equal distances: tie-break by id
    FixedRng rng;
    rng.draws.assign(10, 0.999); // all pass the LoS draw
    auto ids = assign_beams(b, cands, g, rng);
    REQUIRE(ids.size() == 6);
    for (int i = 0; i < 6; ++i) CHECK(ids[i] == i);

    // nearest-first ordering
    cands.clear();
    for (int i = 0; i < 8; ++i)
        cands.push_back({i, 40.0 - i, 40.0 - static_cast<double>(i)});
    rng = FixedRng{};
    rng.draws.assign(8, 0.999);
    ids = assign_beams(b, cands, g, rng);
    REQUIRE(ids.size() == 6);
    for (int i = 0; i < 6; ++i) CHECK(ids[i] == 7 - i);

    // blocked candidates drop out before the budget applies
    rng = FixedRng{};
    rng.draws.assign(8, 0.0); // every draw below p => blocked
    ids = assign_beams(b, cands, g, rng);
    CHECK(ids.empty());

    Beacon omni = b;
    omni.antenna = AntennaKind::Omni;
    FixedRng r2;
    CHECK_THROWS_AS(assign_beams(omni, cands, g, r2), std::invalid_argument);
}

TEST_CASE("harvested_power_w sums omni links and honors beam membership") {
    LinkBudgetParams p;
    BlockageGeometry g; // zero density -> LoS always clear
    std::vector<Beacon> beacons(2);
    beacons[0] = {0, 0.0, 0.0, 1.2, AntennaKind::Omni, 6, -1};
    beacons[1] = {1, 3.0, 0.0, 1.2, AntennaKind::Directional, 6, -1};
    BeamMap beams(2);
    beams[1] = {7}; // device 7 owns the only beam

    FixedRng rng;
    rng.draws.assign(4, 0.999);
    const double w7 = harvested_power_w(4.0, 0.0, 1.2, 7, beacons, p, g, rng, beams);
    const double omni_part = harvested_from_link_w(p, 0.0, 4.0);
    const double dir_part = harvested_from_link_w(p, 16.0, 1.0);
    CHECK(w7 == Catch::Approx(omni_part + dir_part).epsilon(1e-12));

    FixedRng rng2;
    rng2.draws.assign(4, 0.999);
    const double w8 = harvested_power_w(4.0, 0.0, 1.2, 8, beacons, p, g, rng2, beams);
    CHECK(w8 == Catch::Approx(omni_part).epsilon(1e-12)); // no beam for device 8
}
