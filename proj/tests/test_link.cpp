#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <complex>
#include <numbers>

#include "beamhop/link.hpp"
#include "beamhop/rng.hpp"

using namespace beamhop;

namespace {

// Direct double-sum pattern oracle, independent of the closed form in link.
double af_double_sum_db(int n, double d, double theta_deg, double phi_deg) {
    const double theta = deg_to_rad(theta_deg), phi = deg_to_rad(phi_deg);
    const double u = std::sin(theta) * std::cos(phi);
    const double v = std::sin(theta) * std::sin(phi);
    std::complex<double> sum{0.0, 0.0};
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const double phase = 2.0 * std::numbers::pi * d * (a * u + b * v);
            sum += std::polar(1.0, phase);
        }
    }
    const double af = std::norm(sum) / (static_cast<double>(n) * n * n * n);
    return std::max(kPatternFloorDb, 10.0 * std::log10(af));
}

SatelliteState satellite_over(double lat_deg, double lon_deg, double altitude_km) {
    SatelliteState sat;
    sat.altitude_km = altitude_km;
    sat.ecef_position_km = geodetic_to_ecef({lat_deg, lon_deg, altitude_km});
    return sat;
}

Spotbeam beam_at(int beam_id, int satellite_id, double lat_deg, double lon_deg) {
    Spotbeam beam;
    beam.beam_id = beam_id;
    beam.satellite_id = satellite_id;
    beam.center = {lat_deg, lon_deg, 0.0};
    return beam;
}

}  // namespace

TEST_CASE("array factor basics") {
    const ArrayGeometry array{28, 0.46};
    CHECK(array_factor_gain_db(array, 0.0, 0.0) == doctest::Approx(0.0));
    CHECK(array_factor_gain_db(array, 0.0, 123.0) == doctest::Approx(0.0));

    const ArrayGeometry single{1, 0.46};
    for (double theta : {0.0, 10.0, 45.0, 90.0})
        for (double phi : {0.0, 90.0, 200.0})
            CHECK(array_factor_gain_db(single, theta, phi) == doctest::Approx(0.0));

    CHECK_THROWS_AS(array_factor_gain_db(array, -0.1, 0.0), std::domain_error);
    CHECK_THROWS_AS(array_factor_gain_db(array, 90.1, 0.0), std::domain_error);
}

TEST_CASE("array factor matches the direct double sum") {
    const ArrayGeometry array{28, 0.46};
    for (double theta : {0.3, 1.0, 2.5, 4.0, 7.0, 15.0, 30.0, 60.0, 89.0}) {
        for (double phi : {0.0, 17.0, 45.0, 90.0, 133.0, 260.0}) {
            const double expected = af_double_sum_db(28, 0.46, theta, phi);
            const double got = array_factor_gain_db(array, theta, phi);
            CHECK(got == doctest::Approx(expected).epsilon(1e-9));
        }
    }
}

TEST_CASE("array factor first null near 4.45 degrees, floored at -60 dB") {
    const ArrayGeometry array{28, 0.46};
    // Theory: first null of the 28-element axis at sin(theta) = 1/(28 * 0.46).
    const double null_theta = rad_to_deg(std::asin(1.0 / (28.0 * 0.46)));
    CHECK(null_theta == doctest::Approx(4.4529).epsilon(1e-4));
    CHECK(array_factor_gain_db(array, null_theta, 0.0) == doctest::Approx(kPatternFloorDb));

    double first_floor = -1.0;
    for (double theta = 0.01; theta < 10.0; theta += 0.001) {
        if (array_factor_gain_db(array, theta, 0.0) <= kPatternFloorDb + 1e-9) {
            first_floor = theta;
            break;
        }
    }
    CHECK(std::abs(first_floor - 4.45) < 0.05);

    for (double theta : {1.0, 4.4529, 30.0, 88.0})
        CHECK(array_factor_gain_db(array, theta, 0.0) >= kPatternFloorDb);
}

TEST_CASE("array factor symmetric under phi -> phi + 180") {
    const ArrayGeometry array{28, 0.46};
    for (double theta : {1.0, 5.0, 20.0, 70.0})
        for (double phi : {0.0, 30.0, 77.0, 145.0})
            CHECK(array_factor_gain_db(array, theta, phi) ==
                  doctest::Approx(array_factor_gain_db(array, theta, phi + 180.0)).epsilon(1e-12));
}

TEST_CASE("free-space path loss") {
    CHECK(path_loss_fspl_db(600.0, 2.0) == doctest::Approx(154.0336).epsilon(1e-6));
    CHECK(path_loss_fspl_db(600.0, 20.0) == doctest::Approx(174.0336).epsilon(1e-6));
    CHECK(path_loss_fspl_db(600.0, 20.0) - path_loss_fspl_db(600.0, 2.0) ==
          doctest::Approx(20.0).epsilon(1e-12));
    CHECK(path_loss_fspl_db(1.0, 1.0) == doctest::Approx(92.45));

    for (double d : {1.0, 37.5, 600.0, 2830.0})
        CHECK(path_loss_fspl_db(2.0 * d, 5.0) - path_loss_fspl_db(d, 5.0) ==
              doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(path_loss_fspl_db(0.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(path_loss_fspl_db(600.0, -2.0), std::domain_error);
}

TEST_CASE("noise power") {
    CHECK(noise_power_dbm(s_band()) == doctest::Approx(-92.23).epsilon(1e-4));
    CHECK(noise_power_dbm(ka_band()) == doctest::Approx(-89.79).epsilon(1e-4));

    BandProfile hz;
    hz.bandwidth_mhz = 1e-6;  // 1 Hz
    hz.ue_noise_figure_db = 0.0;
    CHECK(noise_power_dbm(hz) == doctest::Approx(-174.0));
    CHECK(noise_power_mw(hz) == doctest::Approx(db_to_linear(-174.0)));
}

TEST_CASE("channel gain at boresight composes the four terms") {
    const ArrayGeometry array{28, 0.46};
    const auto sat = satellite_over(0.0, 0.0, 600.0);
    const GeodeticPoint center{0.0, 0.0, 0.0};

    CHECK(channel_gain_db(center, center, sat, ka_band(), array) ==
          doctest::Approx(0.0 + 30.5 + 39.7 - 174.0336).epsilon(1e-6));
    CHECK(channel_gain_db(center, center, sat, s_band(), array) ==
          doctest::Approx(0.0 + 24.0 + 0.0 - 154.0336).epsilon(1e-6));
}

TEST_CASE("channel gain at the first pattern null is floor limited") {
    const ArrayGeometry array{28, 0.46};
    const auto sat = satellite_over(0.0, 0.0, 600.0);
    const GeodeticPoint center{0.0, 0.0, 0.0};
    const BandProfile band = ka_band();

    // Walk east until the relative pattern term first hits the floor.
    auto relative_gain = [&](double lon_deg) {
        const GeodeticPoint ue{0.0, lon_deg, 0.0};
        const double slant = slant_distance_km(ue, sat);
        return channel_gain_db(center, ue, sat, band, array) - band.satellite_tx_gain_dbi -
               band.ue_rx_gain_dbi + path_loss_fspl_db(slant, band.carrier_frequency_ghz);
    };
    double lo = 0.0, hi = 0.45;  // first null lies inside (boresight .. ~47 km east)
    REQUIRE(relative_gain(lo) > kPatternFloorDb);
    REQUIRE(relative_gain(hi) > kPatternFloorDb);
    double found = -1.0;
    for (double lon = 0.0; lon <= 0.45; lon += 1e-5) {
        if (relative_gain(lon) <= kPatternFloorDb + 1e-12) {
            found = lon;
            break;
        }
    }
    REQUIRE(found > 0.0);
    CHECK(relative_gain(found) == doctest::Approx(kPatternFloorDb));
}

namespace {

struct TwoSatScene {
    std::vector<SatelliteState> satellites;
    std::vector<std::vector<Spotbeam>> beams;
    std::vector<ScheduleDecision> schedule;
};

TwoSatScene make_two_sat_scene() {
    TwoSatScene scene;
    scene.satellites = {satellite_over(30.0, 105.0, 600.0), satellite_over(31.0, 109.0, 600.0)};
    scene.satellites[0].satellite_id = 0;
    scene.satellites[1].satellite_id = 1;
    scene.beams.push_back({beam_at(0, 0, 30.0, 105.0), beam_at(1, 0, 30.3, 105.8)});
    scene.beams.push_back({beam_at(0, 1, 31.0, 109.0), beam_at(1, 1, 30.6, 108.2)});

    ScheduleDecision d0;
    d0.satellite_id = 0;
    d0.illuminated = {0, 1};
    d0.power_w = {{0, 150.0}, {1, 150.0}};
    ScheduleDecision d1;
    d1.satellite_id = 1;
    d1.illuminated = {0, 1};
    d1.power_w = {{0, 210.0}, {1, 90.0}};
    scene.schedule = {d0, d1};
    return scene;
}

}  // namespace

TEST_CASE("compute_sinr against an exhaustive interference sum") {
    const ArrayGeometry array{28, 0.46};
    const BandProfile band = ka_band();
    TwoSatScene scene = make_two_sat_scene();
    const GeodeticPoint ue{30.05, 105.1, 0.0};

    const LinkSample sample =
        compute_sinr(17, ue, 0, 0, scene.schedule, {scene.satellites, scene.beams}, band, array);

    // Oracle: every illuminated (satellite, beam) pair summed by hand.
    double signal = 0.0, intra = 0.0, inter = 0.0;
    for (int m = 0; m < 2; ++m) {
        for (int k = 0; k < 2; ++k) {
            const double p_mw = scene.schedule[static_cast<std::size_t>(m)].power_w.at(k) * 1000.0;
            const double h = channel_gain_db(scene.beams[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)].center,
                                             ue, scene.satellites[static_cast<std::size_t>(m)], band, array);
            const double rx = p_mw * db_to_linear(h);
            if (m == 0 && k == 0)
                signal = rx;
            else if (m == 0)
                intra += rx;
            else
                inter += rx;
        }
    }
    const double expected = signal / (noise_power_mw(band) + intra + inter);
    CHECK(sample.sinr == doctest::Approx(expected).epsilon(1e-12));
    CHECK(sample.intra_interference_mw == doctest::Approx(intra).epsilon(1e-12));
    CHECK(sample.inter_interference_mw == doctest::Approx(inter).epsilon(1e-12));
    CHECK(sample.ue_id == 17);
}

TEST_CASE("compute_sinr: dimmed serving beam and unit ratio") {
    const ArrayGeometry array{28, 0.46};
    const BandProfile band = ka_band();

    std::vector<SatelliteState> sats{satellite_over(0.0, 0.0, 600.0)};
    sats[0].satellite_id = 0;
    std::vector<std::vector<Spotbeam>> beams{{beam_at(0, 0, 0.0, 0.0)}};
    const GeodeticPoint ue{0.0, 0.0, 0.0};

    SUBCASE("serving beam dimmed yields zero") {
        ScheduleDecision dark;
        dark.satellite_id = 0;
        std::vector<ScheduleDecision> schedule{dark};
        const LinkSample sample = compute_sinr(0, ue, 0, 0, schedule, {sats, beams}, band, array);
        CHECK(sample.sinr == 0.0);
    }
    SUBCASE("power tuned so received power equals noise gives 0 dB") {
        const double h_lin = db_to_linear(channel_gain_db(beams[0][0].center, ue, sats[0], band, array));
        ScheduleDecision lit;
        lit.satellite_id = 0;
        lit.illuminated = {0};
        lit.power_w = {{0, noise_power_mw(band) / (1000.0 * h_lin)}};
        std::vector<ScheduleDecision> schedule{lit};
        const LinkSample sample = compute_sinr(0, ue, 0, 0, schedule, {sats, beams}, band, array);
        CHECK(sample.sinr == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("missing serving assignment is a state error") {
        ScheduleDecision dark;
        dark.satellite_id = 0;
        std::vector<ScheduleDecision> schedule{dark};
        CHECK_THROWS_AS(compute_sinr(0, ue, 0, 5, schedule, {sats, beams}, band, array),
                        std::logic_error);
        CHECK_THROWS_AS(compute_sinr(0, ue, 2, 0, schedule, {sats, beams}, band, array),
                        std::logic_error);
    }
}

TEST_CASE("interference monotonicity and power scaling") {
    const ArrayGeometry array{28, 0.46};
    const BandProfile band = ka_band();
    TwoSatScene scene = make_two_sat_scene();
    const GeodeticPoint ue{30.05, 105.1, 0.0};

    SUBCASE("adding an interfering beam never increases sinr") {
        std::vector<ScheduleDecision> fewer = scene.schedule;
        fewer[1].illuminated = {0};
        fewer[1].power_w = {{0, 210.0}};
        const double before =
            compute_sinr(0, ue, 0, 0, fewer, {scene.satellites, scene.beams}, band, array).sinr;
        const double after =
            compute_sinr(0, ue, 0, 0, scene.schedule, {scene.satellites, scene.beams}, band, array)
                .sinr;
        CHECK(after <= before);
    }
    SUBCASE("uniform power scaling follows c*S / (N0 + c*I)") {
        const LinkSample base =
            compute_sinr(0, ue, 0, 0, scene.schedule, {scene.satellites, scene.beams}, band, array);
        const double c = 3.5;
        std::vector<ScheduleDecision> scaled = scene.schedule;
        for (auto& decision : scaled)
            for (auto& [id, p] : decision.power_w) p *= c;
        const LinkSample boosted =
            compute_sinr(0, ue, 0, 0, scaled, {scene.satellites, scene.beams}, band, array);
        const double signal = db_to_linear(base.received_power_dbm);
        const double interference = base.intra_interference_mw + base.inter_interference_mw;
        CHECK(boosted.sinr ==
              doctest::Approx(c * signal / (base.noise_mw + c * interference)).epsilon(1e-9));
    }
}

TEST_CASE("compute_sinr agrees with a naive reference on random scenes") {
    const ArrayGeometry array{8, 0.46};  // smaller array keeps the oracle cheap
    const BandProfile band = s_band();
    SplitMix64 rng(42);

    for (int trial = 0; trial < 25; ++trial) {
        const int sat_count = 1 + static_cast<int>(rng.next() % 3);
        std::vector<SatelliteState> sats;
        std::vector<std::vector<Spotbeam>> beams;
        std::vector<ScheduleDecision> schedule;
        for (int m = 0; m < sat_count; ++m) {
            auto sat = satellite_over(rng.next_in(25.0, 35.0), rng.next_in(100.0, 115.0), 600.0);
            sat.satellite_id = m;
            sats.push_back(sat);
            const int beam_count = 1 + static_cast<int>(rng.next() % 4);
            std::vector<Spotbeam> list;
            ScheduleDecision decision;
            decision.satellite_id = m;
            for (int k = 0; k < beam_count; ++k) {
                list.push_back(beam_at(k, m, rng.next_in(27.0, 34.0), rng.next_in(102.0, 114.0)));
                if (rng.next_double() < 0.7) {
                    decision.illuminated.push_back(k);
                    decision.power_w[k] = rng.next_in(1.0, 120.0);
                }
            }
            beams.push_back(std::move(list));
            schedule.push_back(std::move(decision));
        }
        if (schedule[0].illuminated.empty()) continue;
        const int serving_beam = schedule[0].illuminated.front();
        const GeodeticPoint ue{rng.next_in(27.0, 34.0), rng.next_in(102.0, 114.0), 0.0};

        const LinkSample sample =
            compute_sinr(1, ue, 0, serving_beam, schedule, {sats, beams}, band, array);

        double signal = 0.0, interference = 0.0;
        for (int m = 0; m < sat_count; ++m) {
            for (int beam_id : schedule[static_cast<std::size_t>(m)].illuminated) {
                const double rx =
                    schedule[static_cast<std::size_t>(m)].power_w.at(beam_id) * 1000.0 *
                    db_to_linear(channel_gain_db(
                        beams[static_cast<std::size_t>(m)][static_cast<std::size_t>(beam_id)].center,
                        ue, sats[static_cast<std::size_t>(m)], band, array));
                if (m == 0 && beam_id == serving_beam)
                    signal = rx;
                else
                    interference += rx;
            }
        }
        const double expected = signal / (noise_power_mw(band) + interference);
        CHECK(sample.sinr == doctest::Approx(expected).epsilon(1e-12));
    }
}
