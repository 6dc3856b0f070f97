#include "beamhop/link.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace beamhop {

BandProfile s_band() {
    BandProfile band;
    band.name = "s";
    band.carrier_frequency_ghz = 2.0;
    band.bandwidth_mhz = 30.0;
    band.subcarrier_spacing_khz = 15.0;
    band.satellite_tx_gain_dbi = 24.0;
    band.ue_rx_gain_dbi = 0.0;
    band.ue_noise_figure_db = 7.0;
    return band;
}

BandProfile ka_band() {
    BandProfile band;
    band.name = "ka";
    band.carrier_frequency_ghz = 20.0;
    band.bandwidth_mhz = 200.0;
    band.subcarrier_spacing_khz = 120.0;
    band.satellite_tx_gain_dbi = 30.5;
    band.ue_rx_gain_dbi = 39.7;
    band.ue_noise_figure_db = 1.2;
    return band;
}

namespace {

// sin(n*pi*x)/sin(pi*x) with the n-valued limit at integer x.
double dirichlet_ratio(double n, double x) {
    const double denom = std::sin(std::numbers::pi * x);
    if (denom == 0.0) return n;
    return std::sin(n * std::numbers::pi * x) / denom;
}

}  // namespace

double array_factor_gain_db(const ArrayGeometry& geometry, double off_boresight_deg,
                            double azimuth_deg) {
    if (off_boresight_deg < 0.0 || off_boresight_deg > 90.0)
        throw std::domain_error("array_factor_gain_db: off-boresight angle outside [0, 90]");
    if (geometry.elements_per_axis < 1 || geometry.element_spacing_wavelengths <= 0.0)
        throw std::domain_error("array_factor_gain_db: invalid array geometry");

    const double n = static_cast<double>(geometry.elements_per_axis);
    const double d = geometry.element_spacing_wavelengths;
    const double theta = deg_to_rad(off_boresight_deg);
    const double phi = deg_to_rad(azimuth_deg);
    const double u = std::sin(theta) * std::cos(phi);
    const double v = std::sin(theta) * std::sin(phi);

    const double fu = dirichlet_ratio(n, d * u) / n;
    const double fv = dirichlet_ratio(n, d * v) / n;
    const double af = fu * fu * fv * fv;
    if (af <= 0.0) return kPatternFloorDb;
    return std::max(kPatternFloorDb, linear_to_db(af));
}

double path_loss_fspl_db(double distance_km, double frequency_ghz) {
    if (distance_km <= 0.0 || frequency_ghz <= 0.0)
        throw std::domain_error("path_loss_fspl_db: distance and frequency must be positive");
    return 92.45 + 20.0 * std::log10(distance_km) + 20.0 * std::log10(frequency_ghz);
}

double noise_power_dbm(const BandProfile& band) {
    const double bandwidth_hz = band.bandwidth_mhz * 1e6;
    return -174.0 + 10.0 * std::log10(bandwidth_hz) + band.ue_noise_figure_db +
           10.0 * std::log10(band.ambient_temperature_k / 290.0);
}

double noise_power_mw(const BandProfile& band) { return db_to_linear(noise_power_dbm(band)); }

namespace {

// Orthonormal completion of the boresight axis, aligned with the satellite's
// antenna frame (z toward nadir, x toward the north-most direction in the
// array plane). Fixed fallbacks keep the frame defined at degenerate poses.
struct BeamFrame {
    Vec3 x, y, z;
};

BeamFrame beam_frame(const Vec3& sat_pos, const Vec3& boresight) {
    const Vec3 nadir = normalized(-sat_pos);
    Vec3 x_ant = Vec3{0.0, 0.0, 1.0} - nadir * nadir.z;
    if (norm(x_ant) < 1e-9) x_ant = Vec3{1.0, 0.0, 0.0};
    x_ant = normalized(x_ant);

    BeamFrame frame;
    frame.z = boresight;
    Vec3 x_beam = x_ant - frame.z * dot(x_ant, frame.z);
    if (norm(x_beam) < 1e-9) {
        const Vec3 y_ant = cross(nadir, x_ant);
        x_beam = y_ant - frame.z * dot(y_ant, frame.z);
    }
    frame.x = normalized(x_beam);
    frame.y = cross(frame.z, frame.x);
    return frame;
}

}  // namespace

double channel_gain_db(const GeodeticPoint& beam_center, const GeodeticPoint& ue_pos,
                       const SatelliteState& sat, const BandProfile& band,
                       const ArrayGeometry& geometry) {
    const Vec3 sat_pos = sat.ecef_position_km;
    const Vec3 to_ue = geodetic_to_ecef(ue_pos) - sat_pos;
    const Vec3 boresight = normalized(geodetic_to_ecef(beam_center) - sat_pos);
    const double distance_km = norm(to_ue);
    const Vec3 dir = {to_ue.x / distance_km, to_ue.y / distance_km, to_ue.z / distance_km};

    const double cos_theta = std::clamp(dot(dir, boresight), -1.0, 1.0);
    const double theta_deg = rad_to_deg(std::acos(cos_theta));

    double pattern_db = kPatternFloorDb;
    if (theta_deg <= 90.0) {
        const BeamFrame frame = beam_frame(sat_pos, boresight);
        const double phi_deg = rad_to_deg(std::atan2(dot(dir, frame.y), dot(dir, frame.x)));
        pattern_db = array_factor_gain_db(geometry, theta_deg, phi_deg);
    }

    return pattern_db + band.satellite_tx_gain_dbi + band.ue_rx_gain_dbi -
           path_loss_fspl_db(distance_km, band.carrier_frequency_ghz);
}

LinkSample compute_sinr(int ue_id, const GeodeticPoint& ue_pos, int serving_satellite,
                        int serving_beam, std::span<const ScheduleDecision> schedule,
                        const LinkScene& scene, const BandProfile& band,
                        const ArrayGeometry& geometry) {
    if (schedule.size() != scene.satellites.size() ||
        scene.beams_per_satellite.size() != scene.satellites.size())
        throw std::logic_error("compute_sinr: schedule and scene must cover the same satellites");
    if (serving_satellite < 0 || serving_satellite >= static_cast<int>(scene.satellites.size()))
        throw std::logic_error("compute_sinr: UE has no valid serving satellite");
    const auto& serving_beams = scene.beams_per_satellite[static_cast<std::size_t>(serving_satellite)];
    if (serving_beam < 0 || serving_beam >= static_cast<int>(serving_beams.size()))
        throw std::logic_error("compute_sinr: UE has no valid serving beam");

    LinkSample sample;
    sample.ue_id = ue_id;
    sample.serving_satellite = serving_satellite;
    sample.serving_beam = serving_beam;
    sample.noise_mw = noise_power_mw(band);
    sample.channel_gain_db = channel_gain_db(serving_beams[static_cast<std::size_t>(serving_beam)].center,
                                             ue_pos, scene.satellites[static_cast<std::size_t>(serving_satellite)],
                                             band, geometry);

    double signal_mw = 0.0;
    for (std::size_t m = 0; m < schedule.size(); ++m) {
        const ScheduleDecision& decision = schedule[m];
        const SatelliteState& sat = scene.satellites[m];
        const auto& beams = scene.beams_per_satellite[m];
        for (int beam_id : decision.illuminated) {
            const double power_mw = decision.power_w.at(beam_id) * 1000.0;
            const double gain_db =
                channel_gain_db(beams[static_cast<std::size_t>(beam_id)].center, ue_pos, sat, band, geometry);
            const double rx_mw = power_mw * db_to_linear(gain_db);
            if (static_cast<int>(m) == serving_satellite && beam_id == serving_beam)
                signal_mw = rx_mw;
            else if (static_cast<int>(m) == serving_satellite)
                sample.intra_interference_mw += rx_mw;
            else
                sample.inter_interference_mw += rx_mw;
        }
    }

    sample.received_power_dbm =
        signal_mw > 0.0 ? linear_to_db(signal_mw) : -std::numeric_limits<double>::infinity();
    sample.sinr =
        signal_mw / (sample.noise_mw + sample.intra_interference_mw + sample.inter_interference_mw);
    return sample;
}

}  // namespace beamhop
