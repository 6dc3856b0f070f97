#pragma once

// Radio-link math: planar-array beam pattern, free-space path loss, the
// dB-domain channel gain G_t(theta,phi) + G_T + G_R - PL(d), thermal noise,
// and SINR with intra- and inter-satellite interference summed in linear mW.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "beamhop/orbits.hpp"
#include "beamhop/scheduler.hpp"

namespace beamhop {

struct BandProfile {
    std::string name;
    double carrier_frequency_ghz = 20.0;
    double bandwidth_mhz = 200.0;
    double subcarrier_spacing_khz = 120.0;
    double satellite_tx_gain_dbi = 30.5;  // G_T
    double ue_rx_gain_dbi = 39.7;         // G_R
    double ue_noise_figure_db = 1.2;
    double ambient_temperature_k = 290.0;

    bool operator==(const BandProfile&) const = default;
};

// 2 GHz / 30 MHz / 15 kHz SCS serving handheld UEs (omni receive antenna).
BandProfile s_band();
// 20 GHz / 200 MHz / 120 kHz SCS serving VSAT UEs.
BandProfile ka_band();

// Square planar array, elements on an N x N grid with uniform spacing.
struct ArrayGeometry {
    int elements_per_axis = 28;
    double element_spacing_wavelengths = 0.46;

    bool operator==(const ArrayGeometry&) const = default;
};

// Relative pattern gains below the boresight peak are clamped here; keeps the
// nulls finite and is far below any interference relevance.
inline constexpr double kPatternFloorDb = -60.0;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

// Normalized uniform-planar-array power pattern in dB (<= 0, 0 at boresight).
// theta is the off-boresight angle in [0, 90] degrees (std::domain_error
// outside), phi the azimuth around the boresight axis.
double array_factor_gain_db(const ArrayGeometry& geometry, double off_boresight_deg,
                            double azimuth_deg);

// Free-space path loss: 92.45 + 20 log10(d_km) + 20 log10(f_GHz).
// Non-positive inputs raise std::domain_error.
double path_loss_fspl_db(double distance_km, double frequency_ghz);

// Thermal noise floor in linear mW: -174 dBm/Hz reference at 290 K, scaled by
// bandwidth, noise figure, and the profile's ambient temperature.
double noise_power_mw(const BandProfile& band);
double noise_power_dbm(const BandProfile& band);

// The dB channel gain from a satellite transmitting toward beam_center to a UE
// at ue_pos: relative pattern gain + G_T + G_R - FSPL. The pattern is steered
// at the beam center; directions behind the array plane take the pattern floor.
double channel_gain_db(const GeodeticPoint& beam_center, const GeodeticPoint& ue_pos,
                       const SatelliteState& sat, const BandProfile& band,
                       const ArrayGeometry& geometry);

struct LinkSample {
    int ue_id = -1;
    int serving_satellite = -1;
    int serving_beam = -1;
    double channel_gain_db = 0.0;
    double received_power_dbm = 0.0;
    double intra_interference_mw = 0.0;
    double inter_interference_mw = 0.0;
    double noise_mw = 0.0;
    double sinr = 0.0;  // linear ratio
};

// Geometry view for SINR: satellites and their beam lists, both indexed by
// satellite_id (so satellites[m].satellite_id == m and beam k of satellite m
// is beams_per_satellite[m][k]).
struct LinkScene {
    std::span<const SatelliteState> satellites;
    std::span<const std::vector<Spotbeam>> beams_per_satellite;
};

// SINR of one UE under the given per-satellite schedule (indexed like the
// scene). Every lit beam of every satellite contributes; the serving beam
// feeds the numerator, everything else the interference terms. A dimmed
// serving beam yields sinr = 0. Throws std::logic_error when the serving
// assignment is out of range.
LinkSample compute_sinr(int ue_id, const GeodeticPoint& ue_pos, int serving_satellite,
                        int serving_beam, std::span<const ScheduleDecision> schedule,
                        const LinkScene& scene, const BandProfile& band,
                        const ArrayGeometry& geometry);

}  // namespace beamhop
