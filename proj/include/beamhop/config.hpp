#pragma once

// Experiment configuration: JSON file in, fully resolved config out. Unknown
// keys are rejected; every diagnostic names the offending key. The emitted
// manifest (to_json) round-trips through parse_config_json unchanged.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "beamhop/engine.hpp"

namespace beamhop {

class ConfigError : public std::runtime_error {
public:
    enum class Kind { kIo, kSyntax, kValue, kUnknownKey };

    ConfigError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct RegionBox {
    double lon_min_deg = 103.0;
    double lon_max_deg = 113.0;
    double lat_min_deg = 28.0;
    double lat_max_deg = 33.0;

    bool operator==(const RegionBox&) const = default;
};

struct ExperimentConfig {
    std::string band = "ka";  // selects the BandProfile defaults
    std::vector<std::string> schedulers{"distance_limit"};
    std::string traffic = "full_buffer";
    WalkerConstellation constellation{};
    RegionBox region{};
    int ue_count = 1000;
    int satellite_count = 4;  // serving satellites picked nearest the region center
    double min_elevation_deg = 10.0;
    int beams_per_satellite = 100;  // K
    double beam_diameter_km = 42.0;
    double distance_limit_km = 42.0;  // D_km
    std::vector<int> i_max_values{40};
    double p_max_w = 300.0;
    std::uint64_t packet_size_bytes = 500'000;
    double arrival_rate_per_s = 8.0;
    double slot_length_s = 0.001;
    double horizon_s = 1.0;
    std::vector<std::uint64_t> seeds{1};
    PhyModel phy{};
    bool live_propagation = false;
    int workers = 1;
    std::string out_dir = "out";
    std::optional<std::string> ue_positions_file;
    BandProfile band_profile;  // resolved from band + band_overrides

    bool operator==(const ExperimentConfig&) const = default;
};

// Environment overrides: BEAMHOP_<KEY> (key upper-cased) replaces any
// top-level scalar or list key, parsed as a JSON value, e.g. BEAMHOP_SEED=7 or
// BEAMHOP_I_MAX='[10,20]'. Applied between the file and CLI flags.
ExperimentConfig parse_config(const std::filesystem::path& path, bool apply_env = true);
ExperimentConfig parse_config_json(const nlohmann::json& doc, const std::string& source,
                                   bool apply_env = false);

// Fully resolved manifest with every key explicit.
nlohmann::json to_json(const ExperimentConfig& config);

SchedulerKind scheduler_from_string(const std::string& name);
TrafficKind traffic_from_string(const std::string& name);

}  // namespace beamhop
