#include "beamhop/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>

namespace beamhop {

namespace {

using nlohmann::json;

[[noreturn]] void value_error(const std::string& key, const std::string& what) {
    throw ConfigError(ConfigError::Kind::kValue, "config value error for `" + key + "`: " + what);
}

// Tracks which keys of an object were consumed and rejects the rest.
class KeySet {
public:
    KeySet(const json& obj, std::string scope) : obj_(obj), scope_(std::move(scope)) {
        if (!obj_.is_object())
            value_error(scope_.empty() ? "<root>" : scope_, "expected an object");
    }

    bool has(const std::string& key) {
        consumed_.insert(key);
        return obj_.contains(key);
    }

    const json& at(const std::string& key) {
        consumed_.insert(key);
        return obj_.at(key);
    }

    std::string qualified(const std::string& key) const {
        return scope_.empty() ? key : scope_ + "." + key;
    }

    void finish() const {
        for (const auto& [key, value] : obj_.items()) {
            if (!consumed_.count(key))
                throw ConfigError(ConfigError::Kind::kUnknownKey,
                                  "unknown config key `" + qualified(key) + "`");
        }
    }

private:
    const json& obj_;
    std::string scope_;
    std::set<std::string> consumed_;
};

double get_number(KeySet& keys, const std::string& key, double fallback) {
    if (!keys.has(key)) return fallback;
    const json& v = keys.at(key);
    if (!v.is_number()) value_error(keys.qualified(key), "expected a number");
    return v.get<double>();
}

int get_int(KeySet& keys, const std::string& key, int fallback) {
    if (!keys.has(key)) return fallback;
    const json& v = keys.at(key);
    if (!v.is_number_integer()) value_error(keys.qualified(key), "expected an integer");
    return v.get<int>();
}

bool get_bool(KeySet& keys, const std::string& key, bool fallback) {
    if (!keys.has(key)) return fallback;
    const json& v = keys.at(key);
    if (!v.is_boolean()) value_error(keys.qualified(key), "expected a boolean");
    return v.get<bool>();
}

std::string get_string(KeySet& keys, const std::string& key, const std::string& fallback) {
    if (!keys.has(key)) return fallback;
    const json& v = keys.at(key);
    if (!v.is_string()) value_error(keys.qualified(key), "expected a string");
    return v.get<std::string>();
}

std::uint64_t as_uint64(const json& v, const std::string& key) {
    if (!(v.is_number_integer() && (v.is_number_unsigned() || v.get<std::int64_t>() >= 0)))
        value_error(key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

const std::vector<std::string> kTopLevelKeys = {
    "band",         "scheduler",        "traffic",       "constellation",
    "region",       "ue_count",         "satellite_count", "min_elevation_deg",
    "K",            "diameter_km",      "D_km",          "I_max",
    "P_max_W",      "packet_size_bytes", "arrival_rate", "slot_length_s",
    "horizon_s",    "seed",             "phy",           "live_propagation",
    "workers",      "out_dir",          "ue_positions_file", "band_overrides"};

std::string env_name(const std::string& key) {
    std::string name = "BEAMHOP_";
    for (char c : key) name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return name;
}

json apply_env_overrides(json doc) {
    for (const std::string& key : kTopLevelKeys) {
        const char* raw = std::getenv(env_name(key).c_str());
        if (!raw) continue;
        json value = json::parse(raw, nullptr, false);
        if (value.is_discarded()) value = std::string(raw);  // bare strings need no quotes
        doc[key] = value;
    }
    return doc;
}

}  // namespace

SchedulerKind scheduler_from_string(const std::string& name) {
    if (name == "distance_limit") return SchedulerKind::kDistanceLimit;
    if (name == "no_limit") return SchedulerKind::kNoLimit;
    if (name == "round_robin") return SchedulerKind::kRoundRobin;
    value_error("scheduler", "`" + name + "` is not one of distance_limit, no_limit, round_robin");
}

TrafficKind traffic_from_string(const std::string& name) {
    if (name == "full_buffer") return TrafficKind::kFullBuffer;
    if (name == "ftp3") return TrafficKind::kFtp3;
    value_error("traffic", "`" + name + "` is not one of full_buffer, ftp3");
}

ExperimentConfig parse_config(const std::filesystem::path& path, bool apply_env) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(ConfigError::Kind::kIo, "cannot open config file: " + path.string());
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded())
        throw ConfigError(ConfigError::Kind::kSyntax,
                          "config file is not well-formed JSON: " + path.string());
    return parse_config_json(doc, path.string(), apply_env);
}

namespace {

ExperimentConfig parse_resolved(const json& resolved) {
    KeySet keys(resolved, "");
    ExperimentConfig config;

    config.band = get_string(keys, "band", config.band);
    if (config.band != "s" && config.band != "ka")
        value_error("band", "`" + config.band + "` is not one of s, ka");
    config.band_profile = config.band == "s" ? s_band() : ka_band();

    if (keys.has("scheduler")) {
        const json& v = keys.at("scheduler");
        config.schedulers.clear();
        if (v.is_string()) {
            config.schedulers.push_back(v.get<std::string>());
        } else if (v.is_array()) {
            for (const json& item : v) {
                if (!item.is_string()) value_error("scheduler", "expected scheme names");
                config.schedulers.push_back(item.get<std::string>());
            }
        } else {
            value_error("scheduler", "expected a name or a list of names");
        }
    }
    if (config.schedulers.empty()) value_error("scheduler", "list must not be empty");
    std::set<std::string> seen;
    for (const std::string& name : config.schedulers) {
        scheduler_from_string(name);  // validates
        if (!seen.insert(name).second) value_error("scheduler", "duplicate scheme `" + name + "`");
    }

    config.traffic = get_string(keys, "traffic", config.traffic);
    traffic_from_string(config.traffic);  // validates

    if (keys.has("constellation")) {
        KeySet sub(keys.at("constellation"), "constellation");
        config.constellation.total_satellites =
            get_int(sub, "satellites", config.constellation.total_satellites);
        config.constellation.planes = get_int(sub, "planes", config.constellation.planes);
        config.constellation.inclination_deg =
            get_number(sub, "inclination_deg", config.constellation.inclination_deg);
        config.constellation.altitude_km =
            get_number(sub, "altitude_km", config.constellation.altitude_km);
        config.constellation.phasing_factor =
            get_int(sub, "phasing_factor", config.constellation.phasing_factor);
        sub.finish();
    }
    if (config.constellation.total_satellites < 1 || config.constellation.planes < 1)
        value_error("constellation.satellites", "must be positive");
    if (config.constellation.total_satellites % config.constellation.planes != 0)
        value_error("constellation.satellites", "must be divisible by constellation.planes");
    if (config.constellation.inclination_deg < 0.0 || config.constellation.inclination_deg > 180.0)
        value_error("constellation.inclination_deg", "must lie in [0, 180]");
    if (config.constellation.altitude_km <= 0.0)
        value_error("constellation.altitude_km", "must be positive");

    if (keys.has("region")) {
        KeySet sub(keys.at("region"), "region");
        config.region.lon_min_deg = get_number(sub, "lon_min_deg", config.region.lon_min_deg);
        config.region.lon_max_deg = get_number(sub, "lon_max_deg", config.region.lon_max_deg);
        config.region.lat_min_deg = get_number(sub, "lat_min_deg", config.region.lat_min_deg);
        config.region.lat_max_deg = get_number(sub, "lat_max_deg", config.region.lat_max_deg);
        sub.finish();
    }
    if (config.region.lat_min_deg < -90.0 || config.region.lat_max_deg > 90.0 ||
        config.region.lat_min_deg >= config.region.lat_max_deg)
        value_error("region.lat_min_deg", "latitude box must be ordered and within [-90, 90]");
    if (config.region.lon_min_deg <= -180.0 || config.region.lon_max_deg > 180.0 ||
        config.region.lon_min_deg >= config.region.lon_max_deg)
        value_error("region.lon_min_deg", "longitude box must be ordered and within (-180, 180]");

    config.ue_count = get_int(keys, "ue_count", config.ue_count);
    if (config.ue_count < 0) value_error("ue_count", "must be >= 0");
    config.satellite_count = get_int(keys, "satellite_count", config.satellite_count);
    if (config.satellite_count < 1) value_error("satellite_count", "must be >= 1");
    config.min_elevation_deg = get_number(keys, "min_elevation_deg", config.min_elevation_deg);
    if (config.min_elevation_deg < 0.0 || config.min_elevation_deg >= 90.0)
        value_error("min_elevation_deg", "must lie in [0, 90)");

    config.beams_per_satellite = get_int(keys, "K", config.beams_per_satellite);
    if (config.beams_per_satellite < 0) value_error("K", "must be >= 0");
    config.beam_diameter_km = get_number(keys, "diameter_km", config.beam_diameter_km);
    if (config.beam_diameter_km <= 0.0) value_error("diameter_km", "must be positive");
    config.distance_limit_km = get_number(keys, "D_km", config.distance_limit_km);
    if (config.distance_limit_km < 0.0) value_error("D_km", "must be >= 0");

    if (keys.has("I_max")) {
        const json& v = keys.at("I_max");
        config.i_max_values.clear();
        if (v.is_number_integer()) {
            config.i_max_values.push_back(v.get<int>());
        } else if (v.is_array()) {
            for (const json& item : v) {
                if (!item.is_number_integer()) value_error("I_max", "expected integers");
                config.i_max_values.push_back(item.get<int>());
            }
        } else {
            value_error("I_max", "expected an integer or a list of integers");
        }
    }
    if (config.i_max_values.empty()) value_error("I_max", "sweep list must not be empty");
    for (int v : config.i_max_values)
        if (v < 1) value_error("I_max", "every value must be >= 1");

    config.p_max_w = get_number(keys, "P_max_W", config.p_max_w);
    if (config.p_max_w <= 0.0) value_error("P_max_W", "must be positive");

    if (keys.has("packet_size_bytes")) {
        config.packet_size_bytes = as_uint64(keys.at("packet_size_bytes"), "packet_size_bytes");
        if (config.packet_size_bytes == 0) value_error("packet_size_bytes", "must be positive");
    } else if (config.band == "s" && config.traffic == "ftp3") {
        config.packet_size_bytes = 50'000;  // 0.05 Mbyte packets on the S-band system
    }

    config.arrival_rate_per_s = get_number(keys, "arrival_rate", config.arrival_rate_per_s);
    if (config.arrival_rate_per_s < 0.0) value_error("arrival_rate", "must be >= 0");
    config.slot_length_s = get_number(keys, "slot_length_s", config.slot_length_s);
    if (config.slot_length_s <= 0.0) value_error("slot_length_s", "must be positive");
    config.horizon_s = get_number(keys, "horizon_s", config.horizon_s);
    if (config.horizon_s <= 0.0) value_error("horizon_s", "must be positive");
    try {
        SlotClock::make(config.horizon_s, config.slot_length_s);
    } catch (const std::invalid_argument&) {
        value_error("horizon_s", "must be a whole number of slots of slot_length_s");
    }

    if (keys.has("seed")) {
        const json& v = keys.at("seed");
        config.seeds.clear();
        if (v.is_array()) {
            for (const json& item : v) config.seeds.push_back(as_uint64(item, "seed"));
        } else {
            config.seeds.push_back(as_uint64(v, "seed"));
        }
    }
    if (config.seeds.empty()) value_error("seed", "list must not be empty");

    if (keys.has("phy")) {
        KeySet sub(keys.at("phy"), "phy");
        config.phy.efficiency = get_number(sub, "efficiency", config.phy.efficiency);
        config.phy.spectral_efficiency_cap_bps_hz =
            get_number(sub, "se_cap_bps_hz", config.phy.spectral_efficiency_cap_bps_hz);
        sub.finish();
    }
    if (config.phy.efficiency <= 0.0 || config.phy.efficiency > 1.0)
        value_error("phy.efficiency", "must lie in (0, 1]");
    if (config.phy.spectral_efficiency_cap_bps_hz <= 0.0)
        value_error("phy.se_cap_bps_hz", "must be positive");

    config.live_propagation = get_bool(keys, "live_propagation", config.live_propagation);
    config.workers = get_int(keys, "workers", config.workers);
    if (config.workers < 1) value_error("workers", "must be >= 1");
    config.out_dir = get_string(keys, "out_dir", config.out_dir);

    if (keys.has("ue_positions_file")) {
        const json& v = keys.at("ue_positions_file");
        if (v.is_null())
            config.ue_positions_file.reset();
        else if (v.is_string())
            config.ue_positions_file = v.get<std::string>();
        else
            value_error("ue_positions_file", "expected a path or null");
    }

    if (keys.has("band_overrides")) {
        KeySet sub(keys.at("band_overrides"), "band_overrides");
        BandProfile& b = config.band_profile;
        b.carrier_frequency_ghz = get_number(sub, "carrier_frequency_ghz", b.carrier_frequency_ghz);
        b.bandwidth_mhz = get_number(sub, "bandwidth_mhz", b.bandwidth_mhz);
        b.subcarrier_spacing_khz = get_number(sub, "subcarrier_spacing_khz", b.subcarrier_spacing_khz);
        b.satellite_tx_gain_dbi = get_number(sub, "tx_gain_dbi", b.satellite_tx_gain_dbi);
        b.ue_rx_gain_dbi = get_number(sub, "rx_gain_dbi", b.ue_rx_gain_dbi);
        b.ue_noise_figure_db = get_number(sub, "noise_figure_db", b.ue_noise_figure_db);
        b.ambient_temperature_k = get_number(sub, "ambient_temperature_k", b.ambient_temperature_k);
        sub.finish();
        if (b.carrier_frequency_ghz <= 0.0)
            value_error("band_overrides.carrier_frequency_ghz", "must be positive");
        if (b.bandwidth_mhz <= 0.0) value_error("band_overrides.bandwidth_mhz", "must be positive");
        if (b.ambient_temperature_k <= 0.0)
            value_error("band_overrides.ambient_temperature_k", "must be positive");
    }

    keys.finish();
    return config;
}

}  // namespace

ExperimentConfig parse_config_json(const nlohmann::json& doc, const std::string& source,
                                   bool apply_env) {
    try {
        return parse_resolved(apply_env ? apply_env_overrides(doc) : doc);
    } catch (const ConfigError& e) {
        throw ConfigError(e.kind(), std::string(e.what()) + " (config source: " + source + ")");
    }
}

nlohmann::json to_json(const ExperimentConfig& config) {
    json doc;
    doc["band"] = config.band;
    doc["scheduler"] = config.schedulers;
    doc["traffic"] = config.traffic;
    doc["constellation"] = {{"satellites", config.constellation.total_satellites},
                            {"planes", config.constellation.planes},
                            {"inclination_deg", config.constellation.inclination_deg},
                            {"altitude_km", config.constellation.altitude_km},
                            {"phasing_factor", config.constellation.phasing_factor}};
    doc["region"] = {{"lon_min_deg", config.region.lon_min_deg},
                     {"lon_max_deg", config.region.lon_max_deg},
                     {"lat_min_deg", config.region.lat_min_deg},
                     {"lat_max_deg", config.region.lat_max_deg}};
    doc["ue_count"] = config.ue_count;
    doc["satellite_count"] = config.satellite_count;
    doc["min_elevation_deg"] = config.min_elevation_deg;
    doc["K"] = config.beams_per_satellite;
    doc["diameter_km"] = config.beam_diameter_km;
    doc["D_km"] = config.distance_limit_km;
    doc["I_max"] = config.i_max_values;
    doc["P_max_W"] = config.p_max_w;
    doc["packet_size_bytes"] = config.packet_size_bytes;
    doc["arrival_rate"] = config.arrival_rate_per_s;
    doc["slot_length_s"] = config.slot_length_s;
    doc["horizon_s"] = config.horizon_s;
    doc["seed"] = config.seeds;
    doc["phy"] = {{"efficiency", config.phy.efficiency},
                  {"se_cap_bps_hz", config.phy.spectral_efficiency_cap_bps_hz}};
    doc["live_propagation"] = config.live_propagation;
    doc["workers"] = config.workers;
    doc["out_dir"] = config.out_dir;
    doc["ue_positions_file"] =
        config.ue_positions_file ? json(*config.ue_positions_file) : json(nullptr);
    doc["band_overrides"] = {{"carrier_frequency_ghz", config.band_profile.carrier_frequency_ghz},
                             {"bandwidth_mhz", config.band_profile.bandwidth_mhz},
                             {"subcarrier_spacing_khz", config.band_profile.subcarrier_spacing_khz},
                             {"tx_gain_dbi", config.band_profile.satellite_tx_gain_dbi},
                             {"rx_gain_dbi", config.band_profile.ue_rx_gain_dbi},
                             {"noise_figure_db", config.band_profile.ue_noise_figure_db},
                             {"ambient_temperature_k", config.band_profile.ambient_temperature_k}};
    return doc;
}

}  // namespace beamhop
