#include "beamhop/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace beamhop {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kUeDropStream = 0x7565'6472'6f70ULL;  // "uedrop"

class Fnv1a {
public:
    void add_bytes(const void* data, std::size_t size) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < size; ++i) {
            hash_ ^= bytes[i];
            hash_ *= 0x100000001B3ULL;
        }
    }
    void add(double v) { add_bytes(&v, sizeof v); }
    void add(int v) { add_bytes(&v, sizeof v); }
    std::uint64_t value() const { return hash_; }

private:
    std::uint64_t hash_ = 0xCBF29CE484222325ULL;
};

std::vector<GeodeticPoint> load_ue_positions(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open UE positions file: " + path.string());
    std::vector<GeodeticPoint> positions;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {  // header row
            first = false;
            continue;
        }
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 3)
            throw IoError("UE positions file: expected `ue_id,lat_deg,lon_deg` rows in " +
                          path.string());
        GeodeticPoint p;
        p.latitude_deg = std::stod(fields[1]);
        p.longitude_deg = std::stod(fields[2]);
        positions.push_back(p);
    }
    return positions;
}

std::string format_double(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.10g", v);
    return buffer;
}

std::string hash_hex(std::uint64_t v) {
    char buffer[20];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(v));
    return buffer;
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output file for writing: " + path.string());
    out << contents;
    if (!out) throw IoError("write failed: " + path.string());
}

ExperimentConfig narrowed(const ExperimentConfig& config, const RunSpec& spec) {
    ExperimentConfig single = config;
    single.schedulers = {spec.scheduler};
    single.i_max_values = {spec.i_max};
    single.seeds = {spec.seed};
    single.workers = 1;
    return single;
}

}  // namespace

BuiltScenario build_scenario(const ExperimentConfig& config, std::uint64_t seed) {
    BuiltScenario built;
    Scene& scene = built.scene;
    scene.band = config.band_profile;

    // Serving satellites: nearest to the region center among the visible ones.
    const std::vector<SatelliteState> shell = build_walker(config.constellation, 0.0);
    const GeodeticPoint center{(config.region.lat_min_deg + config.region.lat_max_deg) / 2.0,
                               (config.region.lon_min_deg + config.region.lon_max_deg) / 2.0, 0.0};
    const std::vector<int> visible = visible_satellites(center, shell, config.min_elevation_deg);
    if (static_cast<int>(visible.size()) < config.satellite_count)
        throw std::runtime_error("scenario: only " + std::to_string(visible.size()) +
                                 " satellites visible from the region center, need " +
                                 std::to_string(config.satellite_count));
    for (int i = 0; i < config.satellite_count; ++i) {
        SatelliteState sat = shell[static_cast<std::size_t>(visible[static_cast<std::size_t>(i)])];
        built.stats.walker_satellite_ids.push_back(sat.satellite_id);
        sat.satellite_id = i;  // scene numbering
        scene.satellites.push_back(sat);
    }

    // UE drop: uniform over the lon/lat box from a seeded stream, or an
    // explicit scene file for exact reproduction.
    std::vector<GeodeticPoint> positions;
    if (config.ue_positions_file) {
        positions = load_ue_positions(*config.ue_positions_file);
    } else {
        SplitMix64 rng(stream_seed(seed, kUeDropStream));
        positions.reserve(static_cast<std::size_t>(config.ue_count));
        for (int j = 0; j < config.ue_count; ++j) {
            GeodeticPoint p;
            p.longitude_deg = rng.next_in(config.region.lon_min_deg, config.region.lon_max_deg);
            p.latitude_deg = rng.next_in(config.region.lat_min_deg, config.region.lat_max_deg);
            positions.push_back(p);
        }
    }
    scene.ues.reserve(positions.size());
    for (std::size_t j = 0; j < positions.size(); ++j) {
        UeRecord ue;
        ue.ue_id = static_cast<int>(j);
        ue.position = positions[j];
        ue.band_profile_id = scene.band.name;
        scene.ues.push_back(ue);
    }

    // GNSS reporting: every UE reports to its closest visible satellite.
    std::vector<std::vector<UeRecord>> reporting(scene.satellites.size());
    for (const UeRecord& ue : scene.ues) {
        const std::vector<int> in_view =
            visible_satellites(ue.position, scene.satellites, config.min_elevation_deg);
        if (!in_view.empty())
            reporting[static_cast<std::size_t>(in_view.front())].push_back(ue);
    }

    scene.beams.resize(scene.satellites.size());
    for (std::size_t m = 0; m < scene.satellites.size(); ++m) {
        scene.beams[m] = assign_spotbeams(scene.satellites[m], reporting[m],
                                          config.beams_per_satellite, config.beam_diameter_km);
        built.stats.total_beams += static_cast<int>(scene.beams[m].size());
    }

    const auto mapping =
        associate_ues(scene.ues, scene.satellites, scene.beams, config.min_elevation_deg);
    for (UeRecord& ue : scene.ues) {
        const auto it = mapping.find(ue.ue_id);
        if (it == mapping.end()) continue;
        ue.serving_satellite = it->second.satellite_id;
        ue.serving_beam = it->second.beam_id;
        ++built.stats.covered_ues;
    }
    built.stats.ue_count = static_cast<int>(scene.ues.size());

    Fnv1a hash;
    for (const SatelliteState& sat : scene.satellites) {
        hash.add(sat.ecef_position_km.x);
        hash.add(sat.ecef_position_km.y);
        hash.add(sat.ecef_position_km.z);
    }
    for (const auto& beams : scene.beams) {
        for (const Spotbeam& beam : beams) {
            hash.add(beam.center.latitude_deg);
            hash.add(beam.center.longitude_deg);
        }
    }
    for (const UeRecord& ue : scene.ues) {
        hash.add(ue.position.latitude_deg);
        hash.add(ue.position.longitude_deg);
        hash.add(ue.serving_satellite);
        hash.add(ue.serving_beam);
    }
    built.stats.scene_hash = hash.value();
    return built;
}

std::string RunSpec::run_name() const {
    return scheduler + "_imax" + std::to_string(i_max) + "_seed" + std::to_string(seed);
}

std::vector<RunSpec> expand_runs(const ExperimentConfig& config) {
    std::vector<RunSpec> runs;
    for (const std::string& scheduler : config.schedulers)
        for (int i_max : config.i_max_values)
            for (std::uint64_t seed : config.seeds) runs.push_back(RunSpec{scheduler, i_max, seed});
    return runs;
}

RunOutput execute_run(const ExperimentConfig& config, const RunSpec& spec) {
    BuiltScenario built = build_scenario(config, spec.seed);

    EngineParams params;
    params.scheduler = scheduler_from_string(spec.scheduler);
    params.traffic = traffic_from_string(config.traffic);
    params.i_max = spec.i_max;
    params.distance_limit_km = config.distance_limit_km;
    params.p_max_w = config.p_max_w;
    params.packet_size_bits = config.packet_size_bytes * 8;
    params.arrival_rate_per_s = config.arrival_rate_per_s;
    params.slot_length_s = config.slot_length_s;
    params.horizon_s = config.horizon_s;
    params.seed = spec.seed;
    params.phy = config.phy;
    params.live_propagation = config.live_propagation;

    Simulation sim(std::move(built.scene), params);
    sim.run();

    RunOutput output;
    output.spec = spec;
    output.stats = built.stats;
    output.report = sim.finalize();
    return output;
}

namespace {

std::string sinr_cdf_csv(const MetricsReport& report, const RunSpec& spec) {
    std::string csv = "scheme,i_max,sinr_db,cdf\n";
    std::vector<double> sorted = report.sinr_db_samples;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        csv += spec.scheduler + "," + std::to_string(spec.i_max) + "," + format_double(sorted[i]) +
               "," + format_double(static_cast<double>(i + 1) / n) + "\n";
    }
    return csv;
}

std::string throughput_csv(const MetricsReport& report, const RunSpec& spec) {
    std::string csv = "scheme,i_max,satellite_id,mbps\n";
    for (const SatelliteReport& sat : report.per_satellite) {
        csv += spec.scheduler + "," + std::to_string(spec.i_max) + "," +
               std::to_string(sat.satellite_id) + "," + format_double(sat.throughput_bps / 1e6) +
               "\n";
    }
    return csv;
}

std::string lifetime_cdf_csv(const MetricsReport& report, const RunSpec& spec) {
    std::string csv = "scheme,time_s,cdf\n";
    std::vector<double> sorted = report.packet_lifetimes_s;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        csv += spec.scheduler + "," + format_double(sorted[i]) + "," +
               format_double(static_cast<double>(i + 1) / n) + "\n";
    }
    return csv;
}

std::string satisfaction_csv(const MetricsReport& report, const RunSpec& spec) {
    std::string csv = "scheme,ue_id,satisfaction\n";
    for (const UeSatisfaction& ue : report.per_ue) {
        csv += spec.scheduler + "," + std::to_string(ue.ue_id) + "," +
               format_double(ue.satisfaction) + "\n";
    }
    return csv;
}

json run_summary_json(const MetricsReport& report, const RunSpec& spec, const ScenarioStats& stats,
                      const std::string& band) {
    json doc;
    doc["scheme"] = spec.scheduler;
    doc["i_max"] = spec.i_max;
    doc["seed"] = spec.seed;
    doc["band"] = band;
    doc["system_satisfaction"] =
        report.system_satisfaction ? json(*report.system_satisfaction) : json(nullptr);
    doc["total_offered_bits"] = report.total_offered_bits;
    doc["total_demanded_bits"] = report.total_demanded_bits;
    doc["completed_packets"] = report.completed_packets;
    doc["incomplete_packets"] = report.incomplete_packets;
    doc["sinr_samples"] = report.sinr_db_samples.size();
    doc["slots_run"] = report.slots_run;
    doc["ue_count"] = stats.ue_count;
    doc["covered_ues"] = stats.covered_ues;
    doc["total_beams"] = stats.total_beams;
    doc["scene_hash"] = hash_hex(stats.scene_hash);
    doc["walker_satellite_ids"] = stats.walker_satellite_ids;
    doc["mean_illuminated"] = report.mean_illuminated;
    doc["mean_satellite_throughput_mbps"] = report.mean_satellite_throughput_bps / 1e6;
    json sats = json::array();
    for (const SatelliteReport& sat : report.per_satellite) {
        sats.push_back({{"satellite_id", sat.satellite_id},
                        {"mbps", sat.throughput_bps / 1e6},
                        {"mean_illuminated", sat.mean_illuminated}});
    }
    doc["per_satellite"] = sats;
    return doc;
}

}  // namespace

void emit_results(const MetricsReport& report, const RunSpec& spec, const ScenarioStats& stats,
                  const std::string& band, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir.string());

    write_file(dir / "sinr_cdf.csv", sinr_cdf_csv(report, spec));
    write_file(dir / "throughput.csv", throughput_csv(report, spec));
    write_file(dir / "lifetime_cdf.csv", lifetime_cdf_csv(report, spec));
    write_file(dir / "satisfaction.csv", satisfaction_csv(report, spec));
    write_file(dir / "summary.json", run_summary_json(report, spec, stats, band).dump(2) + "\n");
}

std::vector<RunSummary> run_experiment(const ExperimentConfig& config) {
    const fs::path out_dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir.string());

    write_file(out_dir / "manifest.json", to_json(config).dump(2) + "\n");

    const std::vector<RunSpec> runs = expand_runs(config);
    std::vector<RunSummary> summaries(runs.size());

    std::atomic<std::size_t> cursor{0};
    std::mutex error_mutex;
    std::vector<std::string> errors;

    const auto worker = [&] {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= runs.size()) return;
            try {
                const RunSpec& spec = runs[i];
                RunOutput output = execute_run(config, spec);
                const fs::path run_dir = out_dir / spec.run_name();
                emit_results(output.report, spec, output.stats, config.band, run_dir);
                write_file(run_dir / "manifest.json",
                           to_json(narrowed(config, spec)).dump(2) + "\n");

                RunSummary summary;
                summary.spec = spec;
                summary.stats = output.stats;
                summary.system_satisfaction = output.report.system_satisfaction;
                summary.mean_satellite_throughput_bps = output.report.mean_satellite_throughput_bps;
                summary.mean_illuminated = output.report.mean_illuminated;
                summary.dir = run_dir.string();
                summaries[i] = std::move(summary);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                errors.emplace_back(e.what());
            }
        }
    };

    const int worker_count = std::min<int>(config.workers, static_cast<int>(runs.size()));
    if (worker_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < worker_count; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (!errors.empty()) throw std::runtime_error(errors.front());

    // Cross-scheme satisfaction summary (Table-style), mean over the grid.
    json by_scheme = json::object();
    for (const std::string& scheduler : config.schedulers) {
        double sum = 0.0;
        int count = 0;
        for (const RunSummary& summary : summaries) {
            if (summary.spec.scheduler != scheduler || !summary.system_satisfaction) continue;
            sum += *summary.system_satisfaction;
            ++count;
        }
        by_scheme[scheduler] = count > 0 ? json(sum / count) : json(nullptr);
    }

    json doc;
    doc["system_satisfaction_by_scheme"] = by_scheme;
    json run_list = json::array();
    for (const RunSummary& summary : summaries) {
        json entry;
        entry["scheme"] = summary.spec.scheduler;
        entry["i_max"] = summary.spec.i_max;
        entry["seed"] = summary.spec.seed;
        entry["dir"] = summary.dir;
        entry["system_satisfaction"] =
            summary.system_satisfaction ? json(*summary.system_satisfaction) : json(nullptr);
        entry["mean_satellite_throughput_mbps"] = summary.mean_satellite_throughput_bps / 1e6;
        entry["mean_illuminated"] = summary.mean_illuminated;
        entry["covered_ues"] = summary.stats.covered_ues;
        entry["total_beams"] = summary.stats.total_beams;
        entry["scene_hash"] = hash_hex(summary.stats.scene_hash);
        run_list.push_back(entry);
    }
    doc["runs"] = run_list;
    write_file(out_dir / "summary.json", doc.dump(2) + "\n");

    return summaries;
}

}  // namespace beamhop
