#pragma once

// Scenario construction and experiment orchestration: drops UEs in the region,
// picks the serving satellites out of the Walker shell, builds the spotbeam
// layout, expands the (scheme, I_max, seed) grid, and writes plot-ready
// CSV/JSON results with a reproducible manifest per run.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "beamhop/config.hpp"
#include "beamhop/engine.hpp"

namespace beamhop {

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& message) : std::runtime_error(message) {}
};

struct ScenarioStats {
    int ue_count = 0;
    int covered_ues = 0;
    int total_beams = 0;
    std::vector<int> walker_satellite_ids;  // original constellation ids, scene order
    std::uint64_t scene_hash = 0;
};

struct BuiltScenario {
    Scene scene;
    ScenarioStats stats;
};

// Deterministic for a fixed (config, seed): the scene never depends on the
// scheduler or I_max, so sweeps share it. Satellites are frozen at epoch and
// re-numbered 0..n-1 in ascending slant range from the region center.
BuiltScenario build_scenario(const ExperimentConfig& config, std::uint64_t seed);

struct RunSpec {
    std::string scheduler;
    int i_max = 0;
    std::uint64_t seed = 0;

    std::string run_name() const;  // e.g. distance_limit_imax40_seed1
};

std::vector<RunSpec> expand_runs(const ExperimentConfig& config);

struct RunOutput {
    RunSpec spec;
    ScenarioStats stats;
    MetricsReport report;
};

// One simulation, no file I/O.
RunOutput execute_run(const ExperimentConfig& config, const RunSpec& spec);

// CSV tables plus the per-run JSON summary, into dir.
void emit_results(const MetricsReport& report, const RunSpec& spec, const ScenarioStats& stats,
                  const std::string& band, const std::filesystem::path& dir);

struct RunSummary {
    RunSpec spec;
    ScenarioStats stats;
    std::optional<double> system_satisfaction;
    double mean_satellite_throughput_bps = 0.0;
    double mean_illuminated = 0.0;
    std::string dir;
};

// Executes the whole grid (config.workers at a time), one directory per run,
// plus the top-level manifest and the cross-scheme summary.
std::vector<RunSummary> run_experiment(const ExperimentConfig& config);

}  // namespace beamhop
