// beamhop: downlink beam-hopping experiments over a LEO constellation.
// Reads a JSON config, runs the (scheme, I_max, seed) grid, and writes
// plot-ready CSV/JSON per run. Exit codes: 0 ok, 2 config, 3 runtime, 4 I/O.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beamhop/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitIo = 4;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "beamhop: slot-driven simulator of downlink beam hopping in a LEO constellation.\n"
        "Config precedence: built-in defaults < config file < BEAMHOP_* environment\n"
        "variables < command-line flags."};

    std::string config_path;
    std::string scheduler_override;
    std::string out_override;
    std::string sweep_imax;
    std::uint64_t seed_override = 0;
    int workers_override = 0;

    app.add_option("--config", config_path, "JSON config file (defaults apply when omitted)");
    app.add_option("--scheduler", scheduler_override,
                   "override the scheme list: distance_limit | no_limit | round_robin");
    app.add_option("--seed", seed_override, "override the seed list with one seed");
    app.add_option("--out", out_override, "output directory");
    app.add_option("--workers", workers_override, "concurrent runs in a sweep");
    app.add_option("--sweep-imax", sweep_imax, "override the I_max list, e.g. 10,20,40,100");

    CLI11_PARSE(app, argc, argv);

    beamhop::ExperimentConfig config;
    try {
        if (!config_path.empty()) {
            config = beamhop::parse_config(config_path);
        } else {
            config = beamhop::parse_config_json(nlohmann::json::object(), "<defaults>", true);
        }

        if (!scheduler_override.empty()) {
            beamhop::scheduler_from_string(scheduler_override);
            config.schedulers = {scheduler_override};
        }
        if (app.count("--seed") > 0) config.seeds = {seed_override};
        if (!out_override.empty()) config.out_dir = out_override;
        if (workers_override > 0) config.workers = workers_override;
        if (!sweep_imax.empty()) {
            config.i_max_values.clear();
            std::string token;
            std::istringstream stream(sweep_imax);
            while (std::getline(stream, token, ',')) {
                const int value = std::stoi(token);
                if (value < 1) throw beamhop::ConfigError(beamhop::ConfigError::Kind::kValue,
                                                          "config value error for `I_max`: every "
                                                          "value must be >= 1");
                config.i_max_values.push_back(value);
            }
            if (config.i_max_values.empty())
                throw beamhop::ConfigError(beamhop::ConfigError::Kind::kValue,
                                           "config value error for `I_max`: sweep list must not "
                                           "be empty");
        }
    } catch (const beamhop::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.kind() == beamhop::ConfigError::Kind::kIo ? kExitIo : kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }

    try {
        const auto summaries = beamhop::run_experiment(config);
        for (const auto& summary : summaries) {
            const std::string satisfaction =
                summary.system_satisfaction ? std::to_string(*summary.system_satisfaction) : "n/a";
            std::printf("%-40s satisfaction=%-10s mean_throughput=%.1f Mb/s covered=%d/%d\n",
                        summary.spec.run_name().c_str(), satisfaction.c_str(),
                        summary.mean_satellite_throughput_bps / 1e6, summary.stats.covered_ues,
                        summary.stats.ue_count);
        }
        std::printf("results written to %s\n", config.out_dir.c_str());
    } catch (const beamhop::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return 0;
}
