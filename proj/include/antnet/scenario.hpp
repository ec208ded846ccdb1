#pragma once

#include <string>
#include <vector>

#include "antnet/sim.hpp"

namespace antnet {

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// output-side failures; the CLI maps these to a distinct exit code
struct ScenarioIoError : ScenarioError {
    using ScenarioError::ScenarioError;
};

struct WorkloadSpec {
    std::uint32_t calls = 100;
    double rate_per_s = 2.0;
    std::uint32_t packet_count = 10;
    std::uint64_t packet_size_bits = 8000;
};

// Parsed form of a sectioned key-value scenario file. Paths are resolved
// relative to the scenario file's directory.
struct Scenario {
    std::string name;
    std::string topology_path;
    SimConfig sim;
    AntNetParams antnet;
    WorkloadSpec workload;
    FailureSchedule failures;
};

Scenario parse_scenario(std::istream& in, const std::string& path);
Scenario load_scenario_file(const std::string& path);

struct ScenarioOutcome {
    RunResult antnet_result;
    std::optional<RunResult> baseline_result;
    std::vector<CallSpec> calls;
};

// Executes the scenario (optionally paired with the frozen shortest-path
// baseline on the identical workload) and writes metrics.csv, summary.csv
// and run_manifest.txt into out_dir.
ScenarioOutcome run_scenario(const Scenario& scenario, const std::string& out_dir,
                             bool with_baseline);

// In-memory variant used by tests; writes nothing.
ScenarioOutcome execute_scenario(const Scenario& scenario, bool with_baseline);

// A preset is a directory of scenario files run in name order.
std::vector<std::string> preset_scenarios(const std::string& preset_dir);

extern const char* const kVersion;

} // namespace antnet
