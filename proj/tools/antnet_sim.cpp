#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "antnet/scenario.hpp"

namespace fs = std::filesystem;
using namespace antnet;

namespace {

fs::path find_data_dir(const std::string& override_dir, const char* argv0) {
    if (!override_dir.empty())
        return override_dir;
    if (const char* env = std::getenv("ANTNET_DATA_DIR"))
        return env;
    if (fs::is_directory("data/presets"))
        return "data";
    // fall back to the source-tree layout relative to the binary
    fs::path exe = fs::weakly_canonical(argv0);
    for (fs::path dir = exe.parent_path(); !dir.empty() && dir != dir.root_path();
         dir = dir.parent_path())
        if (fs::is_directory(dir / "data" / "presets"))
            return dir / "data";
    return "data";
}

int run_one(const std::string& path, const fs::path& out_dir, bool baseline,
            std::optional<std::uint64_t> seed_override, bool quiet) {
    Scenario sc = load_scenario_file(path);
    if (seed_override)
        sc.sim.seed = *seed_override;
    ScenarioOutcome out = run_scenario(sc, out_dir.string(), baseline);
    if (!quiet) {
        const RunSummary& s = out.antnet_result.summary;
        std::cout << sc.name << ": calls=" << s.calls << " completed=" << s.completed;
        if (s.completion_rate)
            std::cout << " rate=" << *s.completion_rate;
        std::cout << " drops=" << s.drops << " -> " << out_dir.string() << "\n";
        if (out.baseline_result) {
            const RunSummary& b = out.baseline_result->summary;
            std::cout << sc.name << " (static baseline): completed=" << b.completed;
            if (b.completion_rate)
                std::cout << " rate=" << *b.completion_rate;
            std::cout << " drops=" << b.drops << "\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"AntNet adaptive-routing network simulator"};
    std::string scenario_path;
    std::string preset;
    std::string out_dir = "out";
    std::string data_dir;
    std::optional<std::uint64_t> seed;
    bool baseline = false;
    bool quiet = false;

    app.add_option("--scenario", scenario_path, "Scenario file to run");
    app.add_option("--preset", preset, "Preset name (fig6, fig7, fig8)");
    app.add_option("--seed", seed, "Override the scenario seed");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--data-dir", data_dir, "Directory holding presets and topologies");
    app.add_flag("--baseline", baseline, "Also run the frozen shortest-path baseline");
    app.add_flag("--quiet", quiet, "Suppress progress output");
    CLI11_PARSE(app, argc, argv);

    if (scenario_path.empty() == preset.empty()) {
        std::cerr << "error: exactly one of --scenario or --preset is required\n";
        return 1;
    }

    try {
        if (!scenario_path.empty())
            return run_one(scenario_path, out_dir, baseline, seed, quiet);

        fs::path preset_dir = find_data_dir(data_dir, argv[0]) / "presets" / preset;
        int rc = 0;
        for (const auto& file : preset_scenarios(preset_dir.string())) {
            fs::path sub = fs::path(out_dir) / fs::path(file).stem();
            rc |= run_one(file, sub, baseline, seed, quiet);
        }
        return rc;
    } catch (const ScenarioIoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
