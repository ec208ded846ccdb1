#include "antnet/scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace antnet {

const char* const kVersion = "0.1.0";

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
    throw ScenarioError(path + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& path, int line, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail(path, line, "expected a number, got '" + v + "'");
    }
}

std::uint64_t to_uint(const std::string& path, int line, const std::string& v) {
    try {
        std::size_t pos = 0;
        unsigned long long u = std::stoull(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return u;
    } catch (const std::exception&) {
        fail(path, line, "expected a non-negative integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& path, int line, const std::string& v) {
    if (v == "true" || v == "1")
        return true;
    if (v == "false" || v == "0")
        return false;
    fail(path, line, "expected true/false, got '" + v + "'");
}

} // namespace

Scenario parse_scenario(std::istream& in, const std::string& path) {
    Scenario sc;
    sc.name = fs::path(path).stem().string();
    std::string section;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail(path, lineno, "malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section != "sim" && section != "antnet" && section != "workload" &&
                section != "failures" && section != "topology")
                fail(path, lineno, "unknown section [" + section + "]");
            continue;
        }
        if (section == "failures") {
            // remove <node-id> @ <time-s>
            std::istringstream ls(line);
            std::string kw, at;
            long node;
            double time;
            if (!(ls >> kw >> node >> at >> time) || kw != "remove" || at != "@" || node < 0)
                fail(path, lineno, "expected 'remove <node-id> @ <time-s>'");
            sc.failures.events.push_back({time, static_cast<NodeId>(node)});
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(path, lineno, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (section == "sim") {
            if (key == "seed")
                sc.sim.seed = to_uint(path, lineno, value);
            else if (key == "duration")
                sc.sim.duration_s = to_double(path, lineno, value);
            else if (key == "launch_interval")
                sc.sim.ant_launch_interval_s = to_double(path, lineno, value);
            else if (key == "processing_delay_base")
                sc.sim.processing_delay_base_s = to_double(path, lineno, value);
            else if (key == "load_smoothing")
                sc.sim.load_smoothing = to_double(path, lineno, value);
            else if (key == "bucket_width")
                sc.sim.metrics_bucket_s = to_double(path, lineno, value);
            else if (key == "ant_size")
                sc.sim.ant_size_bits = to_uint(path, lineno, value);
            else
                fail(path, lineno, "unknown [sim] key '" + key + "'");
        } else if (section == "antnet") {
            if (key == "eta")
                sc.antnet.eta = to_double(path, lineno, value);
            else if (key == "window")
                sc.antnet.window = to_uint(path, lineno, value);
            else if (key == "c1")
                sc.antnet.c1 = to_double(path, lineno, value);
            else if (key == "c2")
                sc.antnet.c2 = to_double(path, lineno, value);
            else if (key == "r_min")
                sc.antnet.r_min = to_double(path, lineno, value);
            else if (key == "r_max")
                sc.antnet.r_max = to_double(path, lineno, value);
            else if (key == "mode") {
                if (value == "simple")
                    sc.antnet.mode = ReinforcementMode::Simple;
                else if (value == "full")
                    sc.antnet.mode = ReinforcementMode::Full;
                else
                    fail(path, lineno, "mode must be 'simple' or 'full'");
            } else if (key == "launch_interval")
                sc.sim.ant_launch_interval_s = to_double(path, lineno, value);
            else if (key == "subpath")
                sc.sim.subpath_updates = to_bool(path, lineno, value);
            else
                fail(path, lineno, "unknown [antnet] key '" + key + "'");
        } else if (section == "workload") {
            if (key == "calls")
                sc.workload.calls = static_cast<std::uint32_t>(to_uint(path, lineno, value));
            else if (key == "rate")
                sc.workload.rate_per_s = to_double(path, lineno, value);
            else if (key == "packet_count")
                sc.workload.packet_count =
                    static_cast<std::uint32_t>(to_uint(path, lineno, value));
            else if (key == "packet_size")
                sc.workload.packet_size_bits = to_uint(path, lineno, value);
            else
                fail(path, lineno, "unknown [workload] key '" + key + "'");
        } else if (section == "topology") {
            if (key == "file") {
                fs::path p(value);
                if (p.is_relative())
                    p = fs::path(path).parent_path() / p;
                sc.topology_path = p.string();
            } else
                fail(path, lineno, "unknown [topology] key '" + key + "'");
        } else {
            fail(path, lineno, "key outside any section");
        }
    }
    if (sc.topology_path.empty())
        throw ScenarioError(path + ": missing [topology] file reference");
    sc.sim.validate();
    sc.antnet.validate();
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ScenarioIoError("cannot open scenario file: " + path);
    return parse_scenario(in, path);
}

ScenarioOutcome execute_scenario(const Scenario& scenario, bool with_baseline) {
    Topology topo = load_topology_file(scenario.topology_path);
    scenario.failures.validate(topo);

    Rng workload_rng(scenario.sim.seed);
    std::vector<CallSpec> calls =
        generate_calls(scenario.workload.calls, scenario.workload.rate_per_s, topo,
                       workload_rng, scenario.workload.packet_count,
                       scenario.workload.packet_size_bits);

    ScenarioOutcome out;
    out.calls = calls;
    out.antnet_result = run(scenario.sim, topo, scenario.failures, scenario.antnet, calls);
    if (with_baseline) {
        SimConfig base_cfg = scenario.sim;
        base_cfg.routing = RoutingMode::StaticShortestPath;
        out.baseline_result = run(base_cfg, topo, scenario.failures, scenario.antnet, calls);
    }
    return out;
}

namespace {

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f)
        throw ScenarioIoError("cannot write output file: " + p.string());
    f << content;
}

std::string manifest_text(const Scenario& sc, const ScenarioOutcome& out, bool with_baseline) {
    std::ostringstream m;
    m << "version = " << kVersion << "\n"
      << "scenario = " << sc.name << "\n"
      << "topology = " << sc.topology_path << "\n"
      << "seed = " << sc.sim.seed << "\n"
      << "duration = " << sc.sim.duration_s << "\n"
      << "launch_interval = " << sc.sim.ant_launch_interval_s << "\n"
      << "processing_delay_base = " << sc.sim.processing_delay_base_s << "\n"
      << "load_smoothing = " << sc.sim.load_smoothing << "\n"
      << "eta = " << sc.antnet.eta << "\n"
      << "window = " << sc.antnet.window << "\n"
      << "c1 = " << sc.antnet.c1 << "\n"
      << "c2 = " << sc.antnet.c2 << "\n"
      << "r_min = " << sc.antnet.r_min << "\n"
      << "r_max = " << sc.antnet.r_max << "\n"
      << "mode = " << (sc.antnet.mode == ReinforcementMode::Simple ? "simple" : "full")
      << "\n"
      << "subpath = " << (sc.sim.subpath_updates ? "true" : "false") << "\n"
      << "calls = " << sc.workload.calls << "\n"
      << "rate = " << sc.workload.rate_per_s << "\n"
      << "packet_count = " << sc.workload.packet_count << "\n"
      << "packet_size = " << sc.workload.packet_size_bits << "\n"
      << "baseline = " << (with_baseline ? "true" : "false") << "\n"
      << "workload_hash = " << out.antnet_result.workload_fingerprint << "\n"
      << "trace_hash = " << out.antnet_result.trace_hash << "\n";
    for (const auto& ev : sc.failures.events)
        m << "failure = remove " << ev.node << " @ " << ev.time_s << "\n";
    return m.str();
}

} // namespace

ScenarioOutcome run_scenario(const Scenario& scenario, const std::string& out_dir,
                             bool with_baseline) {
    ScenarioOutcome out = execute_scenario(scenario, with_baseline);
    fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw ScenarioIoError("cannot create output directory: " + out_dir);
    write_file(dir / "metrics.csv", metrics_csv(out.antnet_result.series));
    write_file(dir / "summary.csv", summary_csv(out.antnet_result.summary));
    write_file(dir / "run_manifest.txt", manifest_text(scenario, out, with_baseline));
    if (out.baseline_result) {
        write_file(dir / "baseline_metrics.csv", metrics_csv(out.baseline_result->series));
        write_file(dir / "baseline_summary.csv", summary_csv(out.baseline_result->summary));
    }
    return out;
}

std::vector<std::string> preset_scenarios(const std::string& preset_dir) {
    if (!fs::is_directory(preset_dir))
        throw ScenarioError("preset directory not found: " + preset_dir);
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(preset_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".scn")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw ScenarioError("preset directory has no .scn files: " + preset_dir);
    return files;
}

} // namespace antnet
