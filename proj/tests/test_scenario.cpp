#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "antnet/scenario.hpp"

namespace fs = std::filesystem;
using namespace antnet;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("antnet-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

void write(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    f << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path minimal_scenario(const TempDir& dir) {
    write(dir.path / "pair.txt", "node 0\nnode 1\nlink 0 1 1000000 0.001\n");
    write(dir.path / "mini.scn",
          "[topology]\nfile = pair.txt\n"
          "[sim]\nseed = 5\nduration = 3\nlaunch_interval = 0.1\n"
          "[workload]\ncalls = 4\nrate = 2\npacket_count = 3\n");
    return dir.path / "mini.scn";
}

} // namespace

TEST_CASE("scenario parsing") {
    SUBCASE("sections and keys land in the right places") {
        std::istringstream in("[topology]\nfile = /tmp/t.txt\n"
                              "[sim]\nseed = 9\nduration = 42\n"
                              "[antnet]\neta = 0.2\nmode = full\nsubpath = true\n"
                              "[workload]\ncalls = 7\n"
                              "[failures]\nremove 3 @ 10.5\n");
        Scenario sc = parse_scenario(in, "/x/s.scn");
        CHECK(sc.sim.seed == 9);
        CHECK(sc.sim.duration_s == 42);
        CHECK(sc.antnet.eta == 0.2);
        CHECK(sc.antnet.mode == ReinforcementMode::Full);
        CHECK(sc.sim.subpath_updates);
        CHECK(sc.workload.calls == 7);
        REQUIRE(sc.failures.events.size() == 1);
        CHECK(sc.failures.events[0].node == 3);
        CHECK(sc.failures.events[0].time_s == 10.5);
    }
    SUBCASE("diagnostics carry file and line") {
        std::istringstream in("[sim]\nbogus = 1\n");
        try {
            parse_scenario(in, "bad.scn");
            FAIL("expected error");
        } catch (const ScenarioError& e) {
            CHECK(std::string(e.what()).find("bad.scn:2") != std::string::npos);
        }
    }
    SUBCASE("missing topology reference") {
        std::istringstream in("[sim]\nseed = 1\n");
        CHECK_THROWS_AS(parse_scenario(in, "s.scn"), ScenarioError);
    }
}

TEST_CASE("run_scenario writes the three output files") {
    TempDir dir;
    Scenario sc = load_scenario_file(minimal_scenario(dir).string());
    fs::path out = dir.path / "out";
    run_scenario(sc, out.string(), false);
    CHECK(fs::exists(out / "metrics.csv"));
    CHECK(fs::exists(out / "summary.csv"));
    CHECK(fs::exists(out / "run_manifest.txt"));
    std::string manifest = slurp(out / "run_manifest.txt");
    CHECK(manifest.find("seed = 5") != std::string::npos);
    CHECK(manifest.find("version = ") != std::string::npos);
}

TEST_CASE("missing topology file names the path") {
    TempDir dir;
    write(dir.path / "s.scn", "[topology]\nfile = nowhere.txt\n");
    Scenario sc = load_scenario_file((dir.path / "s.scn").string());
    try {
        execute_scenario(sc, false);
        FAIL("expected error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("nowhere.txt") != std::string::npos);
    }
}

TEST_CASE("identical scenario runs produce identical bytes") {
    TempDir dir;
    Scenario sc = load_scenario_file(minimal_scenario(dir).string());
    fs::path out1 = dir.path / "a", out2 = dir.path / "b";
    run_scenario(sc, out1.string(), true);
    run_scenario(sc, out2.string(), true);
    for (const char* f :
         {"metrics.csv", "summary.csv", "baseline_metrics.csv", "baseline_summary.csv"})
        CHECK(slurp(out1 / f) == slurp(out2 / f));
}

TEST_CASE("baseline run shares the workload") {
    TempDir dir;
    Scenario sc = load_scenario_file(minimal_scenario(dir).string());
    auto out = execute_scenario(sc, true);
    REQUIRE(out.baseline_result.has_value());
    CHECK(out.antnet_result.workload_fingerprint ==
          out.baseline_result->workload_fingerprint);
}

TEST_CASE("preset directories enumerate their scenario files") {
    auto files = preset_scenarios(std::string(DATA_DIR) + "/presets/fig6");
    CHECK(files.size() == 2);
    CHECK(preset_scenarios(std::string(DATA_DIR) + "/presets/fig7").size() == 3);
    CHECK(preset_scenarios(std::string(DATA_DIR) + "/presets/fig8").size() == 5);
    CHECK_THROWS_AS(preset_scenarios("/no/such/dir"), ScenarioError);
    // presets parse cleanly and reference the shipped topology
    for (const auto& f : files) {
        Scenario sc = load_scenario_file(f);
        CHECK(fs::exists(sc.topology_path));
    }
}
