#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hybridctl/artifacts.hpp"

using namespace hybridctl;
namespace fs = std::filesystem;

namespace {

SimResult small_hybrid_run() {
    SolverConfig solver;
    solver.dt = 1e-2;
    solver.tol_event = 1e-9;
    solver.horizon = 5.0;
    ControllerMode cm;
    cm.mode = Mode::hybrid;
    cm.dwell = 0.666;
    return run_simulation(scalar_delay_model(-0.1, -0.2, 16.0, -0.293), constant_initial({1.0}),
                          TriggerRule::power_rule(0.36), cm, solver);
}

}  // namespace

TEST_CASE("doubles round-trip through the 17-digit format", "[artifacts]") {
    for (double v : {0.1, -0.293, 1.0 / 3.0, 6.02e23, 1e-308, 0.0}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("trajectory csv has the pinned schema and duplicates jump rows", "[artifacts]") {
    const SimResult r = small_hybrid_run();
    const std::string csv = trajectory_csv(r);
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,x0,u0,event_flag");

    // one impulse -> a pair of rows sharing a time, flags 2
    std::size_t impulse_rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.size() >= 2 && line.substr(line.size() - 2) == ",2") ++impulse_rows;
    }
    CHECK(impulse_rows == 2 * r.events.count(EventKind::impulse_plus_update));
}

TEST_CASE("events csv lists one row per record", "[artifacts]") {
    const SimResult r = small_hybrid_run();
    const std::string csv = events_csv(r);
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "time,kind,x_before0,x_after0,u_after0");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == r.events.size());
}

TEST_CASE("emission is deterministic byte for byte", "[artifacts]") {
    const SimResult a = small_hybrid_run();
    const SimResult b = small_hybrid_run();
    CHECK(trajectory_csv(a) == trajectory_csv(b));
    CHECK(events_csv(a) == events_csv(b));
}

TEST_CASE("atomic write leaves no temp file behind", "[artifacts]") {
    const fs::path dir = fs::temp_directory_path() / "hybridctl_test_artifacts";
    fs::remove_all(dir);
    const fs::path p = dir / "x.txt";
    atomic_write(p, "payload");
    CHECK(fs::exists(p));
    CHECK_FALSE(fs::exists(dir / "x.txt.tmp"));
    std::ifstream in(p);
    std::string content;
    std::getline(in, content);
    CHECK(content == "payload");
    fs::remove_all(dir);
}

TEST_CASE("svg chart is emitted with event ticks", "[artifacts]") {
    const SimResult r = small_hybrid_run();
    const std::string svg = trajectory_svg(r);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("#d33") != std::string::npos);  // impulse tick present
}
