#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "elastica/cli.hpp"
#include "elastica/network_io.hpp"
#include "helpers.hpp"

using namespace elastica;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("elastica_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

Trajectory short_run() {
    SolverConfig c;
    c.t_end = 0.05;
    c.snapshot_every = 5;
    return run(make_shape("circle", ShapeParams{{{"r", 2}, {"n", 64}}, {}}), c);
}

}  // namespace

TEST_CASE("run config parsing") {
    SUBCASE("defaults from an empty object") {
        const RunConfig c = run_config_from_json("{}");
        CHECK(c.shape == "circle");
        CHECK(c.mu.empty());
        CHECK(c.output.formats.size() == 3);
    }
    SUBCASE("full document") {
        const RunConfig c = run_config_from_json(R"({
            "shape": {"name": "ellipse", "params": {"a": 3, "n": 128}, "options": {"bc": "navier"}},
            "mu": [0.5], "seed": 9, "noise": 0.01,
            "solver": {"dt_init": 1e-3, "dt_max": 1e-2, "t_end": 2.0, "remesh_every": 0},
            "output": {"dir": "here", "snapshot_every": 3, "formats": ["csv"]}})");
        CHECK(c.shape == "ellipse");
        CHECK(c.params.values.at("a") == 3.0);
        CHECK(c.params.options.at("bc") == "navier");
        CHECK(c.mu == std::vector<double>{0.5});
        CHECK(c.seed == 9);
        CHECK(c.solver.dt_init == 1e-3);
        CHECK(c.solver.t_end == 2.0);
        CHECK(c.solver.remesh_every == 0);
        CHECK(c.output.dir == "here");
        CHECK(c.output.formats == std::set<std::string>{"csv"});
    }
    SUBCASE("scalar mu and shape as string") {
        const RunConfig c = run_config_from_json(R"({"shape": "theta", "mu": 2})");
        CHECK(c.shape == "theta");
        CHECK(c.mu == std::vector<double>{2.0});
    }
    SUBCASE("relative network path resolves against the base directory") {
        const RunConfig c = run_config_from_json(R"({"network": "net.json"})", "/data/runs");
        REQUIRE(c.network_file);
        CHECK(*c.network_file == std::filesystem::path("/data/runs/net.json"));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS((void)run_config_from_json("{"), ConfigError);
        CHECK_THROWS_AS((void)run_config_from_json("[]"), ConfigError);
        CHECK_THROWS_AS((void)run_config_from_json(R"({"shpae": "circle"})"), ConfigError);
        CHECK_THROWS_AS((void)run_config_from_json(R"({"solver": {"dtinit": 1}})"), ConfigError);
        CHECK_THROWS_AS((void)run_config_from_json(R"({"solver": {"dt_min": 1, "dt_init": 1e-3}})"), ConfigError);
        CHECK_THROWS_AS((void)run_config_from_json(R"({"output": {"formats": ["png"]}})"), ConfigError);
        CHECK_THROWS_AS((void)run_config_from_json(R"({"noise": -1})"), ConfigError);
        CHECK_THROWS_AS((void)run_config_from_json(R"({"mu": "one"})"), ConfigError);
        CHECK_THROWS_AS((void)load_run_config("/nonexistent/config.json"), ConfigError);
    }
    SUBCASE("round trip") {
        RunConfig c;
        c.shape = "segment";
        c.params.values["eps"] = 0.1;
        c.mu = {0.3};
        c.solver.t_end = 4.0;
        c.output.formats = {"csv", "svg"};
        const RunConfig r = run_config_from_json(run_config_to_json(c));
        CHECK(r.shape == "segment");
        CHECK(r.params.values.at("eps") == 0.1);
        CHECK(r.mu == c.mu);
        CHECK(r.solver.t_end == 4.0);
        CHECK(r.output.formats == c.output.formats);
    }
}

TEST_CASE("initial network construction") {
    SUBCASE("mu override") {
        RunConfig c;
        c.shape = "theta";
        c.mu = {0.7};
        const NetworkSpec s = build_initial(c);
        for (double m : s.mu) CHECK(m == 0.7);
        c.mu = {0.1, 0.2};
        CHECK_THROWS_AS((void)build_initial(c), ConfigError);
    }
    SUBCASE("noise is seeded") {
        RunConfig c;
        c.params.values["n"] = 64;
        c.noise = 0.05;
        c.seed = 3;
        const NetworkSpec a = build_initial(c), b = build_initial(c);
        c.seed = 4;
        const NetworkSpec d = build_initial(c);
        c.noise = 0.0;
        const NetworkSpec plain = build_initial(c);
        double same = 0.0, diff = 0.0, moved = 0.0;
        for (std::size_t i = 0; i < 64; ++i) {
            same = std::max(same, norm(a.curves[0][i] - b.curves[0][i]));
            diff = std::max(diff, norm(a.curves[0][i] - d.curves[0][i]));
            moved = std::max(moved, norm(a.curves[0][i] - plain.curves[0][i]));
        }
        CHECK(same == 0.0);
        CHECK(diff > 1e-4);
        CHECK(moved > 1e-4);
        CHECK(moved < 0.05);
    }
    SUBCASE("network file") {
        const auto dir = temp_dir("network");
        save_network(make_shape("triod"), dir / "triod.json");
        std::ofstream(dir / "run.json") << R"({"network": "triod.json"})";
        const NetworkSpec s = build_initial(load_run_config(dir / "run.json"));
        CHECK(s.curves.size() == 3);
        CHECK(s.junctions.size() == 1);
    }
}

TEST_CASE("outputs") {
    const Trajectory tr = short_run();
    SUBCASE("csv has one row per accepted step") {
        std::ostringstream out;
        write_csv(out, tr);
        std::istringstream in(out.str());
        std::string header, line;
        std::getline(in, header);
        CHECK(header == "t,dt,E_total,E_bending,L_total,V_l2,dissipation_residual,L_0");
        std::size_t rows = 0;
        while (std::getline(in, line)) ++rows;
        CHECK(rows == tr.reports.size());
    }
    SUBCASE("frame round trip is exact") {
        std::stringstream io;
        write_frame(io, tr.final_state());
        const Frame f = read_frame(io);
        CHECK(f.t == tr.final_state().t);
        REQUIRE(f.curves.size() == 1);
        CHECK(f.curves[0].closed());
        const SampledCurve& c = tr.final_state().network.curves[0];
        REQUIRE(f.curves[0].size() == c.size());
        for (std::size_t i = 0; i < c.size(); ++i) CHECK(f.curves[0][i] == c[i]);
    }
    SUBCASE("malformed frames") {
        std::istringstream bad("t 0 curves 1\ncurve 0 closed 1 n 5\n0 0\n");
        CHECK_THROWS_AS((void)read_frame(bad), ConfigError);
        std::istringstream junk("hello");
        CHECK_THROWS_AS((void)read_frame(junk), ConfigError);
    }
    SUBCASE("written to disk") {
        RunConfig c;
        c.output.dir = temp_dir("outputs");
        write_outputs(c, tr);
        CHECK(std::filesystem::exists(c.output.dir / "run.csv"));
        CHECK(std::filesystem::exists(c.output.dir / "overview.svg"));
        std::size_t frames = 0;
        for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(c.output.dir / "frames")) ++frames;
        CHECK(frames == tr.snapshots.size());
        std::ifstream svg(c.output.dir / "overview.svg");
        std::string first;
        std::getline(svg, first);
        CHECK(first.rfind("<svg", 0) == 0);
    }
}

TEST_CASE("summary and exit codes") {
    const RunSummary s = summarize(short_run());
    CHECK(s.status == RunStatus::reached_t_end);
    CHECK(s.classification == "NotStationary");
    CHECK(s.line().find("status=") == 0);
    CHECK(exit_code(RunStatus::converged) == 0);
    CHECK(exit_code(RunStatus::reached_t_end) == 0);
    CHECK(exit_code(RunStatus::max_steps) == 0);
    CHECK(exit_code(RunStatus::step_failed) == 2);
    CHECK(exit_code(RunStatus::stopped_on_monitor) == 2);

    SolverConfig c;
    c.stop_velocity_tol = 1e-2;
    const RunSummary conv = summarize(run(NetworkSpec::single(test::circle(256), 1.0), c));
    CHECK(conv.status == RunStatus::converged);
    CHECK(conv.classification.find("Circle") != std::string::npos);
}
