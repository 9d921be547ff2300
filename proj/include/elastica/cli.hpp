#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "elastica/shapes.hpp"
#include "elastica/solver.hpp"

namespace elastica {

enum class LogLevel { error = 0, info = 1, debug = 2 };

// Level from ELASTICA_LOG (error, info, debug); info when unset. Throws
// ConfigError for other values.
[[nodiscard]] LogLevel log_level_from_env();

struct OutputConfig {
    std::filesystem::path dir = "elastica_out";
    std::size_t snapshot_every = 50;  // accepted steps between frames; 0 keeps first and last
    std::set<std::string> formats = {"csv", "frames", "svg"};
};

// Run configuration files are JSON documents; every key is optional:
//
//   {
//     "shape": {"name": "ellipse", "params": {"a": 2, "b": 1, "n": 256}, "options": {"bc": "navier"}},
//     "network": "path/to/network.json",   // replaces "shape"
//     "mu": 1.0,                             // or one value per curve
//     "seed": 0,
//     "noise": 0.0,                          // seeded normal perturbation of closed curves
//     "solver": {"dt_init": 1e-4, "t_end": 1.0, ...},   // SolverConfig field names
//     "output": {"dir": "out", "snapshot_every": 50, "formats": ["csv", "frames", "svg"]}
//   }
//
// Relative network paths resolve against the config file's directory.
struct RunConfig {
    std::string shape = "circle";
    ShapeParams params;
    std::optional<std::filesystem::path> network_file;
    std::vector<double> mu;  // empty: keep the generator's value
    std::uint64_t seed = 0;
    double noise = 0.0;
    SolverConfig solver;
    OutputConfig output;

    // Throws ConfigError for unknown formats, negative noise, or invalid solver settings.
    void validate() const;
};

[[nodiscard]] RunConfig run_config_from_json(const std::string& text,
                                             const std::filesystem::path& base_dir = {});
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path& path);
[[nodiscard]] std::string run_config_to_json(const RunConfig& config);

// Shape or network file, then mu override and seeded noise.
[[nodiscard]] NetworkSpec build_initial(const RunConfig& config);

// One row per accepted step: t, dt, E_total, E_bending, L_total, V_l2,
// dissipation_residual, then L_0 .. L_{m-1}.
void write_csv(std::ostream& out, const Trajectory& trajectory);

// "t <value> curves <N>", then per curve "curve <id> closed <0|1> n <count>"
// followed by one "x y" line per node.
void write_frame(std::ostream& out, const FlowState& state);

struct Frame {
    double t{};
    std::vector<SampledCurve> curves;
};

// Parses write_frame output; curves go through build_curve. Throws ConfigError
// on malformed input.
[[nodiscard]] Frame read_frame(std::istream& in);

// Static overlay of the snapshots, later ones more opaque.
void write_svg(std::ostream& out, const Trajectory& trajectory);

struct RunSummary {
    RunStatus status{};
    double t{};
    std::size_t steps{};
    double energy{};
    double velocity_l2{};
    std::string classification;

    [[nodiscard]] std::string line() const;
};

// Limit classification of single closed curves; "n/a" otherwise.
[[nodiscard]] RunSummary summarize(const Trajectory& trajectory);

// Writes the requested formats into config.output.dir (created if missing).
void write_outputs(const RunConfig& config, const Trajectory& trajectory);

// Exit code of a finished run: 0 for converged, t_end or max_steps, 2 for a
// failed step or a monitor stop.
[[nodiscard]] int exit_code(RunStatus status) noexcept;

}  // namespace elastica
