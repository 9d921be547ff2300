#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "elastica/cli.hpp"

using namespace elastica;

namespace {

std::pair<std::string, std::string> split_assignment(const std::string& s) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got \"" + s + "\"");
    return {s.substr(0, eq), s.substr(eq + 1)};
}

double parse_number(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("parameter " + key + " needs a number, got \"" + text + "\"");
    }
}

struct Overrides {
    std::string config;
    std::string shape;
    std::string network;
    std::vector<double> mu;
    std::vector<std::string> params;
    std::vector<std::string> options;
    double dt = 0.0;
    double t_end = 0.0;
    std::size_t n = 0;
    std::string out;
    std::uint64_t seed = 0;
    double noise = -1.0;
    std::size_t snapshot_every = 0;
    bool quiet = false;
    bool print_config = false;
};

RunConfig resolve(const Overrides& o, const CLI::App& app) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_run_config(o.config);
    if (!o.shape.empty()) {
        cfg.shape = o.shape;
        cfg.network_file.reset();
    }
    if (!o.network.empty()) cfg.network_file = o.network;
    if (!o.mu.empty()) cfg.mu = o.mu;
    for (const auto& p : o.params) {
        const auto [k, v] = split_assignment(p);
        cfg.params.values[k] = parse_number(k, v);
    }
    for (const auto& p : o.options) {
        const auto [k, v] = split_assignment(p);
        cfg.params.options[k] = v;
    }
    if (o.n > 0) cfg.params.values["n"] = static_cast<double>(o.n);
    if (app.count("--dt")) {
        cfg.solver.dt_init = o.dt;
        if (cfg.solver.dt_max < o.dt) cfg.solver.dt_max = o.dt;
        if (cfg.solver.dt_min > o.dt) cfg.solver.dt_min = o.dt;
    }
    if (app.count("--t-end")) cfg.solver.t_end = o.t_end;
    if (!o.out.empty()) cfg.output.dir = o.out;
    if (app.count("--seed")) cfg.seed = o.seed;
    if (app.count("--noise")) cfg.noise = o.noise;
    if (app.count("--snapshot-every")) cfg.output.snapshot_every = o.snapshot_every;
    cfg.solver.snapshot_every = cfg.output.snapshot_every;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-implicit elastic flow of curves and networks"};
    Overrides o;
    app.add_option("-c,--config", o.config, "JSON run configuration");
    app.add_option("-s,--shape", o.shape, "Built-in initial shape");
    app.add_option("--network", o.network, "Network JSON file (replaces --shape)");
    app.add_option("--mu", o.mu, "Length penalty, one value or one per curve");
    app.add_option("-p,--param", o.params, "Shape parameter key=value");
    app.add_option("--option", o.options, "Shape option key=value");
    app.add_option("--n", o.n, "Nodes per curve");
    app.add_option("--dt", o.dt, "Initial time step");
    app.add_option("--t-end", o.t_end, "Final time");
    app.add_option("-o,--out", o.out, "Output directory");
    app.add_option("--seed", o.seed, "Seed for the initial perturbation");
    app.add_option("--noise", o.noise, "Amplitude of the initial perturbation");
    app.add_option("--snapshot-every", o.snapshot_every, "Accepted steps between frames");
    app.add_flag("-q,--quiet", o.quiet, "Only print errors");
    app.add_flag("--print-config", o.print_config, "Print the resolved configuration and exit");
    CLI11_PARSE(app, argc, argv);

    RunConfig cfg;
    NetworkSpec spec;
    LogLevel level = LogLevel::info;
    try {
        level = o.quiet ? LogLevel::error : log_level_from_env();
        cfg = resolve(o, app);
        if (o.print_config) {
            std::cout << run_config_to_json(cfg) << '\n';
            return 0;
        }
        spec = build_initial(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (level >= LogLevel::info) {
            std::cerr << "running " << (cfg.network_file ? cfg.network_file->string() : cfg.shape) << " with "
                      << spec.size() << " curve(s) to t=" << cfg.solver.t_end << '\n';
        }
        StepObserver observer;
        if (level >= LogLevel::debug) {
            observer = [](const FlowState& s, const StepReport& r) {
                std::fprintf(stderr, "step %zu t=%.6g dt=%.3e E=%.10g V=%.3e halvings=%zu%s\n", s.accepted_steps,
                             s.t, r.dt_used, r.energy_after + r.remesh_energy_change, r.velocity_l2_after, r.halvings,
                             r.remeshed ? " remeshed" : "");
            };
        }
        const Trajectory tr = run(std::move(spec), cfg.solver, observer);
        write_outputs(cfg, tr);
        const RunSummary summary = summarize(tr);
        if (level >= LogLevel::info || exit_code(tr.status) != 0) {
            if (!tr.message.empty()) std::cerr << tr.message << '\n';
            std::cout << summary.line() << '\n';
        }
        return exit_code(tr.status);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
