#include "elastica/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "elastica/diagnostics.hpp"
#include "elastica/network_io.hpp"
#include "json.hpp"

namespace elastica {

namespace {

using nlohmann::json;

const std::set<std::string> kFormats = {"csv", "frames", "svg"};

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (!known.count(key)) throw ConfigError("unknown key \"" + key + "\" in " + where);
    }
}

template <class T>
void read_if(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

void read_solver(const json& j, SolverConfig& s) {
    reject_unknown(j,
                   {"dt_init", "dt_min", "dt_max", "t_end", "stop_velocity_tol", "remesh_every", "remesh_speed_ratio",
                    "remesh_energy_tol_rel", "energy_backtrack", "max_steps", "dt_growth", "tol_mono_rel",
                    "velocity_growth_limit", "stability_cfl", "stop_on_monitor"},
                   "solver");
    read_if(j, "dt_init", s.dt_init);
    read_if(j, "dt_min", s.dt_min);
    read_if(j, "dt_max", s.dt_max);
    read_if(j, "t_end", s.t_end);
    read_if(j, "stop_velocity_tol", s.stop_velocity_tol);
    read_if(j, "remesh_every", s.remesh_every);
    read_if(j, "remesh_speed_ratio", s.remesh_speed_ratio);
    read_if(j, "remesh_energy_tol_rel", s.remesh_energy_tol_rel);
    read_if(j, "energy_backtrack", s.energy_backtrack);
    read_if(j, "max_steps", s.max_steps);
    read_if(j, "dt_growth", s.dt_growth);
    read_if(j, "tol_mono_rel", s.tol_mono_rel);
    read_if(j, "velocity_growth_limit", s.velocity_growth_limit);
    read_if(j, "stability_cfl", s.stability_cfl);
    read_if(j, "stop_on_monitor", s.stop_on_monitor);
}

json write_solver(const SolverConfig& s) {
    return {{"dt_init", s.dt_init},
            {"dt_min", s.dt_min},
            {"dt_max", s.dt_max},
            {"t_end", s.t_end},
            {"stop_velocity_tol", s.stop_velocity_tol},
            {"remesh_every", s.remesh_every},
            {"remesh_speed_ratio", s.remesh_speed_ratio},
            {"remesh_energy_tol_rel", s.remesh_energy_tol_rel},
            {"energy_backtrack", s.energy_backtrack},
            {"max_steps", s.max_steps},
            {"dt_growth", s.dt_growth},
            {"tol_mono_rel", s.tol_mono_rel},
            {"velocity_growth_limit", s.velocity_growth_limit},
            {"stability_cfl", s.stability_cfl},
            {"stop_on_monitor", s.stop_on_monitor}};
}

// Smooth random normal displacement of a closed curve: modes 2..5 with
// amplitudes decaying as 1/m^2.
SampledCurve perturb(const SampledCurve& curve, double amplitude, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double a[6]{}, b[6]{};
    for (int m = 2; m <= 5; ++m) {
        a[m] = u(rng);
        b[m] = u(rng);
    }
    const GeometryCache g = compute_geometry(curve);
    std::vector<Vec2> pts(curve.points().begin(), curve.points().end());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double x = 2.0 * std::numbers::pi * curve.parameter(i);
        double d = 0.0;
        for (int m = 2; m <= 5; ++m) d += (a[m] * std::cos(m * x) + b[m] * std::sin(m * x)) / (m * m);
        pts[i] += g.nu[i] * (amplitude * d);
    }
    return curve.with_points(std::move(pts));
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

LogLevel log_level_from_env() {
    const char* v = std::getenv("ELASTICA_LOG");
    if (v == nullptr || *v == '\0') return LogLevel::info;
    const std::string s = v;
    if (s == "error") return LogLevel::error;
    if (s == "info") return LogLevel::info;
    if (s == "debug") return LogLevel::debug;
    throw ConfigError("ELASTICA_LOG must be error, info or debug, got \"" + s + "\"");
}

void RunConfig::validate() const {
    for (const auto& f : output.formats) {
        if (!kFormats.count(f)) throw ConfigError("unknown output format \"" + f + "\"");
    }
    if (!(noise >= 0.0) || !std::isfinite(noise)) throw ConfigError("noise must be a non-negative number");
    for (double m : mu) {
        if (!(m >= 0.0) || !std::isfinite(m)) throw ConfigError("mu must be non-negative");
    }
    try {
        solver.validate();
    } catch (const BadParams& e) {
        throw ConfigError(e.what());
    }
}

RunConfig run_config_from_json(const std::string& text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed config JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig cfg;
    try {
        reject_unknown(doc, {"shape", "network", "mu", "seed", "noise", "solver", "output"}, "config");
        if (doc.contains("shape")) {
            const json& s = doc.at("shape");
            if (s.is_string()) {
                cfg.shape = s.get<std::string>();
            } else {
                reject_unknown(s, {"name", "params", "options"}, "shape");
                read_if(s, "name", cfg.shape);
                if (s.contains("params")) cfg.params.values = s.at("params").get<std::map<std::string, double>>();
                if (s.contains("options")) cfg.params.options = s.at("options").get<std::map<std::string, std::string>>();
            }
        }
        if (doc.contains("network")) {
            std::filesystem::path p = doc.at("network").get<std::string>();
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            cfg.network_file = p;
        }
        if (doc.contains("mu")) {
            const json& m = doc.at("mu");
            cfg.mu = m.is_number() ? std::vector<double>{m.get<double>()} : m.get<std::vector<double>>();
        }
        read_if(doc, "seed", cfg.seed);
        read_if(doc, "noise", cfg.noise);
        if (doc.contains("solver")) read_solver(doc.at("solver"), cfg.solver);
        if (doc.contains("output")) {
            const json& o = doc.at("output");
            reject_unknown(o, {"dir", "snapshot_every", "formats"}, "output");
            if (o.contains("dir")) cfg.output.dir = o.at("dir").get<std::string>();
            read_if(o, "snapshot_every", cfg.output.snapshot_every);
            if (o.contains("formats")) {
                const auto f = o.at("formats").get<std::vector<std::string>>();
                cfg.output.formats = {f.begin(), f.end()};
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return run_config_from_json(buf.str(), path.parent_path());
}

std::string run_config_to_json(const RunConfig& c) {
    json doc;
    doc["shape"] = {{"name", c.shape}, {"params", c.params.values}, {"options", c.params.options}};
    if (c.network_file) doc["network"] = c.network_file->string();
    if (!c.mu.empty()) doc["mu"] = c.mu;
    doc["seed"] = c.seed;
    doc["noise"] = c.noise;
    doc["solver"] = write_solver(c.solver);
    doc["output"] = {{"dir", c.output.dir.string()},
                     {"snapshot_every", c.output.snapshot_every},
                     {"formats", std::vector<std::string>(c.output.formats.begin(), c.output.formats.end())}};
    return doc.dump(2);
}

NetworkSpec build_initial(const RunConfig& config) {
    NetworkSpec spec = config.network_file ? load_network(*config.network_file) : make_shape(config.shape, config.params);
    if (config.mu.size() == 1) {
        spec.mu.assign(spec.size(), config.mu[0]);
    } else if (!config.mu.empty()) {
        if (config.mu.size() != spec.size()) {
            throw ConfigError("mu has " + std::to_string(config.mu.size()) + " values for " +
                              std::to_string(spec.size()) + " curves");
        }
        spec.mu = config.mu;
    }
    if (config.noise > 0.0) {
        std::mt19937_64 rng(config.seed);
        for (auto& c : spec.curves) {
            if (c.closed()) c = perturb(c, config.noise, rng);
        }
    }
    check_structure(spec);
    return spec;
}

void write_csv(std::ostream& out, const Trajectory& trajectory) {
    const std::size_t m = trajectory.snapshots.front().network.size();
    out << "t,dt,E_total,E_bending,L_total,V_l2,dissipation_residual";
    for (std::size_t c = 0; c < m; ++c) out << ",L_" << c;
    out << '\n';
    for (const auto& r : trajectory.reports) {
        double total = 0.0;
        for (double l : r.lengths_after) total += l;
        out << format_double(r.t_after()) << ',' << format_double(r.dt_used) << ','
            << format_double(r.energy_after + r.remesh_energy_change) << ',' << format_double(r.bending_after) << ','
            << format_double(total) << ',' << format_double(r.velocity_l2_after) << ','
            << format_double(dissipation_residual(r));
        for (double l : r.lengths_after) out << ',' << format_double(l);
        out << '\n';
    }
}

void write_frame(std::ostream& out, const FlowState& state) {
    out << "t " << format_double(state.t) << " curves " << state.network.size() << '\n';
    for (std::size_t c = 0; c < state.network.size(); ++c) {
        const SampledCurve& curve = state.network.curves[c];
        out << "curve " << c << " closed " << (curve.closed() ? 1 : 0) << " n " << curve.size() << '\n';
        for (const Vec2& p : curve.points()) out << format_double(p.x) << ' ' << format_double(p.y) << '\n';
    }
}

Frame read_frame(std::istream& in) {
    Frame f;
    std::string tag, curves_tag;
    std::size_t count = 0;
    if (!(in >> tag >> f.t >> curves_tag >> count) || tag != "t" || curves_tag != "curves") {
        throw ConfigError("frame header must be \"t <value> curves <N>\"");
    }
    for (std::size_t c = 0; c < count; ++c) {
        std::string ct, cl, nt;
        std::size_t id = 0, n = 0;
        int closed = 0;
        if (!(in >> ct >> id >> cl >> closed >> nt >> n) || ct != "curve" || cl != "closed" || nt != "n" || id != c) {
            throw ConfigError("bad curve header in frame");
        }
        std::vector<Vec2> pts(n);
        for (auto& p : pts) {
            if (!(in >> p.x >> p.y)) throw ConfigError("truncated frame");
        }
        f.curves.push_back(build_curve(std::move(pts), closed != 0));
    }
    return f;
}

void write_svg(std::ostream& out, const Trajectory& trajectory) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : trajectory.snapshots) {
        for (const auto& c : s.network.curves) {
            for (const Vec2& p : c.points()) {
                xmin = std::min(xmin, p.x);
                xmax = std::max(xmax, p.x);
                ymin = std::min(ymin, p.y);
                ymax = std::max(ymax, p.y);
            }
        }
    }
    const double size = 800.0, margin = 20.0;
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
    const double scale = (size - 2 * margin) / span;
    auto px = [&](const Vec2& p) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2f,%.2f", margin + (p.x - xmin) * scale, size - margin - (p.y - ymin) * scale);
        return std::string(buf);
    };
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const std::size_t count = trajectory.snapshots.size();
    for (std::size_t k = 0; k < count; ++k) {
        const auto& s = trajectory.snapshots[k];
        const double opacity = count > 1 ? 0.15 + 0.85 * static_cast<double>(k) / static_cast<double>(count - 1) : 1.0;
        out << "<g stroke=\"#1f4e9c\" fill=\"none\" stroke-width=\"1.5\" opacity=\"" << opacity << "\">"
            << "<title>t = " << s.t << "</title>\n";
        for (const auto& c : s.network.curves) {
            out << (c.closed() ? "<polygon" : "<polyline") << " points=\"";
            for (const Vec2& p : c.points()) out << px(p) << ' ';
            out << "\"/>\n";
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
}

std::string RunSummary::line() const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "status=%s t=%.6g steps=%zu energy=%.10g V_l2=%.3e class=%s",
                  status_name(status).c_str(), t, steps, energy, velocity_l2, classification.c_str());
    return buf;
}

RunSummary summarize(const Trajectory& trajectory) {
    const FlowState& f = trajectory.final_state();
    RunSummary s;
    s.status = trajectory.status;
    s.t = f.t;
    s.steps = trajectory.reports.size();
    s.energy = f.energy();
    s.velocity_l2 = stationarity(f.caches, f.network.mu);
    s.classification = "n/a";
    if (f.network.size() == 1 && f.network.curves[0].closed()) {
        try {
            s.classification = classify_limit(f.network.curves[0], f.network.mu[0]).describe();
        } catch (const NotStationary&) {
            s.classification = "NotStationary";
        }
    }
    return s;
}

void write_outputs(const RunConfig& config, const Trajectory& trajectory) {
    const auto& dir = config.output.dir;
    std::filesystem::create_directories(dir);
    auto open = [](const std::filesystem::path& p) {
        std::ofstream out(p);
        if (!out) throw ConfigError("cannot write " + p.string());
        return out;
    };
    if (config.output.formats.count("csv")) {
        auto out = open(dir / "run.csv");
        write_csv(out, trajectory);
    }
    if (config.output.formats.count("frames")) {
        std::filesystem::create_directories(dir / "frames");
        for (const auto& s : trajectory.snapshots) {
            char name[32];
            std::snprintf(name, sizeof name, "frame_%06zu.txt", s.accepted_steps);
            auto out = open(dir / "frames" / name);
            write_frame(out, s);
        }
    }
    if (config.output.formats.count("svg")) {
        auto out = open(dir / "overview.svg");
        write_svg(out, trajectory);
    }
}

int exit_code(RunStatus status) noexcept {
    switch (status) {
        case RunStatus::converged:
        case RunStatus::reached_t_end:
        case RunStatus::max_steps: return 0;
        case RunStatus::step_failed:
        case RunStatus::stopped_on_monitor: return 2;
    }
    return 2;
}

}  // namespace elastica
