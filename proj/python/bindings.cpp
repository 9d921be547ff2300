#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "elastica/cli.hpp"
#include "elastica/diagnostics.hpp"
#include "elastica/network_io.hpp"
#include "elastica/shapes.hpp"
#include "elastica/solver.hpp"
#include "elastica/variational.hpp"

namespace py = pybind11;
using namespace elastica;

namespace {

using Points = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_array(std::span<const Vec2> pts) {
    py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
    auto m = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        m(i, 0) = pts[i].x;
        m(i, 1) = pts[i].y;
    }
    return out;
}

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

std::vector<Vec2> from_array(const Points& a) {
    if (a.ndim() != 2 || a.shape(1) != 2) throw BadParams("points must have shape (n, 2)");
    auto r = a.unchecked<2>();
    std::vector<Vec2> pts(static_cast<std::size_t>(a.shape(0)));
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {r(i, 0), r(i, 1)};
    return pts;
}

SampledCurve curve_from(const Points& a, bool closed) { return build_curve(from_array(a), closed); }

py::list curves_of(const NetworkSpec& spec) {
    py::list out;
    for (const auto& c : spec.curves) out.append(to_array(c.points()));
    return out;
}

py::dict report_columns(const Trajectory& tr) {
    std::vector<double> t, dt, energy, bending, velocity, residual;
    std::vector<bool> remeshed;
    for (const auto& r : tr.reports) {
        t.push_back(r.t_after());
        dt.push_back(r.dt_used);
        energy.push_back(r.energy_after + r.remesh_energy_change);
        bending.push_back(r.bending_after);
        velocity.push_back(r.velocity_l2_after);
        residual.push_back(dissipation_residual(r));
        remeshed.push_back(r.remeshed);
    }
    py::dict d;
    d["t"] = to_array(t);
    d["dt"] = to_array(dt);
    d["energy"] = to_array(energy);
    d["bending"] = to_array(bending);
    d["velocity_l2"] = to_array(velocity);
    d["dissipation_residual"] = to_array(residual);
    d["remeshed"] = remeshed;
    return d;
}

}  // namespace

PYBIND11_MODULE(_elastica, m) {
    m.doc() = "Semi-implicit elastic flow of closed curves, open curves and networks";

    auto base = py::register_exception<Error>(m, "ElasticaError", PyExc_RuntimeError);
    py::register_exception<TooFewNodes>(m, "TooFewNodes", base.ptr());
    py::register_exception<DegenerateCurve>(m, "DegenerateCurve", base.ptr());
    py::register_exception<GridMismatch>(m, "GridMismatch", base.ptr());
    py::register_exception<DegenerateJunction>(m, "DegenerateJunction", base.ptr());
    py::register_exception<InvalidNetwork>(m, "InvalidNetwork", base.ptr());
    py::register_exception<SingularSystem>(m, "SingularSystem", base.ptr());
    py::register_exception<StepFailed>(m, "StepFailed", base.ptr());
    py::register_exception<NotStationary>(m, "NotStationary", base.ptr());
    py::register_exception<UnknownShape>(m, "UnknownShape", base.ptr());
    py::register_exception<BadParams>(m, "BadParams", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::class_<NetworkSpec>(m, "Network")
        .def_property_readonly("curves", &curves_of, "Node positions of each curve, shape (n, 2)")
        .def_property_readonly("closed", [](const NetworkSpec& s) {
            std::vector<bool> out;
            for (const auto& c : s.curves) out.push_back(c.closed());
            return out;
        })
        .def_readwrite("mu", &NetworkSpec::mu)
        .def_property_readonly("junction_count", [](const NetworkSpec& s) { return s.junctions.size(); })
        .def_property_readonly("endpoint_count", [](const NetworkSpec& s) { return s.endpoints.size(); })
        .def("__len__", &NetworkSpec::size)
        .def("energy", [](const NetworkSpec& s) { return FlowState::initial(s).energy(); })
        .def("to_json", [](const NetworkSpec& s) { return network_to_json(s); })
        .def_static("from_json", &network_from_json)
        .def_static("load", [](const std::filesystem::path& p) { return load_network(p); })
        .def("save", [](const NetworkSpec& s, const std::filesystem::path& p) { save_network(s, p); })
        .def_static(
            "closed_curve", [](const Points& p, double mu) { return NetworkSpec::single(curve_from(p, true), mu); },
            py::arg("points"), py::arg("mu") = 1.0);

    m.def("shape_names", &shape_names);
    m.def(
        "make_shape",
        [](const std::string& name, const std::map<std::string, double>& params,
           const std::map<std::string, std::string>& options) { return make_shape(name, ShapeParams{params, options}); },
        py::arg("name"), py::arg("params") = std::map<std::string, double>{},
        py::arg("options") = std::map<std::string, std::string>{});

    m.def(
        "energy",
        [](const Points& p, bool closed, double mu) {
            const EnergyReport e = elastic_energy(curve_from(p, closed), mu);
            return py::dict(py::arg("total") = e.total, py::arg("bending") = e.bending_total(),
                            py::arg("weighted_length") = e.weighted_length_total());
        },
        py::arg("points"), py::arg("closed") = true, py::arg("mu") = 1.0);
    m.def(
        "curvature", [](const Points& p, bool closed) { return to_array(compute_geometry(curve_from(p, closed)).k); },
        py::arg("points"), py::arg("closed") = true);
    m.def(
        "normal_velocity", [](const Points& p, bool closed, double mu) { return to_array(normal_velocity(curve_from(p, closed), mu)); },
        py::arg("points"), py::arg("closed") = true, py::arg("mu") = 1.0);
    m.def(
        "flow_velocity",
        [](const Points& p, bool closed, double mu) { return to_array(special_flow_rhs(curve_from(p, closed), mu).full); },
        py::arg("points"), py::arg("closed") = true, py::arg("mu") = 1.0);
    m.def(
        "stationarity", [](const Points& p, double mu) { return stationarity(curve_from(p, true), mu); },
        py::arg("points"), py::arg("mu") = 1.0);
    m.def(
        "classify_limit",
        [](const Points& p, double mu, double threshold) {
            const LimitClass c = classify_limit(curve_from(p, true), mu, threshold);
            const char* kind = c.kind == LimitKind::circle ? "circle" : c.kind == LimitKind::figure_eight ? "figure_eight" : "other";
            return py::dict(py::arg("kind") = kind, py::arg("radius") = c.radius, py::arg("winding") = c.winding,
                            py::arg("description") = c.describe());
        },
        py::arg("points"), py::arg("mu") = 1.0, py::arg("threshold") = kDefaultStationarityThreshold);
    m.def("validate_admissible", [](const NetworkSpec& s) {
        py::list out;
        for (const auto& e : validate_admissible(s).entries) {
            out.append(py::dict(py::arg("condition") = condition_name(e.condition), py::arg("location") = e.location,
                                py::arg("residual") = e.residual, py::arg("tolerance") = e.tolerance,
                                py::arg("passed") = e.passed, py::arg("experimental") = e.experimental));
        }
        return out;
    });

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("dt_init", &SolverConfig::dt_init)
        .def_readwrite("dt_min", &SolverConfig::dt_min)
        .def_readwrite("dt_max", &SolverConfig::dt_max)
        .def_readwrite("t_end", &SolverConfig::t_end)
        .def_readwrite("stop_velocity_tol", &SolverConfig::stop_velocity_tol)
        .def_readwrite("remesh_every", &SolverConfig::remesh_every)
        .def_readwrite("remesh_speed_ratio", &SolverConfig::remesh_speed_ratio)
        .def_readwrite("remesh_energy_tol_rel", &SolverConfig::remesh_energy_tol_rel)
        .def_readwrite("energy_backtrack", &SolverConfig::energy_backtrack)
        .def_readwrite("max_steps", &SolverConfig::max_steps)
        .def_readwrite("dt_growth", &SolverConfig::dt_growth)
        .def_readwrite("tol_mono_rel", &SolverConfig::tol_mono_rel)
        .def_readwrite("velocity_growth_limit", &SolverConfig::velocity_growth_limit)
        .def_readwrite("stability_cfl", &SolverConfig::stability_cfl)
        .def_readwrite("snapshot_every", &SolverConfig::snapshot_every)
        .def_readwrite("stop_on_monitor", &SolverConfig::stop_on_monitor)
        .def("validate", &SolverConfig::validate);

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("status", [](const Trajectory& t) { return status_name(t.status); })
        .def_readonly("message", &Trajectory::message)
        .def_property_readonly("snapshot_times", [](const Trajectory& t) {
            std::vector<double> out;
            for (const auto& s : t.snapshots) out.push_back(s.t);
            return to_array(out);
        })
        .def_property_readonly("snapshots", [](const Trajectory& t) {
            py::list out;
            for (const auto& s : t.snapshots) out.append(curves_of(s.network));
            return out;
        })
        .def_property_readonly("final", [](const Trajectory& t) { return t.final_state().network; })
        .def_property_readonly("final_time", [](const Trajectory& t) { return t.final_state().t; })
        .def_property_readonly("final_energy", [](const Trajectory& t) { return t.final_state().energy(); })
        .def_property_readonly("steps", [](const Trajectory& t) { return t.reports.size(); })
        .def_property_readonly("monitor_violations", [](const Trajectory& t) { return monitor(t).violations(); })
        .def("reports", &report_columns, "Per-step columns as NumPy arrays")
        .def("summary", [](const Trajectory& t) { return summarize(t).line(); });

    m.def(
        "run",
        [](const NetworkSpec& spec, const SolverConfig& config) {
            py::gil_scoped_release release;
            return run(spec, config);
        },
        py::arg("network"), py::arg("config") = SolverConfig{});
}
