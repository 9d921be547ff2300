#include "elastica/network_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace elastica {

namespace {

using nlohmann::json;

Vec2 read_vec(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError(std::string(what) + " must be a [x, y] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json write_vec(const Vec2& v) { return json::array({v.x, v.y}); }

CurveEnd read_end(const json& j) {
    const std::string e = j.at("end").get<std::string>();
    if (e == "start") return CurveEnd::start;
    if (e == "end") return CurveEnd::end;
    throw ConfigError("end must be \"start\" or \"end\", got \"" + e + "\"");
}

std::string write_end(CurveEnd e) { return e == CurveEnd::start ? "start" : "end"; }

std::size_t read_curve_id(const json& j, std::size_t n) {
    const auto id = j.at("curve").get<long long>();
    if (id < 0 || static_cast<std::size_t>(id) >= n) throw InvalidNetwork("curve id " + std::to_string(id) + " out of range");
    return static_cast<std::size_t>(id);
}

}  // namespace

NetworkSpec network_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed network JSON: ") + e.what());
    }
    try {
        NetworkSpec spec;
        for (const auto& c : doc.at("curves")) {
            std::vector<Vec2> pts;
            for (const auto& p : c.at("points")) pts.push_back(read_vec(p, "curve point"));
            spec.curves.push_back(build_curve(std::move(pts), c.value("closed", false)));
        }
        const std::size_t n = spec.size();
        const json& mu = doc.contains("mu") ? doc.at("mu") : json(1.0);
        if (mu.is_number()) {
            spec.mu.assign(n, mu.get<double>());
        } else {
            spec.mu = mu.get<std::vector<double>>();
        }
        if (doc.contains("junctions")) {
            for (const auto& jj : doc.at("junctions")) {
                JunctionSpec junction;
                const std::string kind = jj.value("kind", "natural");
                if (kind == "natural") {
                    junction.kind = JunctionKind::natural;
                } else if (kind == "clamped") {
                    junction.kind = JunctionKind::clamped;
                    junction.cosines = jj.at("cosines").get<std::vector<double>>();
                } else {
                    throw ConfigError("unknown junction kind \"" + kind + "\"");
                }
                for (const auto& m : jj.at("members")) junction.members.push_back({read_curve_id(m, n), read_end(m)});
                spec.junctions.push_back(std::move(junction));
            }
        }
        if (doc.contains("endpoints")) {
            for (const auto& ej : doc.at("endpoints")) {
                EndpointSpec e;
                e.curve = read_curve_id(ej, n);
                e.end = read_end(ej);
                const SampledCurve& c = spec.curves[e.curve];
                const Vec2 here = c[end_index(c, e.end)];
                const Vec2 point = ej.contains("point") ? read_vec(ej.at("point"), "endpoint point") : here;
                const std::string bc = ej.at("bc").get<std::string>();
                if (bc == "navier") {
                    e.bc = NavierEndpoint{point};
                } else if (bc == "clamped") {
                    Vec2 t;
                    if (ej.contains("tangent")) {
                        t = read_vec(ej.at("tangent"), "endpoint tangent");
                        if (!(norm(t) > 0.0)) throw ConfigError("endpoint tangent must be non-zero");
                        t /= norm(t);
                    } else {
                        t = compute_geometry(c).tau[end_index(c, e.end)];
                    }
                    e.bc = ClampedEndpoint{point, t};
                } else {
                    throw ConfigError("unknown endpoint bc \"" + bc + "\"");
                }
                spec.endpoints.push_back(std::move(e));
            }
        }
        check_structure(spec);
        return spec;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("network schema error: ") + e.what());
    }
}

std::string network_to_json(const NetworkSpec& spec, int indent) {
    json doc;
    doc["mu"] = spec.mu;
    doc["curves"] = json::array();
    for (const auto& c : spec.curves) {
        json pts = json::array();
        for (const auto& p : c.points()) pts.push_back(write_vec(p));
        doc["curves"].push_back({{"closed", c.closed()}, {"points", std::move(pts)}});
    }
    doc["junctions"] = json::array();
    for (const auto& j : spec.junctions) {
        json members = json::array();
        for (const auto& m : j.members) members.push_back({{"curve", m.curve}, {"end", write_end(m.end)}});
        json jj = {{"kind", j.kind == JunctionKind::natural ? "natural" : "clamped"}, {"members", std::move(members)}};
        if (j.kind == JunctionKind::clamped) jj["cosines"] = j.cosines;
        doc["junctions"].push_back(std::move(jj));
    }
    doc["endpoints"] = json::array();
    for (const auto& e : spec.endpoints) {
        json ej = {{"curve", e.curve}, {"end", write_end(e.end)}};
        if (const auto* nav = std::get_if<NavierEndpoint>(&e.bc)) {
            ej["bc"] = "navier";
            ej["point"] = write_vec(nav->point);
        } else {
            const auto& cl = std::get<ClampedEndpoint>(e.bc);
            ej["bc"] = "clamped";
            ej["point"] = write_vec(cl.point);
            ej["tangent"] = write_vec(cl.tangent);
        }
        doc["endpoints"].push_back(std::move(ej));
    }
    return doc.dump(indent);
}

NetworkSpec load_network(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open network file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return network_from_json(buf.str());
}

void save_network(const NetworkSpec& spec, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write network file " + path.string());
    out << network_to_json(spec) << '\n';
}

}  // namespace elastica
