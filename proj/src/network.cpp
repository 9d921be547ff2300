#include "elastica/network.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "elastica/variational.hpp"

namespace elastica {

namespace {

std::string end_name(CurveEnd e) { return e == CurveEnd::start ? "start" : "end"; }

std::string member_location(std::size_t curve, CurveEnd e) {
    return "curve " + std::to_string(curve) + " " + end_name(e);
}

Vec2 tangent_of_normal(const Vec2& nu) { return rot270(nu); }

double max_mu(const NetworkSpec& spec) {
    double m = 0.0;
    for (double v : spec.mu) m = std::max(m, v);
    return m;
}

// Union-find over curve ids.
std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

std::vector<GeometryCache> all_geometry(const NetworkSpec& spec) {
    std::vector<GeometryCache> caches;
    caches.reserve(spec.size());
    for (const auto& c : spec.curves) caches.push_back(compute_geometry(c));
    return caches;
}

double concurrency_gap(std::span<const Vec2> pts) {
    double gap = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) gap = std::max(gap, norm(pts[i] - pts[j]));
    return gap;
}

Vec2 third_order_vector(const NetworkSpec& spec, const JunctionSpec& junction, const JunctionGeometry& g) {
    Vec2 sum{0.0, 0.0};
    for (std::size_t j = 0; j < junction.order(); ++j) {
        const auto& m = junction.members[j];
        const double sigma = m.orientation();
        const double mu = spec.mu[m.curve];
        const Vec2 tau = g.tangent[j] * sigma;  // curve orientation
        Vec2 term = g.nu[j] * (-2.0 * g.ds_k[j]) + tau * mu;
        if (junction.kind == JunctionKind::clamped) term -= tau * (g.k[j] * g.k[j]);
        sum += term * sigma;
    }
    return sum;
}

// max over the non-spanning members of the sine-weighted velocity relation.
double sine_relation_residual(const JunctionGeometry& g) {
    const std::size_t m = g.nu.size();
    if (m < 3) return 0.0;
    const std::vector<std::size_t> order = counterclockwise_order(g.tangent);
    std::size_t a = order[0], b = order[1];
    double best = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t p = order[i], q = order[(i + 1) % m];
        const double c = std::abs(cross(g.nu[p], g.nu[q]));
        if (c > best) {
            best = c;
            a = p;
            b = q;
        }
    }
    double r = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (j == a || j == b) continue;
        // sin(angle(nu_b, nu_j)) V_a + sin(angle(nu_j, nu_a)) V_b + sin(angle(nu_a, nu_b)) V_j
        const double v = cross(g.nu[b], g.nu[j]) * g.V[a] + cross(g.nu[j], g.nu[a]) * g.V[b] +
                         cross(g.nu[a], g.nu[b]) * g.V[j];
        r = std::max(r, std::abs(v));
    }
    return r;
}

}  // namespace

std::string bc_name(const BoundaryCondition& bc) {
    struct Visitor {
        std::string operator()(const Periodic&) const { return "periodic"; }
        std::string operator()(const NavierEndpoint&) const { return "navier"; }
        std::string operator()(const ClampedEndpoint&) const { return "clamped"; }
        std::string operator()(const NaturalJunction&) const { return "natural_junction"; }
        std::string operator()(const ClampedJunction&) const { return "clamped_junction"; }
    };
    return std::visit(Visitor{}, bc);
}

NetworkSpec NetworkSpec::single(SampledCurve curve, double mu) {
    NetworkSpec spec;
    spec.curves.push_back(std::move(curve));
    spec.mu = {mu};
    return spec;
}

std::size_t end_index(const SampledCurve& curve, CurveEnd end) noexcept {
    return end == CurveEnd::start ? 0 : curve.size() - 1;
}

BoundaryCondition boundary_condition(const NetworkSpec& spec, std::size_t curve, CurveEnd end) {
    if (curve >= spec.size()) throw InvalidNetwork("curve id " + std::to_string(curve) + " out of range");
    if (spec.curves[curve].closed()) return Periodic{};
    for (std::size_t j = 0; j < spec.junctions.size(); ++j) {
        const auto& junction = spec.junctions[j];
        for (const auto& m : junction.members) {
            if (m.curve == curve && m.end == end) {
                if (junction.kind == JunctionKind::natural) return NaturalJunction{j};
                return ClampedJunction{j, junction.cosines};
            }
        }
    }
    for (const auto& e : spec.endpoints) {
        if (e.curve == curve && e.end == end) {
            return std::visit([](const auto& c) -> BoundaryCondition { return c; }, e.bc);
        }
    }
    throw InvalidNetwork(member_location(curve, end) + " has no boundary condition");
}

void check_structure(const NetworkSpec& spec) {
    const std::size_t n = spec.size();
    if (n == 0) throw InvalidNetwork("network has no curves");
    if (spec.mu.size() != n) {
        throw InvalidNetwork("expected " + std::to_string(n) + " mu values, got " + std::to_string(spec.mu.size()));
    }
    for (double m : spec.mu) {
        if (!(m >= 0.0) || !std::isfinite(m)) throw InvalidNetwork("mu must be finite and non-negative");
    }

    std::vector<int> uses(2 * n, 0);
    auto mark = [&](std::size_t curve, CurveEnd end) {
        if (curve >= n) throw InvalidNetwork("curve id " + std::to_string(curve) + " out of range");
        if (spec.curves[curve].closed()) {
            throw InvalidNetwork("closed curve " + std::to_string(curve) + " cannot carry end conditions");
        }
        ++uses[2 * curve + (end == CurveEnd::start ? 0 : 1)];
    };

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);

    for (std::size_t j = 0; j < spec.junctions.size(); ++j) {
        const auto& junction = spec.junctions[j];
        if (junction.order() < 2) throw InvalidNetwork("junction " + std::to_string(j) + " has order < 2");
        for (const auto& m : junction.members) mark(m.curve, m.end);
        if (junction.kind == JunctionKind::clamped) {
            if (junction.cosines.size() != junction.order() - 1) {
                throw InvalidNetwork("clamped junction " + std::to_string(j) + " needs " +
                                     std::to_string(junction.order() - 1) + " cosines");
            }
            for (double c : junction.cosines) {
                if (!(c >= -1.0 && c <= 1.0)) throw InvalidNetwork("junction cosine outside [-1, 1]");
            }
        }
        for (const auto& m : junction.members) {
            const std::size_t a = find_root(parent, junction.members.front().curve);
            const std::size_t b = find_root(parent, m.curve);
            parent[b] = a;
        }
    }
    for (const auto& e : spec.endpoints) {
        mark(e.curve, e.end);
        if (const auto* c = std::get_if<ClampedEndpoint>(&e.bc)) {
            if (std::abs(norm(c->tangent) - 1.0) > 1e-12) throw InvalidNetwork("clamped tangent is not a unit vector");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (int e = 0; e < 2; ++e) {
            const int u = uses[2 * i + e];
            const std::string where = member_location(i, e == 0 ? CurveEnd::start : CurveEnd::end);
            if (spec.curves[i].closed()) continue;
            if (u == 0) throw InvalidNetwork(where + " has no boundary condition");
            if (u > 1) throw InvalidNetwork(where + " is listed " + std::to_string(u) + " times");
        }
    }
    const std::size_t root = find_root(parent, 0);
    for (std::size_t i = 1; i < n; ++i) {
        if (find_root(parent, i) != root) throw InvalidNetwork("network is not connected");
    }
}

double network_diameter(const NetworkSpec& spec) {
    std::vector<Vec2> all;
    for (const auto& c : spec.curves) all.insert(all.end(), c.points().begin(), c.points().end());
    return bounding_diameter(all);
}

std::vector<double> junction_matrix(std::span<const Vec2> unit_normals) {
    const std::size_t m = unit_normals.size();
    std::vector<double> a(m * m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t next = (j + 1) % m;
        a[j * m + j] += 1.0;
        a[j * m + next] -= dot(tangent_of_normal(unit_normals[j]), tangent_of_normal(unit_normals[next]));
    }
    return a;
}

double junction_determinant(std::span<const Vec2> unit_normals) {
    const std::size_t m = unit_normals.size();
    const std::vector<double> a = junction_matrix(unit_normals);
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> mat(
        a.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    return Eigen::PartialPivLU<Eigen::MatrixXd>(mat).determinant();
}

std::vector<double> junction_tangential_solve(std::span<const Vec2> unit_normals,
                                              std::span<const double> normal_speeds) {
    const std::size_t m = unit_normals.size();
    if (m < 2) throw DegenerateJunction("junction order must be at least 2");
    if (normal_speeds.size() != m) throw GridMismatch("normal speed count does not match junction order");
    const std::vector<double> a = junction_matrix(unit_normals);
    const auto mi = static_cast<Eigen::Index>(m);
    Eigen::MatrixXd mat(mi, mi);
    Eigen::VectorXd rhs(mi);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t next = (j + 1) % m;
        for (std::size_t c = 0; c < m; ++c) mat(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c)) = a[j * m + c];
        rhs(static_cast<Eigen::Index>(j)) =
            dot(unit_normals[next], tangent_of_normal(unit_normals[j])) * normal_speeds[next];
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(mat);
    const double det = lu.determinant();
    if (!(std::abs(det) >= 1e-10)) {
        throw DegenerateJunction("det(M) = " + std::to_string(det) + ", normals do not span the plane");
    }
    const Eigen::VectorXd t = lu.solve(rhs);
    return {t.data(), t.data() + m};
}

std::vector<std::size_t> counterclockwise_order(std::span<const Vec2> outgoing_tangents) {
    std::vector<std::size_t> idx(outgoing_tangents.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::atan2(outgoing_tangents[a].y, outgoing_tangents[a].x) <
               std::atan2(outgoing_tangents[b].y, outgoing_tangents[b].x);
    });
    return idx;
}

double nondegeneracy_measure(std::span<const Vec2> outgoing_tangents) {
    const std::size_t m = outgoing_tangents.size();
    if (m < 2) return 0.0;
    const std::vector<std::size_t> order = counterclockwise_order(outgoing_tangents);
    double best = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2 a = outgoing_tangents[order[i]] / norm(outgoing_tangents[order[i]]);
        const Vec2 b = outgoing_tangents[order[(i + 1) % m]] / norm(outgoing_tangents[order[(i + 1) % m]]);
        best = std::max(best, std::abs(cross(a, b)));
    }
    return std::min(best, 1.0);
}

std::string condition_name(Condition c) {
    switch (c) {
        case Condition::concurrency: return "concurrency";
        case Condition::position: return "position";
        case Condition::angle: return "angle";
        case Condition::curvature: return "curvature";
        case Condition::third_order: return "third_order";
        case Condition::fixed_endpoint_velocity: return "fixed_endpoint_velocity";
        case Condition::nondegeneracy: return "nondegeneracy";
        case Condition::sine_relation: return "sine_relation";
    }
    return "unknown";
}

bool ValidationReport::passed() const noexcept {
    return std::all_of(entries.begin(), entries.end(), [](const ValidationEntry& e) { return e.passed; });
}

std::vector<ValidationEntry> ValidationReport::failures() const {
    std::vector<ValidationEntry> out;
    std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
                 [](const ValidationEntry& e) { return !e.passed; });
    return out;
}

JunctionGeometry junction_geometry(const NetworkSpec& spec, const JunctionSpec& junction,
                                   std::span<const GeometryCache> caches) {
    JunctionGeometry g;
    for (const auto& m : junction.members) {
        const GeometryCache& geom = caches[m.curve];
        const std::size_t i = end_index(spec.curves[m.curve], m.end);
        const std::vector<double> ds_k = curvature_derivative(geom, 1);
        const std::vector<double> v = normal_velocity(geom, spec.mu[m.curve]);
        g.position.push_back(spec.curves[m.curve][i]);
        g.tangent.push_back(geom.tau[i] * static_cast<double>(m.orientation()));
        g.nu.push_back(geom.nu[i]);
        g.k.push_back(geom.k[i]);
        g.ds_k.push_back(ds_k[i]);
        g.V.push_back(v[i]);
    }
    return g;
}

std::vector<ResidualEntry> boundary_residuals(const NetworkSpec& spec) {
    check_structure(spec);
    const std::vector<GeometryCache> caches = all_geometry(spec);
    std::vector<ResidualEntry> out;

    for (const auto& e : spec.endpoints) {
        const std::string where = member_location(e.curve, e.end);
        const GeometryCache& geom = caches[e.curve];
        const std::size_t i = end_index(spec.curves[e.curve], e.end);
        if (const auto* nav = std::get_if<NavierEndpoint>(&e.bc)) {
            out.push_back({Condition::position, where, norm(spec.curves[e.curve][i] - nav->point)});
            out.push_back({Condition::curvature, where, std::abs(geom.k[i])});
        } else {
            const auto& cl = std::get<ClampedEndpoint>(e.bc);
            out.push_back({Condition::position, where, norm(spec.curves[e.curve][i] - cl.point)});
            out.push_back({Condition::angle, where, norm(geom.tau[i] - cl.tangent)});
        }
    }
    for (std::size_t j = 0; j < spec.junctions.size(); ++j) {
        const auto& junction = spec.junctions[j];
        const std::string where = "junction " + std::to_string(j);
        const JunctionGeometry g = junction_geometry(spec, junction, caches);
        out.push_back({Condition::concurrency, where, concurrency_gap(g.position)});
        if (junction.kind == JunctionKind::natural) {
            double kmax = 0.0;
            for (double k : g.k) kmax = std::max(kmax, std::abs(k));
            out.push_back({Condition::curvature, where, kmax});
        } else {
            double gap = 0.0, ksum = 0.0;
            for (std::size_t m = 0; m + 1 < junction.order(); ++m) {
                gap = std::max(gap, std::abs(dot(g.tangent[m], g.tangent[m + 1]) - junction.cosines[m]));
            }
            for (std::size_t m = 0; m < junction.order(); ++m) ksum += junction.members[m].orientation() * g.k[m];
            out.push_back({Condition::angle, where, gap});
            out.push_back({Condition::curvature, where, std::abs(ksum)});
        }
        out.push_back({Condition::third_order, where, norm(third_order_vector(spec, junction, g))});
    }
    return out;
}

ValidationReport validate_admissible(const NetworkSpec& spec, const ValidationTolerances& tol) {
    check_structure(spec);
    const std::vector<GeometryCache> caches = all_geometry(spec);
    const double diam = std::max(network_diameter(spec), 1e-300);
    const double mu_max = max_mu(spec);
    const double tol_curv = tol.curvature / diam;
    const double tol_third = tol.third_order * (1.0 / (diam * diam) + mu_max);
    const double tol_vel = tol.velocity * (1.0 / (diam * diam * diam) + mu_max / diam);

    ValidationReport report;
    auto add = [&](Condition c, std::string where, double residual, double tolerance, bool experimental = false) {
        report.entries.push_back({c, std::move(where), residual, tolerance, residual <= tolerance, experimental});
    };

    for (const auto& e : spec.endpoints) {
        const std::string where = member_location(e.curve, e.end);
        const GeometryCache& geom = caches[e.curve];
        const std::size_t i = end_index(spec.curves[e.curve], e.end);
        const std::vector<double> v = normal_velocity(geom, spec.mu[e.curve]);
        if (const auto* nav = std::get_if<NavierEndpoint>(&e.bc)) {
            add(Condition::position, where, norm(spec.curves[e.curve][i] - nav->point), tol.position_rel * diam);
            add(Condition::curvature, where, std::abs(geom.k[i]), tol_curv);
        } else {
            const auto& cl = std::get<ClampedEndpoint>(e.bc);
            add(Condition::position, where, norm(spec.curves[e.curve][i] - cl.point), tol.position_rel * diam);
            add(Condition::angle, where, norm(geom.tau[i] - cl.tangent), tol.angle);
        }
        add(Condition::fixed_endpoint_velocity, where, std::abs(v[i]), tol_vel);
    }

    for (std::size_t j = 0; j < spec.junctions.size(); ++j) {
        const auto& junction = spec.junctions[j];
        const bool clamped = junction.kind == JunctionKind::clamped;
        const std::string where = "junction " + std::to_string(j);
        const JunctionGeometry g = junction_geometry(spec, junction, caches);
        add(Condition::concurrency, where, concurrency_gap(g.position), tol.concurrency_rel * diam, clamped);
        if (!clamped) {
            double kmax = 0.0;
            for (double k : g.k) kmax = std::max(kmax, std::abs(k));
            add(Condition::curvature, where, kmax, tol_curv);
        } else {
            double gap = 0.0, ksum = 0.0;
            for (std::size_t m = 0; m + 1 < junction.order(); ++m) {
                gap = std::max(gap, std::abs(dot(g.tangent[m], g.tangent[m + 1]) - junction.cosines[m]));
            }
            for (std::size_t m = 0; m < junction.order(); ++m) ksum += junction.members[m].orientation() * g.k[m];
            add(Condition::angle, where, gap, tol.angle, true);
            add(Condition::curvature, where, std::abs(ksum), tol_curv, true);
        }
        add(Condition::third_order, where, norm(third_order_vector(spec, junction, g)), tol_third, clamped);

        const double measure = nondegeneracy_measure(g.tangent);
        report.entries.push_back({Condition::nondegeneracy, where, measure, tol.nondegeneracy,
                                  measure > tol.nondegeneracy, clamped});
        if (junction.order() >= 3) add(Condition::sine_relation, where, sine_relation_residual(g), tol_vel, clamped);
    }
    return report;
}

}  // namespace elastica
