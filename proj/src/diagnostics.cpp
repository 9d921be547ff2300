#include "elastica/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "elastica/variational.hpp"

namespace elastica {

namespace {

constexpr double kPi = std::numbers::pi;

double min_mu(std::span<const double> mu) {
    if (mu.empty()) return 0.0;
    return *std::min_element(mu.begin(), mu.end());
}

Vec2 fixed_point(const NetworkSpec& spec, CurveEnd end) {
    for (const auto& e : spec.endpoints) {
        if (e.curve == 0 && e.end == end) return std::visit([](const auto& bc) { return bc.point; }, e.bc);
    }
    const SampledCurve& c = spec.curves[0];
    return c[end_index(c, end)];
}

}  // namespace

LengthBounds length_bounds(double E0, std::span<const double> mu, CurveClass cls, Vec2 P, Vec2 Q) {
    LengthBounds b;
    const double mu_star = min_mu(mu);
    if (mu_star > 0.0) b.upper = E0 / mu_star;
    switch (cls) {
        case CurveClass::closed:
            b.lower = 4.0 * kPi * kPi / E0;
            break;
        case CurveClass::open:
            b.lower = P == Q ? kPi * kPi / E0 : norm(P - Q);
            break;
        case CurveClass::network:
            b.lower = 0.0;
            break;
    }
    return b;
}

LengthBounds length_bounds(const NetworkSpec& initial, double E0) {
    if (initial.size() == 1 && initial.junctions.empty()) {
        if (initial.curves[0].closed()) return length_bounds(E0, initial.mu, CurveClass::closed);
        return length_bounds(E0, initial.mu, CurveClass::open, fixed_point(initial, CurveEnd::start),
                             fixed_point(initial, CurveEnd::end));
    }
    return length_bounds(E0, initial.mu, CurveClass::network);
}

double monitored_length(const NetworkSpec& spec) {
    double total = 0.0;
    for (const auto& c : spec.curves) total += compute_geometry(c).length;
    return total;
}

double dissipation_residual(const StepReport& report) {
    const double v2 = -report.dissipation_rhs;
    const double gap = std::abs(report.dissipation_lhs + v2);
    if (v2 < kDissipationFloor && std::abs(report.dissipation_lhs) < kDissipationFloor) return 0.0;
    return gap / std::max(v2, kDissipationFloor);
}

std::vector<double> dissipation_residual(std::span<const StepReport> reports) {
    std::vector<double> out;
    out.reserve(reports.size());
    for (const auto& r : reports) out.push_back(dissipation_residual(r));
    return out;
}

double stationarity(std::span<const GeometryCache> caches, std::span<const double> mu) {
    double sum = 0.0;
    for (std::size_t c = 0; c < caches.size(); ++c) {
        const std::vector<double> v = normal_velocity(caches[c], mu[c]);
        for (std::size_t i = 0; i < v.size(); ++i) sum += v[i] * v[i] * caches[c].ds_weight[i];
    }
    return std::sqrt(sum);
}

double stationarity(const SampledCurve& curve, double mu) {
    const GeometryCache g = compute_geometry(curve);
    const double m[] = {mu};
    return stationarity(std::span<const GeometryCache>(&g, 1), m);
}

double stationarity(const NetworkSpec& spec) {
    std::vector<GeometryCache> caches;
    for (const auto& c : spec.curves) caches.push_back(compute_geometry(c));
    return stationarity(caches, spec.mu);
}

int winding_number(const GeometryCache& geom) {
    double total = 0.0;
    for (std::size_t i = 0; i < geom.size(); ++i) total += geom.k[i] * geom.ds_weight[i];
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

std::string LimitClass::describe() const {
    switch (kind) {
        case LimitKind::circle:
            return "Circle(radius=" + std::to_string(radius) + ", winding=" + std::to_string(winding) + ")";
        case LimitKind::figure_eight: return "FigureEight(heuristic)";
        case LimitKind::other: return "Other";
    }
    return "Other";
}

LimitClass classify_limit(const SampledCurve& curve, double mu, double stationarity_threshold) {
    if (!curve.closed()) throw BadParams("classify_limit needs a closed curve");
    const GeometryCache g = compute_geometry(curve);
    const double m[] = {mu};
    const double v = stationarity(std::span<const GeometryCache>(&g, 1), m);
    if (!(v <= stationarity_threshold)) {
        throw NotStationary("||V||_L2 = " + std::to_string(v) + " above " + std::to_string(stationarity_threshold));
    }

    LimitClass out;
    out.winding = winding_number(g);
    double mean = 0.0, mean_abs = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        mean += g.k[i] * g.ds_weight[i];
        mean_abs += std::abs(g.k[i]) * g.ds_weight[i];
    }
    mean /= g.length;
    mean_abs /= g.length;
    double var = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) var += (g.k[i] - mean) * (g.k[i] - mean) * g.ds_weight[i];
    const double stddev = std::sqrt(var / g.length);

    if (out.winding != 0 && mean_abs > 0.0 && stddev / mean_abs < 0.01) {
        const double target = (out.winding > 0 ? 1.0 : -1.0) * std::sqrt(mu);
        if (mu == 0.0 || std::abs(mean - target) <= 0.02 * std::abs(target)) {
            out.kind = LimitKind::circle;
            out.radius = 1.0 / std::abs(mean);
            return out;
        }
    }

    if (out.winding == 0) {
        const double kmax = std::max(mean_abs, 1e-300);
        std::size_t changes = 0;
        int prev = 0;
        // Start from a node with a definite sign so the cyclic count is exact.
        std::size_t start = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (std::abs(g.k[i]) > 1e-8 * kmax) {
                start = i;
                break;
            }
        }
        double pos = 0.0, neg = 0.0;
        for (std::size_t s = 0; s <= g.size(); ++s) {
            const std::size_t i = (start + s) % g.size();
            const double k = g.k[i];
            if (s < g.size()) (k > 0.0 ? pos : neg) += g.ds_weight[i];
            if (std::abs(k) <= 1e-8 * kmax) continue;
            const int sign = k > 0.0 ? 1 : -1;
            if (prev != 0 && sign != prev) ++changes;
            prev = sign;
        }
        if (changes == 2 && std::abs(pos - neg) <= 0.05 * g.length) {
            out.kind = LimitKind::figure_eight;
            out.heuristic = true;
            return out;
        }
    }
    out.kind = LimitKind::other;
    return out;
}

std::size_t MonitorReport::violations() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const MonitorRecord& r) { return r.violated; }));
}

std::vector<double> junction_nondegeneracy(const FlowState& state) {
    std::vector<double> out;
    for (const auto& junction : state.network.junctions) {
        std::vector<Vec2> t;
        for (const auto& m : junction.members) {
            const std::size_t i = end_index(state.network.curves[m.curve], m.end);
            t.push_back(state.caches[m.curve].tau[i] * static_cast<double>(m.orientation()));
        }
        out.push_back(nondegeneracy_measure(t));
    }
    return out;
}

MonitorRecord monitor_state(const FlowState& state, const LengthBounds& bounds) {
    MonitorRecord r;
    r.t = state.t;
    r.energy = state.energy();
    double total = 0.0;
    for (const auto& g : state.caches) {
        r.lengths.push_back(g.length);
        total += g.length;
    }
    r.velocity_l2 = stationarity(state.caches, state.network.mu);
    r.bounds = bounds;
    r.violated = bounds.below(total) || bounds.above(total);
    r.nondegeneracy = junction_nondegeneracy(state);
    return r;
}

MonitorReport monitor(const Trajectory& trajectory) {
    MonitorReport report;
    if (trajectory.snapshots.empty()) return report;
    const FlowState& first = trajectory.snapshots.front();
    const LengthBounds bounds = length_bounds(first.network, first.energy());
    for (const auto& s : trajectory.snapshots) {
        MonitorRecord r = monitor_state(s, bounds);
        if (!report.records.empty() && !(r.t > report.records.back().t)) continue;
        report.records.push_back(std::move(r));
    }
    return report;
}

}  // namespace elastica
