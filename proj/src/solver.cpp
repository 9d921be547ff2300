#include "elastica/solver.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "elastica/diagnostics.hpp"
#include "elastica/finite_difference.hpp"

namespace elastica {

namespace {

using Triplet = Eigen::Triplet<double>;

// Start/end tangential speeds of every curve, from the junction systems.
std::vector<std::array<double, 2>> junction_end_speeds(const FlowState& state) {
    const NetworkSpec& spec = state.network;
    std::vector<std::array<double, 2>> out(spec.size(), {0.0, 0.0});
    for (const auto& junction : spec.junctions) {
        const JunctionGeometry g = junction_geometry(spec, junction, state.caches);
        const std::vector<std::size_t> order = counterclockwise_order(g.tangent);
        std::vector<Vec2> normals;
        std::vector<double> speeds;
        for (std::size_t idx : order) {
            normals.push_back(g.nu[idx]);
            speeds.push_back(g.V[idx]);
        }
        const std::vector<double> T = junction_tangential_solve(normals, speeds);
        for (std::size_t r = 0; r < order.size(); ++r) {
            const auto& m = junction.members[order[r]];
            out[m.curve][m.end == CurveEnd::start ? 0 : 1] = T[r];
        }
    }
    return out;
}

// Linear blend between the end values: the junction solve at junction ends,
// zero at fixed ends.
std::vector<double> network_tangential(const SampledCurve& curve, double t_start, double t_end) {
    std::vector<double> t(curve.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double x = curve.parameter(i);
        t[i] = (1.0 - x) * t_start + x * t_end;
    }
    return t;
}

// Collects triplets and right-hand side; boundary rows are equilibrated so
// their largest coefficient is one.
class Assembler {
public:
    Assembler(std::size_t unknowns) : b_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknowns))) {}

    void add(std::size_t row, std::size_t col, double v) { triplets_.emplace_back(idx(row), idx(col), v); }
    void set_rhs(std::size_t row, double v) { b_(idx(row)) = v; }

    struct Row {
        std::vector<std::pair<std::size_t, double>> coeffs;
        double rhs{};
        void add(std::size_t col, double v) { coeffs.emplace_back(col, v); }
    };

    void add_scaled(std::size_t row, const Row& r) {
        double scale = 0.0;
        for (const auto& [c, v] : r.coeffs) scale = std::max(scale, std::abs(v));
        if (!(scale > 0.0)) throw SingularSystem("empty boundary row");
        for (const auto& [c, v] : r.coeffs) add(row, c, v / scale);
        set_rhs(row, r.rhs / scale);
    }

    LinearSystem finish(std::vector<std::size_t> offsets, std::vector<std::size_t> sizes) {
        LinearSystem sys;
        const auto n = b_.size();
        sys.A.resize(n, n);
        sys.A.setFromTriplets(triplets_.begin(), triplets_.end());
        sys.A.makeCompressed();
        sys.b = std::move(b_);
        sys.offsets = std::move(offsets);
        sys.sizes = std::move(sizes);
        return sys;
    }

private:
    static Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }
    std::vector<Triplet> triplets_;
    Eigen::VectorXd b_;
};

struct EndRef {
    std::size_t curve;
    std::size_t node;  // end node
    std::size_t band;  // its neighbour
    int sigma;
};

EndRef end_ref(const NetworkSpec& spec, std::size_t curve, CurveEnd end) {
    const std::size_t n = spec.curves[curve].size();
    if (end == CurveEnd::start) return {curve, 0, 1, 1};
    return {curve, n - 1, n - 2, -1};
}

double total_energy(const std::vector<GeometryCache>& caches, const std::vector<double>& mu) {
    double e = 0.0;
    for (std::size_t c = 0; c < caches.size(); ++c) e += elastic_energy(caches[c], mu[c]).total;
    return e;
}

}  // namespace

void SolverConfig::validate() const {
    if (!(dt_min > 0.0) || !(dt_min <= dt_init) || !(dt_init <= dt_max)) {
        throw BadParams("need 0 < dt_min <= dt_init <= dt_max");
    }
    if (!(stop_velocity_tol > 0.0) || !(tol_mono_rel > 0.0)) throw BadParams("tolerances must be positive");
    if (!(dt_growth >= 1.0)) throw BadParams("dt_growth must be >= 1");
    if (!(velocity_growth_limit == 0.0 || velocity_growth_limit > 1.0)) {
        throw BadParams("velocity_growth_limit must be 0 or above 1");
    }
    if (!(t_end >= 0.0)) throw BadParams("t_end must be non-negative");
    if (!(remesh_speed_ratio == 0.0 || remesh_speed_ratio > 1.0)) throw BadParams("remesh_speed_ratio must be 0 or above 1");
    if (!(remesh_energy_tol_rel >= 0.0)) throw BadParams("remesh_energy_tol_rel must be non-negative");
    if (!(stability_cfl >= 0.0)) throw BadParams("stability_cfl must be non-negative");
}

FlowState FlowState::initial(NetworkSpec network, double dt) {
    check_structure(network);
    FlowState s;
    s.network = std::move(network);
    s.dt_next = dt;
    s.refresh();
    s.reference_energy = s.energy();
    return s;
}

void FlowState::refresh() {
    caches.clear();
    caches.reserve(network.size());
    for (const auto& c : network.curves) caches.push_back(compute_geometry(c));
}

double FlowState::energy() const { return total_energy(caches, network.mu); }

EnergyReport FlowState::energy_report() const {
    EnergyReport r;
    for (std::size_t c = 0; c < caches.size(); ++c) r += elastic_energy(caches[c], network.mu[c]);
    return r;
}

std::vector<double> tangential_velocity(const FlowState& state, std::size_t curve) {
    const NetworkSpec& spec = state.network;
    if (curve >= spec.size()) throw InvalidNetwork("curve id out of range");
    if (spec.junctions.empty()) return special_tangential_velocity(state.caches[curve], spec.mu[curve]);
    const auto ends = junction_end_speeds(state);
    return network_tangential(spec.curves[curve], ends[curve][0], ends[curve][1]);
}

LinearSystem assemble_step_system(const FlowState& state, double dt) {
    if (!(dt > 0.0)) throw BadParams("dt must be positive");
    const NetworkSpec& spec = state.network;
    const std::size_t nc = spec.size();

    std::vector<std::size_t> offsets(nc), sizes(nc);
    std::size_t total = 0;
    for (std::size_t c = 0; c < nc; ++c) {
        offsets[c] = total;
        sizes[c] = spec.curves[c].size();
        total += 2 * sizes[c];
    }
    auto col = [&](std::size_t c, std::size_t i, int d) { return offsets[c] + 2 * i + static_cast<std::size_t>(d); };

    Assembler as(total);
    const bool has_junctions = !spec.junctions.empty();
    const auto ends = has_junctions ? junction_end_speeds(state) : std::vector<std::array<double, 2>>{};

    // Interior (PDE) rows.
    for (std::size_t c = 0; c < nc; ++c) {
        const SampledCurve& curve = spec.curves[c];
        const GeometryCache& geom = state.caches[c];
        const std::size_t n = curve.size();
        const double h = curve.param_step();
        const std::vector<double> V = normal_velocity(geom, spec.mu[c]);
        const std::vector<double> T = has_junctions ? network_tangential(curve, ends[c][0], ends[c][1])
                                                    : special_tangential_velocity(geom, spec.mu[c]);
        const std::size_t lo = curve.closed() ? 0 : 2;
        const std::size_t hi = curve.closed() ? n : n - 2;
        for (std::size_t i = lo; i < hi; ++i) {
            const double s2 = geom.speed[i] * geom.speed[i];
            const double coef = 2.0 / (s2 * s2);
            const Stencil st = node_stencil(i, n, curve.closed(), h, 4);
            Vec2 d4{};
            for (std::size_t k = 0; k < st.indices.size(); ++k) d4 += st.weights[k] * curve[st.indices[k]];
            const Vec2 f = geom.nu[i] * V[i] + geom.tau[i] * T[i];
            for (int d = 0; d < 2; ++d) {
                const std::size_t row = col(c, i, d);
                as.add(row, row, 1.0);
                for (std::size_t k = 0; k < st.indices.size(); ++k) {
                    as.add(row, col(c, st.indices[k], d), dt * coef * st.weights[k]);
                }
                as.set_rhs(row, curve[i][d] + dt * (f[d] + coef * d4[d]));
            }
        }
    }

    auto one_sided = [&](const EndRef& e, int order) {
        const SampledCurve& curve = spec.curves[e.curve];
        return node_stencil(e.node, curve.size(), false, curve.param_step(), order);
    };

    // Fixed endpoints.
    for (const auto& ep : spec.endpoints) {
        const EndRef e = end_ref(spec, ep.curve, ep.end);
        const Vec2 point = std::visit([](const auto& bc) { return bc.point; }, ep.bc);
        for (int d = 0; d < 2; ++d) {
            Assembler::Row r;
            r.add(col(e.curve, e.node, d), 1.0);
            r.rhs = point[d];
            as.add_scaled(col(e.curve, e.node, d), r);
        }
        if (std::holds_alternative<NavierEndpoint>(ep.bc)) {
            const Stencil s2 = one_sided(e, 2);
            for (int d = 0; d < 2; ++d) {
                Assembler::Row r;
                for (std::size_t k = 0; k < s2.indices.size(); ++k) r.add(col(e.curve, s2.indices[k], d), s2.weights[k]);
                as.add_scaled(col(e.curve, e.band, d), r);
            }
        } else {
            const auto& cl = std::get<ClampedEndpoint>(ep.bc);
            const double speed = state.caches[e.curve].speed[e.node];
            const Stencil s1 = one_sided(e, 1);
            for (int d = 0; d < 2; ++d) {
                Assembler::Row r;
                for (std::size_t k = 0; k < s1.indices.size(); ++k) r.add(col(e.curve, s1.indices[k], d), s1.weights[k]);
                r.rhs = speed * cl.tangent[d];
                as.add_scaled(col(e.curve, e.band, d), r);
            }
        }
    }

    // Junctions.
    for (const auto& junction : spec.junctions) {
        const std::size_t m = junction.order();
        std::vector<EndRef> refs;
        for (const auto& mem : junction.members) refs.push_back(end_ref(spec, mem.curve, mem.end));
        const EndRef& lead = refs[0];

        auto speed = [&](const EndRef& e) { return state.caches[e.curve].speed[e.node]; };
        auto nu = [&](const EndRef& e) { return state.caches[e.curve].nu[e.node]; };

        // sum_j sigma_j ( -2 nu_j <D3 phi_j, nu_j> / u^3 + (mu_j - k2_j) D1 phi_j / u ), component d
        auto third_order_row = [&](int d, bool clamped) {
            Assembler::Row r;
            for (const EndRef& e : refs) {
                const double u = speed(e);
                const Vec2 n = nu(e);
                const double mu = spec.mu[e.curve];
                const double k = state.caches[e.curve].k[e.node];
                const double lower = clamped ? mu - k * k : mu;
                const Stencil s3 = one_sided(e, 3);
                const Stencil s1 = one_sided(e, 1);
                for (std::size_t q = 0; q < s3.indices.size(); ++q) {
                    for (int a = 0; a < 2; ++a) {
                        r.add(col(e.curve, s3.indices[q], a), -2.0 * e.sigma * n[d] * n[a] * s3.weights[q] / (u * u * u));
                    }
                }
                for (std::size_t q = 0; q < s1.indices.size(); ++q) {
                    r.add(col(e.curve, s1.indices[q], d), e.sigma * lower * s1.weights[q] / u);
                }
            }
            return r;
        };
        auto concurrency_row = [&](const EndRef& e, int d) {
            Assembler::Row r;
            r.add(col(e.curve, e.node, d), 1.0);
            r.add(col(lead.curve, lead.node, d), -1.0);
            return r;
        };
        // <D2 phi, dx1^n> = 0 at the end node.
        auto tangential_second_row = [&](const EndRef& e) {
            Assembler::Row r;
            const Vec2 g1 = state.caches[e.curve].dx1[e.node];
            const Stencil s2 = one_sided(e, 2);
            for (std::size_t q = 0; q < s2.indices.size(); ++q) {
                for (int a = 0; a < 2; ++a) r.add(col(e.curve, s2.indices[q], a), g1[a] * s2.weights[q]);
            }
            return r;
        };

        if (junction.kind == JunctionKind::natural) {
            for (const EndRef& e : refs) {
                const Stencil s2 = one_sided(e, 2);
                for (int d = 0; d < 2; ++d) {
                    Assembler::Row r;
                    for (std::size_t q = 0; q < s2.indices.size(); ++q) r.add(col(e.curve, s2.indices[q], d), s2.weights[q]);
                    as.add_scaled(col(e.curve, e.node, d), r);
                }
            }
            for (int d = 0; d < 2; ++d) as.add_scaled(col(lead.curve, lead.band, d), third_order_row(d, false));
            for (std::size_t j = 1; j < m; ++j) {
                for (int d = 0; d < 2; ++d) as.add_scaled(col(refs[j].curve, refs[j].band, d), concurrency_row(refs[j], d));
            }
        } else {
            for (int d = 0; d < 2; ++d) as.add_scaled(col(lead.curve, lead.node, d), third_order_row(d, true));
            {
                // sum_j sigma_j <D2 phi_j, nu_j> / u_j^2 = 0
                Assembler::Row r;
                for (const EndRef& e : refs) {
                    const double u = speed(e);
                    const Vec2 n = nu(e);
                    const Stencil s2 = one_sided(e, 2);
                    for (std::size_t q = 0; q < s2.indices.size(); ++q) {
                        for (int a = 0; a < 2; ++a) r.add(col(e.curve, s2.indices[q], a), e.sigma * n[a] * s2.weights[q] / (u * u));
                    }
                }
                as.add_scaled(col(lead.curve, lead.band, 0), r);
            }
            as.add_scaled(col(lead.curve, lead.band, 1), tangential_second_row(lead));
            for (std::size_t j = 1; j < m; ++j) {
                const EndRef& e = refs[j];
                for (int d = 0; d < 2; ++d) as.add_scaled(col(e.curve, e.node, d), concurrency_row(e, d));
                // Linearized <t_a, t_b> = cosine, t = outgoing unit tangents.
                const EndRef& pa = refs[j - 1];
                const Vec2 ta = state.caches[pa.curve].tau[pa.node] * static_cast<double>(pa.sigma);
                const Vec2 tb = state.caches[e.curve].tau[e.node] * static_cast<double>(e.sigma);
                const double g = dot(ta, tb);
                const Vec2 ga = (tb - ta * g) * (pa.sigma / speed(pa));
                const Vec2 gb = (ta - tb * g) * (e.sigma / speed(e));
                Assembler::Row r;
                const Stencil sa = one_sided(pa, 1);
                const Stencil sb = one_sided(e, 1);
                for (std::size_t q = 0; q < sa.indices.size(); ++q) {
                    for (int a = 0; a < 2; ++a) r.add(col(pa.curve, sa.indices[q], a), ga[a] * sa.weights[q]);
                }
                for (std::size_t q = 0; q < sb.indices.size(); ++q) {
                    for (int a = 0; a < 2; ++a) r.add(col(e.curve, sb.indices[q], a), gb[a] * sb.weights[q]);
                }
                r.rhs = junction.cosines[j - 1] - g;
                as.add_scaled(col(e.curve, e.band, 0), r);
                as.add_scaled(col(e.curve, e.band, 1), tangential_second_row(e));
            }
        }
    }

    return as.finish(std::move(offsets), std::move(sizes));
}

double stability_dt_limit(const FlowState& state, double cfl) {
    double kappa = 0.0;
    for (const auto& g : state.caches) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double u = g.speed[i];
            kappa = std::max({kappa, std::abs(g.k[i]), std::abs(dot(g.dx2[i], g.dx1[i])) / (u * u * u)});
        }
    }
    if (kappa == 0.0) return std::numeric_limits<double>::infinity();
    return cfl / (kappa * kappa * kappa * kappa);
}

LinearSolution solve_linear(const LinearSystem& system) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(system.A);
    lu.factorize(system.A);
    if (lu.info() != Eigen::Success) throw SingularSystem("sparse LU failed: " + lu.lastErrorMessage());
    Eigen::VectorXd x = lu.solve(system.b);
    if (lu.info() != Eigen::Success || !x.allFinite()) throw SingularSystem("sparse LU solve failed");
    // Iterative refinement so the exact linear constraints (pinned endpoints)
    // hold to roundoff rather than to the LU's backward error.
    for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd correction = lu.solve(system.b - system.A * x);
        if (!correction.allFinite()) break;
        x += correction;
    }
    // Normwise backward error; ||b|| alone is dwarfed by ||A|| ||x|| for stiff steps.
    Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(system.A.rows());
    for (Eigen::Index k = 0; k < system.A.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(system.A, k); it; ++it) rowsum(it.row()) += std::abs(it.value());
    }
    const double anorm = rowsum.lpNorm<Eigen::Infinity>();
    const double bnorm = system.b.lpNorm<Eigen::Infinity>();
    const double rnorm = (system.A * x - system.b).lpNorm<Eigen::Infinity>();
    const double scale = anorm * x.lpNorm<Eigen::Infinity>() + bnorm;
    const double residual = scale > 0.0 ? rnorm / scale : rnorm;
    if (!(residual <= 1e-9)) throw SingularSystem("backward error " + std::to_string(residual) + " exceeds 1e-9");

    LinearSolution sol;
    sol.residual = residual;
    for (std::size_t c = 0; c < system.offsets.size(); ++c) {
        std::vector<Vec2> pts(system.sizes[c]);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto k = static_cast<Eigen::Index>(system.offsets[c] + 2 * i);
            pts[i] = {x(k), x(k + 1)};
        }
        sol.points.push_back(std::move(pts));
    }
    return sol;
}

namespace {

struct Attempt {
    FlowState state;
    double residual{};
};

double max_speed_ratio(const FlowState& state) {
    double ratio = 1.0;
    for (const auto& g : state.caches) {
        const auto [lo, hi] = std::minmax_element(g.speed.begin(), g.speed.end());
        ratio = std::max(ratio, *hi / *lo);
    }
    return ratio;
}

Attempt try_step(const FlowState& state, double dt) {
    const LinearSolution sol = solve_linear(assemble_step_system(state, dt));
    Attempt a;
    a.state.t = state.t + dt;
    a.state.network = state.network;
    for (std::size_t c = 0; c < sol.points.size(); ++c) {
        a.state.network.curves[c] = state.network.curves[c].with_points(sol.points[c]);
    }
    a.state.refresh();
    a.state.reference_energy = state.reference_energy;
    a.state.accepted_steps = state.accepted_steps + 1;
    a.state.steps_since_remesh = state.steps_since_remesh + 1;
    a.residual = sol.residual;
    return a;
}

}  // namespace

StepResult step(const FlowState& state, const SolverConfig& config) {
    config.validate();
    const double e_before = state.energy();
    const double e_ref = state.reference_energy > 0.0 ? state.reference_energy : e_before;
    const double tol_mono = config.tol_mono_rel * e_ref;
    const double v_l2 = stationarity(state.caches, state.network.mu);

    double dt = state.dt_next > 0.0 ? state.dt_next : config.dt_init;
    if (config.stability_cfl > 0.0) dt = std::min(dt, stability_dt_limit(state, config.stability_cfl));
    dt = std::clamp(dt, config.dt_min, config.dt_max);
    const double remaining = config.t_end - state.t;
    if (remaining > 0.0 && remaining < dt) dt = remaining;

    std::size_t halvings = 0;
    Attempt accepted;
    double e_after = 0.0;
    double v_after = -1.0;
    while (true) {
        std::string why;
        bool ok = false;
        try {
            accepted = try_step(state, dt);
            e_after = accepted.state.energy();
            ok = !config.energy_backtrack || e_after <= e_before + tol_mono;
            if (!ok) why = "energy rose from " + std::to_string(e_before) + " to " + std::to_string(e_after);
            if (ok && config.energy_backtrack && config.velocity_growth_limit > 0.0 &&
                v_l2 > config.stop_velocity_tol) {
                v_after = stationarity(accepted.state.caches, accepted.state.network.mu);
                if (v_after > config.velocity_growth_limit * v_l2) {
                    ok = false;
                    why = "||V|| grew from " + std::to_string(v_l2) + " to " + std::to_string(v_after);
                }
            }
        } catch (const DegenerateCurve& err) {
            if (!config.energy_backtrack) throw;
            why = err.what();
        } catch (const SingularSystem& err) {
            if (!config.energy_backtrack) throw;
            why = err.what();
        }
        if (ok) break;
        if (dt * 0.5 < config.dt_min * (1.0 - 1e-12)) {
            throw StepFailed("dt_min = " + std::to_string(config.dt_min) + " reached at t = " +
                             std::to_string(state.t) + ": " + why);
        }
        dt *= 0.5;
        ++halvings;
    }

    FlowState next = std::move(accepted.state);
    StepReport report;
    report.t_before = state.t;
    report.dt_used = dt;
    report.energy_before = e_before;
    report.dissipation_rhs = -v_l2 * v_l2;
    report.linear_residual = accepted.residual;
    report.halvings = halvings;
    // The discrete energy depends on the parametrization at O(h^2), so a remesh
    // is judged by its own energy change rather than against the step.
    const bool remesh_due = (config.remesh_every > 0 && next.steps_since_remesh >= config.remesh_every) ||
                            (config.remesh_speed_ratio > 0.0 && max_speed_ratio(next) > config.remesh_speed_ratio);
    if (remesh_due && next.network.junctions.empty()) {
        next.steps_since_remesh = 0;
        FlowState remeshed = next;
        for (auto& c : remeshed.network.curves) c = reparametrize_constant_speed(c);
        remeshed.refresh();
        const double change = remeshed.energy() - e_after;
        if (std::abs(change) <= config.remesh_energy_tol_rel * e_after) {
            next = std::move(remeshed);
            report.remeshed = true;
            report.remesh_energy_change = change;
            v_after = -1.0;
        }
    }

    next.dt_next = halvings == 0 ? std::min(dt * config.dt_growth, config.dt_max) : dt;
    report.energy_after = e_after;
    report.bending_after = next.energy_report().bending_total();
    report.dissipation_lhs = (e_after - e_before) / dt;
    report.velocity_l2_after = v_after >= 0.0 ? v_after : stationarity(next.caches, next.network.mu);
    for (const auto& g : next.caches) report.lengths_after.push_back(g.length);

    const LengthBounds bounds = length_bounds(state.network, e_ref);
    const double len = monitored_length(next.network);
    report.bound_flags.length_below_lower = bounds.below(len);
    report.bound_flags.length_above_upper = bounds.above(len);
    for (double nd : junction_nondegeneracy(next)) {
        if (nd < 0.1) report.bound_flags.junction_degenerate = true;
    }
    return {std::move(next), std::move(report)};
}

std::string status_name(RunStatus s) {
    switch (s) {
        case RunStatus::converged: return "Converged";
        case RunStatus::reached_t_end: return "ReachedTEnd";
        case RunStatus::max_steps: return "MaxSteps";
        case RunStatus::step_failed: return "StepFailed";
        case RunStatus::stopped_on_monitor: return "StoppedOnMonitor";
    }
    return "Unknown";
}

Trajectory run(NetworkSpec initial, const SolverConfig& config) { return run(std::move(initial), config, {}); }

Trajectory run(NetworkSpec initial, const SolverConfig& config, const StepObserver& observer) {
    config.validate();
    Trajectory traj;
    FlowState state = FlowState::initial(std::move(initial), config.dt_init);
    traj.initial_velocity_l2 = stationarity(state.caches, state.network.mu);
    traj.snapshots.push_back(state);
    if (traj.initial_velocity_l2 < config.stop_velocity_tol) {
        traj.status = RunStatus::converged;
        return traj;
    }

    bool last_saved = true;
    while (true) {
        if (state.t >= config.t_end - 1e-12 * std::max(1.0, config.t_end)) {
            traj.status = RunStatus::reached_t_end;
            break;
        }
        if (traj.reports.size() >= config.max_steps) {
            traj.status = RunStatus::max_steps;
            break;
        }
        StepResult r;
        try {
            r = step(state, config);
        } catch (const StepFailed& err) {
            traj.status = RunStatus::step_failed;
            traj.message = err.what();
            break;
        }
        state = std::move(r.state);
        if (observer) observer(state, r.report);
        const bool flagged = r.report.bound_flags.any();
        const double v = r.report.velocity_l2_after;
        traj.reports.push_back(std::move(r.report));
        last_saved = false;
        if (flagged) ++traj.monitor_events;
        if (config.snapshot_every > 0 && state.accepted_steps % config.snapshot_every == 0) {
            traj.snapshots.push_back(state);
            last_saved = true;
        }
        if (v < config.stop_velocity_tol) {
            traj.status = RunStatus::converged;
            break;
        }
        if (flagged && config.stop_on_monitor) {
            traj.status = RunStatus::stopped_on_monitor;
            traj.message = "length or non-degeneracy monitor fired";
            break;
        }
    }
    if (!last_saved) traj.snapshots.push_back(std::move(state));
    return traj;
}

}  // namespace elastica
