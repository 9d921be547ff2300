#include "elastica/variational.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace elastica {

double EnergyReport::bending_total() const noexcept {
    return std::accumulate(bending.begin(), bending.end(), 0.0);
}

double EnergyReport::weighted_length_total() const noexcept {
    return std::accumulate(weighted_length.begin(), weighted_length.end(), 0.0);
}

EnergyReport& EnergyReport::operator+=(const EnergyReport& other) {
    bending.insert(bending.end(), other.bending.begin(), other.bending.end());
    weighted_length.insert(weighted_length.end(), other.weighted_length.begin(), other.weighted_length.end());
    total += other.total;
    return *this;
}

EnergyReport elastic_energy(const GeometryCache& geom, double mu) {
    if (mu < 0.0) throw BadParams("mu must be non-negative");
    double bending = 0.0;
    for (std::size_t i = 0; i < geom.size(); ++i) bending += geom.k[i] * geom.k[i] * geom.ds_weight[i];
    EnergyReport r;
    r.bending = {bending};
    r.weighted_length = {mu * geom.length};
    r.total = bending + mu * geom.length;
    return r;
}

EnergyReport elastic_energy(const SampledCurve& curve, double mu) {
    return elastic_energy(compute_geometry(curve), mu);
}

std::vector<double> normal_velocity(const GeometryCache& geom, double mu) {
    const std::vector<double> kss = curvature_derivative(geom, 2);
    std::vector<double> v(geom.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double k = geom.k[i];
        v[i] = -2.0 * kss[i] - k * k * k + mu * k;
    }
    return v;
}

std::vector<double> normal_velocity(const SampledCurve& curve, double mu) {
    return normal_velocity(compute_geometry(curve), mu);
}

std::vector<double> special_tangential_velocity(const GeometryCache& geom, double mu) {
    std::vector<double> t(geom.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Vec2& g1 = geom.dx1[i];
        const Vec2& g2 = geom.dx2[i];
        const Vec2& g3 = geom.dx3[i];
        const Vec2& g4 = geom.dx4[i];
        const Vec2& tau = geom.tau[i];
        const double s2 = geom.speed[i] * geom.speed[i];
        const double s4 = s2 * s2;
        const double s6 = s4 * s2;
        const double s8 = s4 * s4;
        const double g21 = dot(g2, g1);
        const double g2t = dot(g2, tau);
        t[i] = -2.0 * dot(g4, tau) / s4
             + 12.0 * dot(g3, tau) * g21 / s6
             + 5.0 * g2t * norm2(g2) / s6
             + 8.0 * g2t * dot(g3, g1) / s6
             - 35.0 * g2t * g21 * g21 / s8
             + mu * g2t / s2;
    }
    return t;
}

std::vector<double> special_tangential_velocity(const SampledCurve& curve, double mu) {
    return special_tangential_velocity(compute_geometry(curve), mu);
}

VelocityField special_flow_rhs(const GeometryCache& geom, double mu) {
    VelocityField f;
    const std::size_t n = geom.size();
    f.full.resize(n);
    f.V.resize(n);
    f.T_bar.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& g1 = geom.dx1[i];
        const Vec2& g2 = geom.dx2[i];
        const Vec2& g3 = geom.dx3[i];
        const Vec2& g4 = geom.dx4[i];
        const double s2 = geom.speed[i] * geom.speed[i];
        const double s4 = s2 * s2;
        const double s6 = s4 * s2;
        const double s8 = s4 * s4;
        const double g21 = dot(g2, g1);
        const Vec2 v = g4 * (-2.0 / s4)
                     + g3 * (12.0 * g21 / s6)
                     + g2 * (5.0 * norm2(g2) / s6 + 8.0 * dot(g3, g1) / s6 - 35.0 * g21 * g21 / s8 + mu / s2);
        f.full[i] = v;
        f.V[i] = dot(v, geom.nu[i]);
        f.T_bar[i] = dot(v, geom.tau[i]);
    }
    return f;
}

VelocityField special_flow_rhs(const SampledCurve& curve, double mu) {
    return special_flow_rhs(compute_geometry(curve), mu);
}

std::vector<double> default_eps_sweep() {
    std::vector<double> eps;
    for (double e = 1e-3; e >= 0.99e-7; e /= std::sqrt(10.0)) eps.push_back(e);
    return eps;
}

GradientCheckResult gradient_check(const SampledCurve& curve, double mu, std::span<const double> probe,
                                   std::span<const double> eps_sweep) {
    if (probe.size() != curve.size()) {
        throw GridMismatch("probe has " + std::to_string(probe.size()) + " samples, curve has " +
                           std::to_string(curve.size()));
    }
    if (eps_sweep.empty()) throw BadParams("empty eps sweep");
    const GeometryCache geom = compute_geometry(curve);
    const std::vector<double> v = normal_velocity(geom, mu);
    double fv = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) fv += -v[i] * probe[i] * geom.ds_weight[i];

    auto energy_at = [&](double eps) {
        std::vector<Vec2> pts(curve.points().begin(), curve.points().end());
        for (std::size_t i = 0; i < pts.size(); ++i) pts[i] += geom.nu[i] * (eps * probe[i]);
        return elastic_energy(curve.with_points(std::move(pts)), mu).total;
    };

    GradientCheckResult best;
    best.relative_error = std::numeric_limits<double>::infinity();
    best.first_variation = fv;
    const double denom = std::max(1.0, std::abs(fv));
    for (double eps : eps_sweep) {
        const double fd = (energy_at(eps) - energy_at(-eps)) / (2.0 * eps);
        const double err = std::abs(fd - fv) / denom;
        if (err < best.relative_error) {
            best.relative_error = err;
            best.best_eps = eps;
            best.finite_difference = fd;
        }
    }
    return best;
}

GradientCheckResult gradient_check(const SampledCurve& curve, double mu, std::span<const double> probe) {
    const std::vector<double> sweep = default_eps_sweep();
    return gradient_check(curve, mu, probe, sweep);
}

}  // namespace elastica
