#pragma once

#include <span>
#include <vector>

#include "elastica/geometry.hpp"

namespace elastica {

// Split of E_mu = sum_i ( int k_i^2 ds + mu_i * length_i ).
struct EnergyReport {
    std::vector<double> bending;          // per curve, 1/length
    std::vector<double> weighted_length;  // per curve, mu * length
    double total{};

    [[nodiscard]] double bending_total() const noexcept;
    [[nodiscard]] double weighted_length_total() const noexcept;

    // Appends another curve's (or network's) contributions.
    EnergyReport& operator+=(const EnergyReport& other);
};

[[nodiscard]] EnergyReport elastic_energy(const GeometryCache& geom, double mu);
[[nodiscard]] EnergyReport elastic_energy(const SampledCurve& curve, double mu);

// V = -2 k_ss - k^3 + mu k, from the intrinsic curvature field.
[[nodiscard]] std::vector<double> normal_velocity(const GeometryCache& geom, double mu);
[[nodiscard]] std::vector<double> normal_velocity(const SampledCurve& curve, double mu);

// Tangential speed of the special flow: the tangential projection of the
// lower-order parametric expansion of -V nu, with sign flipped, evaluated from
// the parameter derivatives dx1..dx4.
[[nodiscard]] std::vector<double> special_tangential_velocity(const GeometryCache& geom, double mu);
[[nodiscard]] std::vector<double> special_tangential_velocity(const SampledCurve& curve, double mu);

struct VelocityField {
    std::vector<double> V;      // <full, nu>
    std::vector<double> T_bar;  // <full, tau>
    std::vector<Vec2> full;
};

// Closed-form right-hand side of the special flow:
//   d_t gamma = -2 g4/|g1|^4 + 12 g3 <g2,g1>/|g1|^6 + 5 g2 |g2|^2/|g1|^6
//               + 8 g2 <g3,g1>/|g1|^6 - 35 g2 <g2,g1>^2/|g1|^8 + mu g2/|g1|^2
// with gj = d^j gamma / dx^j.
[[nodiscard]] VelocityField special_flow_rhs(const GeometryCache& geom, double mu);
[[nodiscard]] VelocityField special_flow_rhs(const SampledCurve& curve, double mu);

struct GradientCheckResult {
    double relative_error{};
    double best_eps{};
    double finite_difference{};  // [E(g + eps psi) - E(g - eps psi)] / (2 eps) at best_eps
    double first_variation{};    // int (-V) <psi, nu> ds
};

// Geometric sweep 1e-3 ... 1e-7 used by gradient_check.
[[nodiscard]] std::vector<double> default_eps_sweep();

// Compares central differences of the discrete energy in the direction
// psi = probe * nu against the first variation int (-V) probe ds. Returns the
// smallest |fd - fv| / max(1, |fv|) over the sweep.
[[nodiscard]] GradientCheckResult gradient_check(const SampledCurve& curve, double mu,
                                                 std::span<const double> probe,
                                                 std::span<const double> eps_sweep);
[[nodiscard]] GradientCheckResult gradient_check(const SampledCurve& curve, double mu,
                                                 std::span<const double> probe);

}  // namespace elastica
