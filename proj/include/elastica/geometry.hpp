#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "elastica/errors.hpp"
#include "elastica/vec2.hpp"

namespace elastica {

inline constexpr std::size_t kMinClosedNodes = 8;
inline constexpr std::size_t kMinOpenNodes = 5;
inline constexpr double kDefaultRegularityEps = 1e-6;

// A planar curve sampled on a uniform parameter grid x in [0, 1].
//
// Closed curves use x_i = i/n and never store the wrap-around node; open
// curves use x_i = i/(n-1) with both endpoints present. Construction enforces
// the node-count minimum and the regularity bound
//     min_i |d/dx gamma(x_i)| >= eps_reg * length.
class SampledCurve {
public:
    SampledCurve(std::vector<Vec2> points, bool closed, double eps_reg = kDefaultRegularityEps);

    [[nodiscard]] std::span<const Vec2> points() const noexcept { return points_; }
    [[nodiscard]] const Vec2& operator[](std::size_t i) const noexcept { return points_[i]; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] bool closed() const noexcept { return closed_; }
    [[nodiscard]] double param_step() const noexcept { return h_; }
    [[nodiscard]] double regularity_eps() const noexcept { return eps_reg_; }
    [[nodiscard]] double parameter(std::size_t i) const noexcept { return static_cast<double>(i) * h_; }

    [[nodiscard]] const Vec2& front() const noexcept { return points_.front(); }
    [[nodiscard]] const Vec2& back() const noexcept { return points_.back(); }

    // Same grid type and regularity threshold, new positions.
    [[nodiscard]] SampledCurve with_points(std::vector<Vec2> points) const;

private:
    std::vector<Vec2> points_;
    bool closed_;
    double h_;
    double eps_reg_;
};

[[nodiscard]] SampledCurve build_curve(std::vector<Vec2> points, bool closed,
                                       double eps_reg = kDefaultRegularityEps);

// Parameter derivative d^order gamma / dx^order at every node (order 1..4).
[[nodiscard]] std::vector<Vec2> spatial_derivatives(const SampledCurve& curve, int order);

// Per-node differential geometry of a sampled curve.
struct GeometryCache {
    std::vector<Vec2> dx1, dx2, dx3, dx4;
    std::vector<double> speed;      // |dx1|
    std::vector<Vec2> tau;          // unit tangent
    std::vector<Vec2> nu;           // rot90(tau)
    std::vector<double> k;          // oriented curvature, kappa = k nu
    std::vector<double> ds_weight;  // arclength quadrature weights
    double length{};
    bool closed{};
    double h{};

    [[nodiscard]] std::size_t size() const noexcept { return k.size(); }
};

[[nodiscard]] GeometryCache compute_geometry(const SampledCurve& curve);

// d^order f / ds^order (order 1 or 2) using the curve's stencils.
// Order 2 is the chain rule of order 1 applied twice:
//   f_ss = f_xx / |g_x|^2 - <g_xx, g_x> f_x / |g_x|^4.
[[nodiscard]] std::vector<double> arclength_derivative(std::span<const double> field,
                                                       const GeometryCache& geom, int order);
[[nodiscard]] std::vector<Vec2> arclength_derivative(std::span<const Vec2> field,
                                                     const GeometryCache& geom, int order);
[[nodiscard]] std::vector<double> arclength_derivative(std::span<const double> field,
                                                       const SampledCurve& curve, int order);

// d^order k / ds^order (order 1 or 2). Interior nodes differentiate the nodal
// curvature; on open curves the two nodes next to each end use the closed form
// in dx1..dx4 instead, since the one-sided curvature values there carry a
// different truncation error that numerical differentiation would amplify.
[[nodiscard]] std::vector<double> curvature_derivative(const GeometryCache& geom, int order);

// Resamples the curve at equal arclength spacing along a piecewise degree-7
// interpolant (periodic for closed curves). Node count and the closed flag are
// preserved; open-curve endpoints are copied exactly.
[[nodiscard]] SampledCurve reparametrize_constant_speed(const SampledCurve& curve);

// Diagonal of the axis-aligned bounding box of all samples.
[[nodiscard]] double bounding_diameter(std::span<const Vec2> points) noexcept;

}  // namespace elastica
