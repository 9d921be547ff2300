#include "elastica/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "elastica/finite_difference.hpp"

namespace elastica {

namespace {

double grid_step(std::size_t n, bool closed) {
    return closed ? 1.0 / static_cast<double>(n) : 1.0 / static_cast<double>(n - 1);
}

std::vector<double> speeds_of(std::span<const Vec2> pts, bool closed, double h) {
    const std::vector<Vec2> d1 = differentiate<Vec2>(pts, closed, h, 1);
    std::vector<double> s(d1.size());
    std::transform(d1.begin(), d1.end(), s.begin(), [](const Vec2& v) { return norm(v); });
    return s;
}

std::vector<double> quadrature_weights(std::span<const double> speed, bool closed, double h) {
    std::vector<double> w(speed.size());
    for (std::size_t i = 0; i < speed.size(); ++i) w[i] = h * speed[i];
    if (!closed) {
        w.front() *= 0.5;
        w.back() *= 0.5;
    }
    return w;
}

// Piecewise degree-7 Lagrange interpolant of a scalar sequence on integer
// knots: segment [i, i + 1] uses the eight knots around it (shifted inward at
// open ends). Periodic sequences span t in [0, n), open ones [0, n - 1].
// The high degree keeps fourth differences of resampled points smooth.
class LocalInterpolant {
public:
    LocalInterpolant(std::vector<double> values, bool periodic)
        : f_(std::move(values)), periodic_(periodic), width_(std::min<std::size_t>(8, f_.size())) {}

    [[nodiscard]] std::size_t segments() const noexcept { return periodic_ ? f_.size() : f_.size() - 1; }

    [[nodiscard]] double value(double t) const noexcept { return eval(t, false); }
    [[nodiscard]] double derivative(double t) const noexcept { return eval(t, true); }

private:
    [[nodiscard]] double eval(double t, bool derivative) const noexcept {
        const auto segs = static_cast<double>(segments());
        t = std::clamp(t, 0.0, segs);
        auto i = static_cast<std::size_t>(std::floor(t));
        if (i >= segments()) i = segments() - 1;
        const long n = static_cast<long>(f_.size());
        const long w = static_cast<long>(width_);
        long first = static_cast<long>(i) - (w / 2 - 1);
        if (!periodic_) first = std::clamp(first, 0L, n - w);
        const double u = t - static_cast<double>(first);

        double out = 0.0;
        for (long k = 0; k < w; ++k) {
            const double fk = f_[static_cast<std::size_t>(((first + k) % n + n) % n)];
            double denom = 1.0;
            for (long m = 0; m < w; ++m) {
                if (m != k) denom *= static_cast<double>(k - m);
            }
            double basis = 0.0;
            if (!derivative) {
                basis = 1.0;
                for (long m = 0; m < w; ++m) {
                    if (m != k) basis *= u - static_cast<double>(m);
                }
            } else {
                for (long j = 0; j < w; ++j) {
                    if (j == k) continue;
                    double prod = 1.0;
                    for (long m = 0; m < w; ++m) {
                        if (m != k && m != j) prod *= u - static_cast<double>(m);
                    }
                    basis += prod;
                }
            }
            out += fk * basis / denom;
        }
        return out;
    }

    std::vector<double> f_;
    bool periodic_;
    std::size_t width_;
};

// 8-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 8> kGaussNodes{0.019855071751231912, 0.10166676129318664, 0.2372337950418355, 0.4082826787521751, 0.5917173212478248, 0.7627662049581645, 0.8983332387068134, 0.9801449282487681};
constexpr std::array<double, 8> kGaussWeights{0.050614268145188344, 0.11119051722668717, 0.15685332293894352, 0.18134189168918088, 0.18134189168918088, 0.15685332293894352, 0.11119051722668717, 0.050614268145188344};

struct PlanarInterpolant {
    LocalInterpolant x;
    LocalInterpolant y;

    [[nodiscard]] Vec2 value(double t) const { return {x.value(t), y.value(t)}; }
    [[nodiscard]] double speed(double t) const { return std::hypot(x.derivative(t), y.derivative(t)); }

    [[nodiscard]] double arc(double a, double b) const {
        double s = 0.0;
        for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
            s += kGaussWeights[q] * speed(a + (b - a) * kGaussNodes[q]);
        }
        return s * (b - a);
    }
};

}  // namespace

SampledCurve::SampledCurve(std::vector<Vec2> points, bool closed, double eps_reg)
    : points_(std::move(points)), closed_(closed), h_(0.0), eps_reg_(eps_reg) {
    const std::size_t n = points_.size();
    const std::size_t min_nodes = closed_ ? kMinClosedNodes : kMinOpenNodes;
    if (n < min_nodes) {
        throw TooFewNodes("got " + std::to_string(n) + " nodes, need at least " + std::to_string(min_nodes));
    }
    for (const Vec2& p : points_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw DegenerateCurve("non-finite sample");
    }
    const std::size_t pairs = closed_ ? n : n - 1;
    for (std::size_t i = 0; i < pairs; ++i) {
        if (points_[i] == points_[(i + 1) % n]) {
            throw DegenerateCurve("consecutive samples " + std::to_string(i) + " and " +
                                  std::to_string((i + 1) % n) + " coincide");
        }
    }
    h_ = grid_step(n, closed_);
    const std::vector<double> speed = speeds_of(points_, closed_, h_);
    const std::vector<double> w = quadrature_weights(speed, closed_, h_);
    double length = 0.0;
    for (double v : w) length += v;
    const double min_speed = *std::min_element(speed.begin(), speed.end());
    if (!(length > 0.0) || min_speed < eps_reg_ * length) {
        throw DegenerateCurve("min |dx gamma| = " + std::to_string(min_speed) + " below " +
                              std::to_string(eps_reg_) + " * length");
    }
}

SampledCurve SampledCurve::with_points(std::vector<Vec2> points) const {
    return SampledCurve(std::move(points), closed_, eps_reg_);
}

SampledCurve build_curve(std::vector<Vec2> points, bool closed, double eps_reg) {
    return SampledCurve(std::move(points), closed, eps_reg);
}

std::vector<Vec2> spatial_derivatives(const SampledCurve& curve, int order) {
    if (order < 1 || order > 4) throw BadParams("spatial derivative order must be 1..4");
    return differentiate<Vec2>(curve.points(), curve.closed(), curve.param_step(), order);
}

GeometryCache compute_geometry(const SampledCurve& curve) {
    GeometryCache g;
    g.closed = curve.closed();
    g.h = curve.param_step();
    g.dx1 = spatial_derivatives(curve, 1);
    g.dx2 = spatial_derivatives(curve, 2);
    g.dx3 = spatial_derivatives(curve, 3);
    g.dx4 = spatial_derivatives(curve, 4);
    const std::size_t n = curve.size();
    g.speed.resize(n);
    g.tau.resize(n);
    g.nu.resize(n);
    g.k.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.speed[i] = norm(g.dx1[i]);
    g.ds_weight = quadrature_weights(g.speed, g.closed, g.h);
    g.length = 0.0;
    for (double w : g.ds_weight) g.length += w;
    const double threshold = curve.regularity_eps() * g.length;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(g.speed[i] >= threshold) || g.speed[i] == 0.0) {
            throw DegenerateCurve("|dx gamma| under threshold at node " + std::to_string(i));
        }
        g.tau[i] = g.dx1[i] / g.speed[i];
        g.nu[i] = rot90(g.tau[i]);
        g.k[i] = dot(g.dx2[i], g.nu[i]) / (g.speed[i] * g.speed[i]);
    }
    return g;
}

namespace {

template <class T>
std::vector<T> arclength_derivative_impl(std::span<const T> field, const GeometryCache& geom, int order) {
    const std::size_t n = geom.size();
    if (field.size() != n) {
        throw GridMismatch("field has " + std::to_string(field.size()) + " samples, curve has " +
                           std::to_string(n));
    }
    if (order < 1 || order > 2) throw BadParams("arclength derivative order must be 1 or 2");
    const std::vector<T> d1 = differentiate<T>(field, geom.closed, geom.h, 1);
    std::vector<T> out(n);
    if (order == 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = d1[i] * (1.0 / geom.speed[i]);
        return out;
    }
    const std::vector<T> d2 = differentiate<T>(field, geom.closed, geom.h, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double s2 = geom.speed[i] * geom.speed[i];
        out[i] = d2[i] * (1.0 / s2) - d1[i] * (dot(geom.dx2[i], geom.dx1[i]) / (s2 * s2));
    }
    return out;
}

}  // namespace

std::vector<double> arclength_derivative(std::span<const double> field, const GeometryCache& geom, int order) {
    return arclength_derivative_impl<double>(field, geom, order);
}

std::vector<Vec2> arclength_derivative(std::span<const Vec2> field, const GeometryCache& geom, int order) {
    return arclength_derivative_impl<Vec2>(field, geom, order);
}

std::vector<double> arclength_derivative(std::span<const double> field, const SampledCurve& curve, int order) {
    if (field.size() != curve.size()) {
        throw GridMismatch("field has " + std::to_string(field.size()) + " samples, curve has " +
                           std::to_string(curve.size()));
    }
    return arclength_derivative(field, compute_geometry(curve), order);
}

std::vector<double> curvature_derivative(const GeometryCache& geom, int order) {
    std::vector<double> out = arclength_derivative(std::span<const double>(geom.k), geom, order);
    const std::size_t n = geom.size();
    if (geom.closed) return out;
    constexpr std::size_t band = 2;
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= band && i + band < n) continue;
        const Vec2& g1 = geom.dx1[i];
        const Vec2& g2 = geom.dx2[i];
        const Vec2& g3 = geom.dx3[i];
        const Vec2& g4 = geom.dx4[i];
        const double u = geom.speed[i];
        const double u2 = u * u;
        const double u3 = u2 * u;
        const double u5 = u3 * u2;
        const double c12 = cross(g1, g2);
        const double c13 = cross(g1, g3);
        const double a = dot(g1, g2);
        const double b = norm2(g2) + dot(g1, g3);
        const double kx = c13 / u3 - 3.0 * c12 * a / u5;
        if (order == 1) {
            out[i] = kx / u;
            continue;
        }
        const double kxx = (cross(g2, g3) + cross(g1, g4)) / u3 - 3.0 * (2.0 * c13 * a + c12 * b) / u5 +
                           15.0 * c12 * a * a / (u5 * u2);
        out[i] = kxx / u2 - kx * a / (u2 * u2);
    }
    return out;
}

SampledCurve reparametrize_constant_speed(const SampledCurve& curve) {
    const std::size_t n = curve.size();
    const bool closed = curve.closed();
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = curve[i].x;
        ys[i] = curve[i].y;
    }
    const PlanarInterpolant spline{LocalInterpolant(std::move(xs), closed), LocalInterpolant(std::move(ys), closed)};
    const std::size_t segs = spline.x.segments();

    std::vector<double> cumulative(segs + 1, 0.0);
    for (std::size_t i = 0; i < segs; ++i) {
        cumulative[i + 1] = cumulative[i] + spline.arc(static_cast<double>(i), static_cast<double>(i + 1));
    }
    const double total = cumulative.back();
    if (!(total > 0.0)) throw DegenerateCurve("zero-length interpolant");

    const std::size_t targets = closed ? n : n - 1;
    std::vector<Vec2> out(n);
    out[0] = curve[0];
    if (!closed) out[n - 1] = curve[n - 1];
    std::size_t seg = 0;
    for (std::size_t j = 1; j < targets; ++j) {
        const double target = total * static_cast<double>(j) / static_cast<double>(targets);
        while (seg + 1 < segs && cumulative[seg + 1] < target) ++seg;
        // Safeguarded Newton on s(t) = target within [seg, seg + 1].
        double lo = static_cast<double>(seg);
        double hi = lo + 1.0;
        const double seg_len = cumulative[seg + 1] - cumulative[seg];
        double t = lo + (seg_len > 0.0 ? (target - cumulative[seg]) / seg_len : 0.5);
        for (int it = 0; it < 60; ++it) {
            const double f = cumulative[seg] + spline.arc(static_cast<double>(seg), t) - target;
            if (std::abs(f) <= 1e-15 * total) break;
            if (f > 0.0) hi = t; else lo = t;
            const double d = spline.speed(t);
            double next = (d > 0.0) ? t - f / d : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            t = next;
        }
        out[j] = spline.value(t);
    }
    return curve.with_points(std::move(out));
}

double bounding_diameter(std::span<const Vec2> points) noexcept {
    if (points.empty()) return 0.0;
    Vec2 lo = points[0];
    Vec2 hi = points[0];
    for (const Vec2& p : points) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    return norm(hi - lo);
}

}  // namespace elastica
