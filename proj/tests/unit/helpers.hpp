#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "elastica/geometry.hpp"

namespace test {

inline constexpr double pi = std::numbers::pi;

// Counterclockwise circle sampled at x_i = i/n (clockwise for cover < 0).
inline std::vector<elastica::Vec2> circle_points(std::size_t n, double r = 1.0, int cover = 1,
                                                 elastica::Vec2 c = {}) {
    std::vector<elastica::Vec2> p(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = 2.0 * pi * cover * static_cast<double>(i) / static_cast<double>(n);
        p[i] = c + elastica::Vec2{r * std::cos(th), r * std::sin(th)};
    }
    return p;
}

inline elastica::SampledCurve circle(std::size_t n, double r = 1.0, int cover = 1) {
    return elastica::SampledCurve(circle_points(n, r, cover), true);
}

inline std::vector<elastica::Vec2> segment_points(std::size_t n, elastica::Vec2 a = {0, 0}, elastica::Vec2 b = {1, 0}) {
    std::vector<elastica::Vec2> p(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n - 1);
        p[i] = a + (b - a) * x;
    }
    return p;
}

// Closed curve r(t) = 1 + a2 cos(2t + phase) + a3 cos 3t.
inline elastica::SampledCurve perturbed_circle(std::size_t n, double a2, double a3, double phase) {
    std::vector<elastica::Vec2> p(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = 2.0 * pi * static_cast<double>(i) / static_cast<double>(n);
        const double r = 1.0 + a2 * std::cos(2 * th + phase) + a3 * std::cos(3 * th);
        p[i] = {r * std::cos(th), r * std::sin(th)};
    }
    return elastica::SampledCurve(p, true);
}

inline double max_abs(const std::vector<double>& v, double target = 0.0) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x - target));
    return m;
}

}  // namespace test
