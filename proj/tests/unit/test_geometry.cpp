#include <cmath>
#include <vector>

#include "doctest.h"
#include "elastica/finite_difference.hpp"
#include "elastica/geometry.hpp"
#include "helpers.hpp"

using namespace elastica;
using test::pi;

TEST_CASE("fd_weights reproduce classical stencils") {
    const std::vector<double> centered{-1.0, 0.0, 1.0};
    const auto d2 = fd_weights(centered, 2);
    CHECK(d2[0] == doctest::Approx(1.0));
    CHECK(d2[1] == doctest::Approx(-2.0));
    CHECK(d2[2] == doctest::Approx(1.0));
    const std::vector<double> forward{0.0, 1.0, 2.0};
    const auto d1 = fd_weights(forward, 1);
    CHECK(d1[0] == doctest::Approx(-1.5));
    CHECK(d1[1] == doctest::Approx(2.0));
    CHECK(d1[2] == doctest::Approx(-0.5));
    CHECK_THROWS_AS((void)fd_weights(centered, 3), BadParams);
}

TEST_CASE("one-sided stencils are exact for low-degree polynomials") {
    const std::size_t n = 21;
    const double h = 1.0 / (n - 1);
    for (int order = 1; order <= 4; ++order) {
        for (std::size_t i : {std::size_t{0}, std::size_t{1}, n - 2, n - 1}) {
            const Stencil s = node_stencil(i, n, false, h, order);
            if (s.indices.size() <= 5) continue;  // centered, second order only
            // f(x) = x^4, f^(order) at x_i.
            double acc = 0.0;
            for (std::size_t k = 0; k < s.indices.size(); ++k) acc += s.weights[k] * std::pow(s.indices[k] * h, 4);
            const double x = i * h;
            const double exact = order == 1 ? 4 * x * x * x : order == 2 ? 12 * x * x : order == 3 ? 24 * x : 24.0;
            CHECK(acc == doctest::Approx(exact).epsilon(1e-6).scale(1.0));
        }
    }
}

TEST_CASE("build_curve preconditions") {
    SUBCASE("unit circle is valid with length 2 pi") {
        const SampledCurve c = build_curve(test::circle_points(128), true);
        CHECK(compute_geometry(c).length == doctest::Approx(2 * pi).epsilon(1e-3));
    }
    SUBCASE("two points are too few") {
        CHECK_THROWS_AS((void)build_curve({{0, 0}, {1, 0}}, false), TooFewNodes);
    }
    SUBCASE("coincident points are degenerate") {
        CHECK_THROWS_AS((void)build_curve(std::vector<Vec2>(64, Vec2{}), true), DegenerateCurve);
    }
}

TEST_CASE("spatial derivatives") {
    SUBCASE("circle second derivative is -4 pi^2 gamma") {
        const std::size_t n = 256;
        const SampledCurve c = test::circle(n);
        const auto d2 = spatial_derivatives(c, 2);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) err = std::max(err, norm(d2[i] + 4 * pi * pi * c[i]));
        const double h = 1.0 / n;
        CHECK(err < 4 * pi * pi * std::pow(2 * pi, 2) * h * h);
    }
    SUBCASE("affine segment has zero second derivative") {
        const SampledCurve c(test::segment_points(33), false);
        const auto d2 = spatial_derivatives(c, 2);
        for (std::size_t i = 1; i + 1 < c.size(); ++i) CHECK(norm(d2[i]) < 1e-12);
    }
    SUBCASE("cubic (x, x^3) has constant third derivative (0, 6)") {
        const std::size_t n = 41;
        std::vector<Vec2> p(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = static_cast<double>(i) / (n - 1);
            p[i] = {x, x * x * x};
        }
        const auto d3 = spatial_derivatives(SampledCurve(p, false), 3);
        for (std::size_t i = 2; i + 2 < n; ++i) {
            CHECK(std::abs(d3[i].x) < 1e-10);
            CHECK(d3[i].y == doctest::Approx(6.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("curvature of circles") {
    const std::size_t n = 256;
    const double h2 = std::pow(2 * pi / n, 2);
    CHECK(test::max_abs(compute_geometry(test::circle(n)).k, 1.0) < h2);
    CHECK(test::max_abs(compute_geometry(test::circle(n, 1.0, -1)).k, -1.0) < h2);
    const GeometryCache g2 = compute_geometry(test::circle(n, 2.0));
    CHECK(test::max_abs(g2.k, 0.5) < h2);
    CHECK(g2.length == doctest::Approx(4 * pi).epsilon(1e-4));
    for (std::size_t i = 0; i < n; ++i) CHECK(norm(g2.nu[i] - rot90(g2.tau[i])) < 1e-15);
}

TEST_CASE("arclength derivatives") {
    const std::size_t n = 256;
    const SampledCurve c = test::circle(n);
    const GeometryCache g = compute_geometry(c);
    SUBCASE("constant field") {
        const std::vector<double> f(n, 3.0);
        CHECK(test::max_abs(arclength_derivative(f, g, 1)) < 1e-12);
        CHECK(test::max_abs(arclength_derivative(f, g, 2)) < 1e-12);
    }
    SUBCASE("curvature of a circle is constant along arclength") {
        CHECK(test::max_abs(arclength_derivative(g.k, g, 1)) < 1e-3);
    }
    SUBCASE("sin(2 pi x) against the analytic value") {
        std::vector<double> f(n), exact(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = static_cast<double>(i) / n;
            f[i] = std::sin(2 * pi * x);
            exact[i] = std::cos(2 * pi * x) * 2 * pi / g.speed[i];
        }
        const auto d = arclength_derivative(f, g, 1);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(d[i] - exact[i]));
        CHECK(err < 1e-3);
    }
    SUBCASE("grid mismatch") {
        const std::vector<double> f(n - 1, 0.0);
        CHECK_THROWS_AS((void)arclength_derivative(f, g, 1), GridMismatch);
    }
}

TEST_CASE("curvature derivative near open ends matches the analytic profile") {
    // Arc of the unit circle: k = 1 and all its derivatives vanish.
    const std::size_t n = 65;
    std::vector<Vec2> p(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = pi * static_cast<double>(i) / (n - 1);
        p[i] = {std::cos(a), std::sin(a)};
    }
    const GeometryCache g = compute_geometry(SampledCurve(p, false));
    CHECK(test::max_abs(curvature_derivative(g, 1)) < 1e-4);
    CHECK(test::max_abs(curvature_derivative(g, 2)) < 1e-3);
}

TEST_CASE("reparametrize_constant_speed") {
    SUBCASE("equispaced circle is a fixed point") {
        const SampledCurve c = test::circle(128);
        const SampledCurve r = reparametrize_constant_speed(c);
        for (std::size_t i = 0; i < c.size(); ++i) CHECK(norm(r[i] - c[i]) < 1e-10);
    }
    SUBCASE("clustered circle becomes uniform") {
        const std::size_t n = 256;
        std::vector<Vec2> p(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = static_cast<double>(i) / n;
            const double th = 2 * pi * x + 0.3 * std::sin(2 * pi * x);
            p[i] = {std::cos(th), std::sin(th)};
        }
        const SampledCurve r = reparametrize_constant_speed(SampledCurve(p, true));
        double lo = 1e9, hi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = norm(r[(i + 1) % n] - r[i]);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        CHECK((hi - lo) / lo < 1e-3);
    }
    SUBCASE("clustered segment keeps its endpoints and becomes uniform") {
        const std::size_t n = 33;
        std::vector<Vec2> p(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = static_cast<double>(i) / (n - 1);
            p[i] = {x * x * (3 - 2 * x) * 0.5 + 0.5 * x, 0.0};
        }
        const SampledCurve c(p, false);
        const SampledCurve r = reparametrize_constant_speed(c);
        CHECK(r.front() == c.front());
        CHECK(r.back() == c.back());
        for (std::size_t i = 0; i < n; ++i) CHECK(r[i].x == doctest::Approx(static_cast<double>(i) / (n - 1)).epsilon(1e-10));
    }
}
