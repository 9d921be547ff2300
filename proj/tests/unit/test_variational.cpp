#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "elastica/variational.hpp"
#include "helpers.hpp"

using namespace elastica;
using test::pi;

namespace {

// Ellipse energy by composite Simpson on the closed-form curvature,
// k = ab / (a^2 sin^2 t + b^2 cos^2 t)^{3/2}, ds = sqrt(a^2 sin^2 t + b^2 cos^2 t) dt.
double ellipse_energy_oracle(double a, double b, double mu) {
    const int m = 200000;
    const double h = 2 * pi / m;
    double sum = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double t = i * h;
        const double q = a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t);
        const double speed = std::sqrt(q);
        const double k = a * b / (q * speed);
        const double f = (k * k + mu) * speed;
        const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += w * f;
    }
    return sum * h / 3.0;
}

}  // namespace

TEST_CASE("elastic energy") {
    SUBCASE("unit circle") {
        const EnergyReport e = elastic_energy(test::circle(256), 1.0);
        CHECK(e.bending_total() == doctest::Approx(2 * pi).epsilon(1e-3));
        CHECK(e.weighted_length_total() == doctest::Approx(2 * pi).epsilon(1e-3));
        CHECK(e.total == doctest::Approx(4 * pi).epsilon(1e-3));
    }
    SUBCASE("radius 2 without length penalty") {
        // k = 1/2 on length 4 pi.
        CHECK(elastic_energy(test::circle(256, 2.0), 0.0).total == doctest::Approx(pi).epsilon(1e-3));
    }
    SUBCASE("ellipse against quadrature") {
        const std::size_t n = 512;
        std::vector<Vec2> p(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = 2 * pi * static_cast<double>(i) / n;
            p[i] = {2 * std::cos(t), std::sin(t)};
        }
        const double oracle = ellipse_energy_oracle(2.0, 1.0, 1.0);
        CHECK(elastic_energy(SampledCurve(p, true), 1.0).total == doctest::Approx(oracle).epsilon(1e-3));
    }
}

TEST_CASE("normal velocity of circles") {
    const std::size_t n = 256;
    CHECK(test::max_abs(normal_velocity(test::circle(n), 1.0)) < 1e-3);
    CHECK(test::max_abs(normal_velocity(test::circle(n, 2.0), 1.0), 0.375) < 1e-3);
    CHECK(test::max_abs(normal_velocity(test::circle(n, 0.5), 1.0), -6.0) < 1e-2);
}

TEST_CASE("special tangential velocity") {
    CHECK(test::max_abs(special_tangential_velocity(test::circle(256), 1.0)) < 1e-6);
    const SampledCurve seg(test::segment_points(33), false);
    CHECK(test::max_abs(special_tangential_velocity(seg, 1.0)) < 1e-10);
}

TEST_CASE("special flow right-hand side") {
    SUBCASE("unit circle is stationary") {
        const VelocityField f = special_flow_rhs(test::circle(256), 1.0);
        double m = 0.0;
        for (const Vec2& v : f.full) m = std::max(m, norm(v));
        CHECK(m < 1e-3);
    }
    SUBCASE("radius 2 normal component") {
        CHECK(test::max_abs(special_flow_rhs(test::circle(256, 2.0), 1.0).V, 0.375) < 1e-3);
    }
    SUBCASE("normal component agrees with the intrinsic velocity on perturbed circles") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int trial = 0; trial < 5; ++trial) {
            const std::size_t n = 512;
            const SampledCurve c = test::perturbed_circle(n, 0.05 * u(rng), 0.05 * u(rng), pi * u(rng));
            const auto rhs = special_flow_rhs(c, 1.0);
            const auto v = normal_velocity(c, 1.0);
            double diff = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                diff = std::max(diff, std::abs(rhs.V[i] - v[i]));
                scale = std::max(scale, std::abs(v[i]));
            }
            const double h = 1.0 / n;
            CHECK(diff / scale < 5 * std::pow(2 * pi, 2) * h * h);
        }
    }
}

TEST_CASE("gradient check") {
    SUBCASE("unit circle is critical") {
        const std::size_t n = 256;
        std::vector<double> probe(n);
        for (std::size_t i = 0; i < n; ++i) probe[i] = std::cos(3 * 2 * pi * i / n) + 0.5;
        const auto r = gradient_check(test::circle(n), 1.0, probe);
        CHECK(std::abs(r.first_variation) < 1e-3);
        CHECK(std::abs(r.finite_difference - r.first_variation) < 1e-6);
    }
    SUBCASE("radius 2 inflation") {
        const std::size_t n = 256;
        const std::vector<double> probe(n, 1.0);
        const auto r = gradient_check(test::circle(n, 2.0), 1.0, probe);
        CHECK(r.first_variation == doctest::Approx(-1.5 * pi).epsilon(1e-3));
        CHECK(r.finite_difference == doctest::Approx(-1.5 * pi).epsilon(1e-3));
    }
    SUBCASE("random perturbed circle") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const std::size_t n = 4096;
        const SampledCurve c = test::perturbed_circle(n, 0.05 * u(rng), 0.05 * u(rng), pi * u(rng));
        std::vector<double> probe(n);
        const double b1 = u(rng), b2 = u(rng);
        for (std::size_t i = 0; i < n; ++i) probe[i] = 0.1 * (1.0 + b1 * std::cos(2 * pi * i / n) + b2 * std::sin(4 * pi * i / n));
        CHECK(gradient_check(c, 1.0, probe).relative_error < 1e-5);
    }
}
