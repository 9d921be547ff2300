#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "elastica/network.hpp"
#include "elastica/network_io.hpp"
#include "elastica/shapes.hpp"
#include "helpers.hpp"

using namespace elastica;
using test::pi;

namespace {

std::vector<Vec2> normals_at(std::initializer_list<double> tangent_angles) {
    std::vector<Vec2> nu;
    for (double a : tangent_angles) nu.push_back(rot90(Vec2{std::cos(a), std::sin(a)}));
    return nu;
}

NetworkSpec navier_segment() {
    NetworkSpec spec = NetworkSpec::single(SampledCurve(test::segment_points(33), false), 1.0);
    spec.endpoints = {{0, CurveEnd::start, NavierEndpoint{{0, 0}}}, {0, CurveEnd::end, NavierEndpoint{{1, 0}}}};
    return spec;
}

}  // namespace

TEST_CASE("junction tangential solve") {
    const auto nu = normals_at({0.0, 2 * pi / 3, 4 * pi / 3});
    SUBCASE("symmetric triple junction determinant") {
        CHECK(junction_determinant(nu) == doctest::Approx(9.0 / 8.0));
    }
    SUBCASE("zero data gives zero speeds") {
        for (double t : junction_tangential_solve(nu, std::vector<double>{0, 0, 0})) CHECK(t == 0.0);
    }
    SUBCASE("matches a dense oracle and reconstructs one velocity") {
        const std::vector<double> V{1.0, 0.0, 0.0};
        const auto T = junction_tangential_solve(nu, V);
        Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
        Eigen::Vector3d b;
        for (int j = 0; j < 3; ++j) {
            const int n = (j + 1) % 3;
            const Vec2 tj = rot270(nu[j]), tn = rot270(nu[n]);
            A(j, j) = 1.0;
            A(j, n) = -dot(tj, tn);
            b(j) = dot(nu[n], tj) * V[n];
        }
        const Eigen::Vector3d x = A.fullPivLu().solve(b);
        for (int j = 0; j < 3; ++j) CHECK(std::abs(T[j] - x(j)) < 1e-12);
        // V = (1, 0, 0) has no common velocity; each consecutive pair agrees along tau_j.
        for (int j = 0; j < 3; ++j) {
            const int n = (j + 1) % 3;
            const Vec2 vj = V[j] * nu[j] + T[j] * rot270(nu[j]);
            const Vec2 vn = V[n] * nu[n] + T[n] * rot270(nu[n]);
            CHECK(std::abs(dot(vj - vn, rot270(nu[j]))) < 1e-12);
        }
    }
    SUBCASE("common velocity is recovered") {
        const Vec2 w{0.3, -0.7};
        std::vector<double> V;
        for (const Vec2& n : nu) V.push_back(dot(w, n));
        const auto T = junction_tangential_solve(nu, V);
        for (std::size_t j = 0; j < 3; ++j) CHECK(norm(V[j] * nu[j] + T[j] * rot270(nu[j]) - w) < 1e-12);
    }
    SUBCASE("all tangent curves are degenerate") {
        const auto flat = normals_at({0.0, 0.0, pi});
        CHECK(junction_determinant(flat) == doctest::Approx(0.0).scale(1.0));
        CHECK_THROWS_AS((void)junction_tangential_solve(flat, std::vector<double>{1, 1, 1}), DegenerateJunction);
    }
}

TEST_CASE("nondegeneracy measure") {
    auto tangents = [](std::initializer_list<double> angles) {
        std::vector<Vec2> t;
        for (double a : angles) t.push_back({std::cos(a), std::sin(a)});
        return t;
    };
    CHECK(nondegeneracy_measure(tangents({0.0, 2 * pi / 3, 4 * pi / 3})) == doctest::Approx(std::sqrt(3.0) / 2));
    CHECK(nondegeneracy_measure(tangents({0.0, pi})) == doctest::Approx(0.0).scale(1.0));
    CHECK(nondegeneracy_measure(tangents({0.0, pi / 2, pi})) == doctest::Approx(1.0));
}

TEST_CASE("structure checks") {
    NetworkSpec spec = navier_segment();
    spec.mu = {1.0, 2.0};
    CHECK_THROWS_AS(check_structure(spec), InvalidNetwork);
    spec = navier_segment();
    spec.endpoints.pop_back();
    CHECK_THROWS_AS(check_structure(spec), InvalidNetwork);
    spec = navier_segment();
    spec.mu = {-1.0};
    CHECK_THROWS_AS(check_structure(spec), InvalidNetwork);
}

TEST_CASE("validate_admissible") {
    SUBCASE("closed circle has nothing to check") {
        CHECK(validate_admissible(NetworkSpec::single(test::circle(64), 1.0)).passed());
    }
    SUBCASE("straight Navier segment") {
        CHECK(validate_admissible(navier_segment()).passed());
    }
    SUBCASE("theta with a gap fails on concurrency") {
        NetworkSpec spec = make_shape("theta");
        std::vector<Vec2> chord(spec.curves[0].points().begin(), spec.curves[0].points().end());
        for (Vec2& p : chord) p.y += 0.1;
        spec.curves[0] = spec.curves[0].with_points(chord);
        const ValidationReport r = validate_admissible(spec);
        CHECK_FALSE(r.passed());
        bool found = false;
        for (const auto& e : r.failures()) {
            if (e.condition == Condition::concurrency) {
                found = true;
                CHECK(e.residual == doctest::Approx(0.1).epsilon(1e-9));
            }
        }
        CHECK(found);
    }
    SUBCASE("bundled theta and triod are admissible") {
        CHECK(validate_admissible(make_shape("theta")).passed());
        CHECK(validate_admissible(make_shape("triod")).passed());
    }
}

TEST_CASE("boundary residuals") {
    CHECK(boundary_residuals(NetworkSpec::single(test::circle(64), 1.0)).empty());
    for (const auto& e : boundary_residuals(navier_segment())) CHECK(e.value < 1e-10);
    const NetworkSpec theta = make_shape("theta");
    for (const auto& e : boundary_residuals(theta)) {
        if (e.condition == Condition::concurrency) CHECK(e.value < 1e-10);
    }
}

TEST_CASE("network json round trip") {
    const NetworkSpec spec = make_shape("triod", ShapeParams{{{"n", 17}}, {}});
    const NetworkSpec back = network_from_json(network_to_json(spec));
    REQUIRE(back.size() == spec.size());
    for (std::size_t c = 0; c < spec.size(); ++c) {
        for (std::size_t i = 0; i < spec.curves[c].size(); ++i) CHECK(back.curves[c][i] == spec.curves[c][i]);
    }
    CHECK(back.junctions.size() == 1);
    CHECK(back.endpoints.size() == 3);
    CHECK(back.mu == spec.mu);
    CHECK_THROWS_AS((void)network_from_json("{not json"), ConfigError);
    CHECK_THROWS_AS((void)network_from_json(R"({"curves": [{"closed": true, "points": [[0,0],[1,0]]}]})"), TooFewNodes);
}
