#include "elastica/shapes.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace elastica {

namespace {

constexpr double kPi = std::numbers::pi;

double positive(const ShapeParams& p, const std::string& key, double fallback) {
    const double v = p.get(key, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) throw BadParams(key + " must be positive");
    return v;
}

double finite(const ShapeParams& p, const std::string& key, double fallback) {
    const double v = p.get(key, fallback);
    if (!std::isfinite(v)) throw BadParams(key + " must be finite");
    return v;
}

double mu_of(const ShapeParams& p) {
    const double mu = p.get("mu", 1.0);
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw BadParams("mu must be non-negative");
    return mu;
}

std::size_t nodes(const ShapeParams& p, std::size_t fallback, std::size_t minimum) {
    const std::size_t n = p.count("n", fallback);
    if (n < minimum) throw BadParams("n must be at least " + std::to_string(minimum));
    return n;
}

template <class F>
std::vector<Vec2> sample_closed(std::size_t n, F&& f) {
    std::vector<Vec2> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = f(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n));
    return pts;
}

template <class F>
std::vector<Vec2> sample_open(std::size_t n, F&& f) {
    std::vector<Vec2> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = f(static_cast<double>(i) / static_cast<double>(n - 1));
    return pts;
}

NetworkSpec fixed_ends(SampledCurve curve, double mu, const std::string& bc) {
    NetworkSpec spec = NetworkSpec::single(std::move(curve), mu);
    const SampledCurve& c = spec.curves[0];
    if (bc == "navier") {
        spec.endpoints.push_back({0, CurveEnd::start, NavierEndpoint{c.front()}});
        spec.endpoints.push_back({0, CurveEnd::end, NavierEndpoint{c.back()}});
    } else if (bc == "clamped") {
        const GeometryCache g = compute_geometry(c);
        spec.endpoints.push_back({0, CurveEnd::start, ClampedEndpoint{c.front(), g.tau.front()}});
        spec.endpoints.push_back({0, CurveEnd::end, ClampedEndpoint{c.back(), g.tau.back()}});
    } else {
        throw BadParams("bc must be navier or clamped, got " + bc);
    }
    check_structure(spec);
    return spec;
}

NetworkSpec circle(const ShapeParams& p) {
    const double r = positive(p, "r", 1.0);
    const Vec2 c{finite(p, "cx", 0.0), finite(p, "cy", 0.0)};
    const double cover = p.get("cover", 1.0);
    if (cover == 0.0 || std::round(cover) != cover) throw BadParams("cover must be a non-zero integer");
    const std::size_t n = nodes(p, 128, kMinClosedNodes);
    auto pts = sample_closed(n, [&](double t) { return c + Vec2{r * std::cos(cover * t), r * std::sin(cover * t)}; });
    return NetworkSpec::single(build_curve(std::move(pts), true), mu_of(p));
}

NetworkSpec ellipse(const ShapeParams& p) {
    const double a = positive(p, "a", 2.0);
    const double b = positive(p, "b", 1.0);
    const std::size_t n = nodes(p, 256, kMinClosedNodes);
    auto pts = sample_closed(n, [&](double t) { return Vec2{a * std::cos(t), b * std::sin(t)}; });
    return NetworkSpec::single(reparametrize_constant_speed(build_curve(std::move(pts), true)), mu_of(p));
}

NetworkSpec perturbed_circle(const ShapeParams& p) {
    const double r = positive(p, "r", 1.0);
    const double m = p.get("m", 3.0);
    const double eps = finite(p, "eps", 0.1);
    if (!(m >= 0.0) || std::round(m) != m) throw BadParams("m must be a non-negative integer");
    if (!(std::abs(eps) < 1.0)) throw BadParams("|eps| must be below 1");
    const std::size_t n = nodes(p, 256, kMinClosedNodes);
    auto pts = sample_closed(n, [&](double t) {
        const double rr = r * (1.0 + eps * std::cos(m * t));
        return Vec2{rr * std::cos(t), rr * std::sin(t)};
    });
    return NetworkSpec::single(reparametrize_constant_speed(build_curve(std::move(pts), true)), mu_of(p));
}

NetworkSpec lemniscate(const ShapeParams& p) {
    const double a = positive(p, "a", 1.0);
    const std::size_t n = nodes(p, 256, kMinClosedNodes);
    auto pts = sample_closed(n, [&](double t) {
        const double d = 1.0 + std::sin(t) * std::sin(t);
        return Vec2{a * std::cos(t) / d, a * std::sin(t) * std::cos(t) / d};
    });
    return NetworkSpec::single(reparametrize_constant_speed(build_curve(std::move(pts), true)), mu_of(p));
}

NetworkSpec segment(const ShapeParams& p) {
    const Vec2 P{finite(p, "px", 0.0), finite(p, "py", 0.0)};
    const Vec2 Q{finite(p, "qx", 1.0), finite(p, "qy", 0.0)};
    const double eps = finite(p, "eps", 0.0);
    if (norm(Q - P) == 0.0) throw BadParams("segment endpoints coincide");
    const Vec2 normal = rot90(Q - P) / norm(Q - P);
    const std::size_t n = nodes(p, 65, kMinOpenNodes);
    auto pts = sample_open(n, [&](double x) {
        const double s = std::sin(kPi * x);
        return P + (Q - P) * x + normal * (eps * s * s * s);
    });
    pts.front() = P;
    pts.back() = Q;
    return fixed_ends(build_curve(std::move(pts), false), mu_of(p), p.option("bc", "navier"));
}

NetworkSpec arc(const ShapeParams& p) {
    const double r = positive(p, "r", 1.0);
    const double span = positive(p, "span", kPi);
    if (!(span < 2.0 * kPi)) throw BadParams("span must be below 2 pi");
    const std::size_t n = nodes(p, 65, kMinOpenNodes);
    auto pts = sample_open(n, [&](double x) {
        const double t = -kPi / 2.0 - span / 2.0 + span * x;
        return Vec2{r * std::cos(t), r * std::sin(t) + r};
    });
    return fixed_ends(build_curve(std::move(pts), false), mu_of(p), p.option("bc", "clamped"));
}

// Integral of the C^3 step S(x) = x^4 (35 - 84 x + 70 x^2 - 20 x^3).
double smoothstep_integral(double x) {
    const double x5 = x * x * x * x * x;
    return x5 * (7.0 - 14.0 * x + 10.0 * x * x - 2.5 * x * x * x);
}

// Curvature profile of a theta arc: zero with three vanishing derivatives at
// both ends, one on [taper, 1 - taper].
struct TaperedProfile {
    double taper;

    [[nodiscard]] double total() const { return 1.0 - taper; }
    [[nodiscard]] double integral(double u) const {
        if (u <= taper) return taper * smoothstep_integral(u / taper);
        if (u <= 1.0 - taper) return 0.5 * taper + (u - taper);
        return total() - integral(1.0 - u);
    }
};

// Cell-wise 8-point Gauss-Legendre integration of (cos theta, sin theta).
std::vector<Vec2> integrate_direction(std::size_t n, double alpha, const TaperedProfile& prof) {
    static constexpr std::array<double, 8> xg = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                                 -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                                 0.7966664774136267,  0.9602898564975363};
    static constexpr std::array<double, 8> wg = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                                 0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                                 0.2223810344533745, 0.1012285362903763};
    auto theta = [&](double u) { return alpha - 2.0 * alpha * prof.integral(u) / prof.total(); };
    std::vector<Vec2> cum(n, Vec2{});
    const double du = 1.0 / static_cast<double>(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a = static_cast<double>(i) * du;
        Vec2 acc{};
        for (std::size_t q = 0; q < xg.size(); ++q) {
            const double th = theta(a + 0.5 * du * (xg[q] + 1.0));
            acc += Vec2{std::cos(th), std::sin(th)} * (0.5 * du * wg[q]);
        }
        cum[i + 1] = cum[i] + acc;
    }
    return cum;
}

NetworkSpec theta(const ShapeParams& p) {
    const double d = positive(p, "d", 1.0);
    const double alpha = positive(p, "angle", 2.0 * kPi / 3.0);
    const double taper = positive(p, "taper", 0.35);
    if (!(alpha < kPi)) throw BadParams("angle must be below pi");
    if (!(taper <= 0.5)) throw BadParams("taper must be at most 0.5");
    const std::size_t n = nodes(p, 65, kMinOpenNodes);
    const double mu = mu_of(p);

    const Vec2 j1{-d, 0.0}, j2{d, 0.0};
    const std::vector<Vec2> cum = integrate_direction(n, alpha, TaperedProfile{taper});
    if (!(cum.back().x > 0.0)) throw BadParams("theta arcs do not close for this angle/taper");
    const double len = 2.0 * d / cum.back().x;

    std::vector<Vec2> top(n), bottom(n);
    for (std::size_t i = 0; i < n; ++i) {
        top[i] = j1 + cum[i] * len;
        bottom[i] = {top[i].x, -top[i].y};
    }
    top.back() = j2;
    bottom.back() = j2;
    auto chord = sample_open(n, [&](double x) { return j1 + (j2 - j1) * x; });

    NetworkSpec spec;
    spec.curves.push_back(build_curve(std::move(chord), false));
    spec.curves.push_back(build_curve(std::move(top), false));
    spec.curves.push_back(build_curve(std::move(bottom), false));
    spec.mu.assign(3, mu);
    JunctionSpec left, right;
    for (std::size_t c = 0; c < 3; ++c) {
        left.members.push_back({c, CurveEnd::start});
        right.members.push_back({c, CurveEnd::end});
    }
    spec.junctions = {left, right};
    check_structure(spec);
    return spec;
}

NetworkSpec triod(const ShapeParams& p) {
    const double len = positive(p, "len", 1.0);
    const double eps = finite(p, "eps", 0.05);
    const std::array<double, 3> angles = {finite(p, "a0", kPi / 2.0), finite(p, "a1", 7.0 * kPi / 6.0),
                                          finite(p, "a2", 11.0 * kPi / 6.0)};
    const std::size_t n = nodes(p, 257, kMinOpenNodes);
    NetworkSpec spec;
    spec.mu.assign(3, mu_of(p));
    JunctionSpec center;
    for (std::size_t c = 0; c < 3; ++c) {
        const Vec2 dir{std::cos(angles[c]), std::sin(angles[c])};
        const Vec2 nrm = rot90(dir);
        auto pts = sample_open(n, [&](double x) {
            const double s = std::sin(kPi * x);
            return dir * (len * x) + nrm * (eps * s * s * s * s * s);
        });
        pts.front() = Vec2{};
        pts.back() = dir * len;
        spec.curves.push_back(build_curve(std::move(pts), false));
        center.members.push_back({c, CurveEnd::start});
        spec.endpoints.push_back({c, CurveEnd::end, NavierEndpoint{dir * len}});
    }
    spec.junctions.push_back(center);
    check_structure(spec);
    return spec;
}

}  // namespace

double ShapeParams::get(const std::string& key, double fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

std::size_t ShapeParams::count(const std::string& key, std::size_t fallback) const {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    const double v = it->second;
    if (!(v >= 0.0) || std::round(v) != v) throw BadParams(key + " must be a non-negative integer");
    return static_cast<std::size_t>(v);
}

std::string ShapeParams::option(const std::string& key, const std::string& fallback) const {
    const auto it = options.find(key);
    return it == options.end() ? fallback : it->second;
}

const std::vector<std::string>& shape_names() {
    static const std::vector<std::string> names = {"circle", "ellipse", "perturbed_circle", "lemniscate",
                                                   "segment", "arc", "theta", "triod"};
    return names;
}

NetworkSpec make_shape(const std::string& name, const ShapeParams& params) {
    if (name == "circle") return circle(params);
    if (name == "ellipse") return ellipse(params);
    if (name == "perturbed_circle") return perturbed_circle(params);
    if (name == "lemniscate") return lemniscate(params);
    if (name == "segment") return segment(params);
    if (name == "arc") return arc(params);
    if (name == "theta") return theta(params);
    if (name == "triod") return triod(params);
    throw UnknownShape("\"" + name + "\"");
}

}  // namespace elastica
