#pragma once

#include <map>
#include <string>
#include <vector>

#include "elastica/network.hpp"

namespace elastica {

// Numeric parameters plus string options ("bc" for segment and arc).
struct ShapeParams {
    std::map<std::string, double> values;
    std::map<std::string, std::string> options;

    [[nodiscard]] double get(const std::string& key, double fallback) const;
    [[nodiscard]] std::size_t count(const std::string& key, std::size_t fallback) const;
    [[nodiscard]] std::string option(const std::string& key, const std::string& fallback) const;
};

[[nodiscard]] const std::vector<std::string>& shape_names();

// Initial-condition generators. Every shape accepts "mu" (default 1) and "n"
// (nodes per curve). Other parameters:
//   circle            r=1, cx=0, cy=0, cover=1 (negative: clockwise), n=128
//   ellipse           a=2, b=1, n=256 (resampled at equal arclength)
//   perturbed_circle  r=1, m=3, eps=0.1, n=256           r(t) = r (1 + eps cos m t)
//   lemniscate        a=1, n=256                          Bernoulli lemniscate
//   segment           px=0, py=0, qx=1, qy=0, eps=0, n=65, bc=navier|clamped
//                     eps adds the normal bump eps sin^3(pi x)
//   arc               r=1, span=pi, n=65, bc=clamped|navier
//   theta             d=1, angle=2pi/3, taper=0.35, n=65   junctions at (-d, 0) and (d, 0);
//                     taper is the arc fraction at each end where curvature ramps from zero
//   triod             len=1, eps=0.05, a0=pi/2, a1=7pi/6, a2=11pi/6, n=257
//                     arms carry the normal bump eps sin^5(pi x)
// Throws UnknownShape for other names and BadParams for invalid values.
[[nodiscard]] NetworkSpec make_shape(const std::string& name, const ShapeParams& params = {});

}  // namespace elastica
