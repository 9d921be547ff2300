#include "elastica/finite_difference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace elastica {

std::vector<double> fd_weights(std::span<const double> offsets, int order) {
    const std::size_t n = offsets.size();
    if (order < 0 || static_cast<std::size_t>(order) >= n) {
        throw BadParams("fd_weights needs more than `order` sample offsets");
    }
    const auto m = static_cast<std::size_t>(order);
    // c[j][k]: weight of sample j for derivative k (Fornberg 1988).
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = offsets[0];
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = offsets[i];
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = offsets[i] - offsets[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k) {
                    c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k) {
                c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = c[j][m];
    return w;
}

namespace {

// Centered second-order weights, offsets -2..2.
constexpr std::array<std::array<double, 5>, 5> kCentered{{
    {0.0, 0.0, 1.0, 0.0, 0.0},
    {0.0, -0.5, 0.0, 0.5, 0.0},
    {0.0, 1.0, -2.0, 1.0, 0.0},
    {-0.5, 1.0, 0.0, -1.0, 0.5},
    {1.0, -4.0, 6.0, -4.0, 1.0},
}};

constexpr std::size_t half_width(int order) { return order <= 2 ? 1 : 2; }

}  // namespace

Stencil node_stencil(std::size_t i, std::size_t n, bool closed, double h, int order) {
    if (order < 0 || order > 4) throw BadParams("derivative order must be in 0..4");
    Stencil s;
    const double scale = 1.0 / std::pow(h, order);
    if (order == 0) {
        s.indices = {i};
        s.weights = {1.0};
        return s;
    }
    const std::size_t w = half_width(order);
    const bool fits = closed || (i >= w && i + w < n);
    if (fits) {
        const auto& row = kCentered[static_cast<std::size_t>(order)];
        for (std::size_t k = 2 - w; k <= 2 + w; ++k) {
            if (row[k] == 0.0) continue;
            const long off = static_cast<long>(k) - 2;
            const long idx = static_cast<long>(i) + off;
            const long nn = static_cast<long>(n);
            s.indices.push_back(static_cast<std::size_t>(((idx % nn) + nn) % nn));
            s.weights.push_back(row[k] * scale);
        }
        return s;
    }
    const std::size_t p = std::min<std::size_t>(static_cast<std::size_t>(order) + 4, n);
    const std::size_t start = (i < w) ? 0 : n - p;
    // The right band mirrors the left one, so both ends see identical weights.
    const bool right = i >= w;
    std::vector<double> offsets(p);
    for (std::size_t k = 0; k < p; ++k) {
        const double off = static_cast<double>(start + k) - static_cast<double>(i);
        offsets[right ? p - 1 - k : k] = right ? -off : off;
    }
    std::vector<double> wts = fd_weights(offsets, order);
    if (right) {
        std::reverse(wts.begin(), wts.end());
        if (order % 2 == 1) {
            for (double& x : wts) x = -x;
        }
    }
    for (std::size_t k = 0; k < p; ++k) {
        s.indices.push_back(start + k);
        s.weights.push_back(wts[k] * scale);
    }
    return s;
}

}  // namespace elastica
