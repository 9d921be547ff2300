#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "elastica/errors.hpp"
#include "elastica/vec2.hpp"

namespace elastica {

// Fornberg weights for the derivative of the given order at 0, from samples at
// `offsets` (unit spacing).
[[nodiscard]] std::vector<double> fd_weights(std::span<const double> offsets, int order);

// Stencil of one node: f^(order)(x_i) ~ sum_k weights[k] * f[indices[k]].
// Weights already include the 1/h^order factor.
struct Stencil {
    std::vector<std::size_t> indices;
    std::vector<double> weights;
};

// Centered second-order stencil for node i on a grid of n nodes. Closed grids
// wrap indices; open grids fall back to one-sided windows of order+4 points
// (fourth order) in the boundary bands.
[[nodiscard]] Stencil node_stencil(std::size_t i, std::size_t n, bool closed, double h, int order);

// Applies node_stencil at every node.
template <class T>
[[nodiscard]] std::vector<T> differentiate(std::span<const T> f, bool closed, double h, int order) {
    const std::size_t n = f.size();
    std::vector<T> out(n, T{});
    for (std::size_t i = 0; i < n; ++i) {
        const Stencil s = node_stencil(i, n, closed, h, order);
        // Weights of a derivative sum to zero, so differences against f[i]
        // give the same value with less cancellation.
        T acc{};
        for (std::size_t k = 0; k < s.indices.size(); ++k) acc += s.weights[k] * (f[s.indices[k]] - f[i]);
        out[i] = order == 0 ? f[i] : acc;
    }
    return out;
}

}  // namespace elastica
