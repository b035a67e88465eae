#pragma once

#include <cstddef>
#include <vector>

namespace ctrg {

// Gauss-Hermite rule for the weight exp(-t^2). scaled_weights[i] = weights[i] * exp(nodes[i]^2),
// computed without overflow so the rule can integrate functions that are not multiplied by the weight.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> scaled_weights;
};

GaussRule gauss_hermite(std::size_t n);

} // namespace ctrg
