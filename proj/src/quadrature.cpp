#include "ctrg/quadrature.hpp"

#include <cmath>

#include "ctrg/errors.hpp"
#include "ctrg/symlin.hpp"

namespace ctrg {

namespace {

// Orthonormal Hermite functions q_k(t) = p_k(t) exp(-t^2/2) up to order n; returns q_{n-1}, q_n and sum q_k^2.
struct HermiteEval {
    double qn1, qn, sumsq;
};

HermiteEval hermite_functions(std::size_t n, double t) {
    double prev = 0.0, cur = std::pow(M_PI, -0.25) * std::exp(-0.5 * t * t), sumsq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sumsq += cur * cur;
        const double next = std::sqrt(2.0 / (k + 1.0)) * t * cur - std::sqrt(k / (k + 1.0)) * prev;
        prev = cur;
        cur = next;
    }
    return {prev, cur, sumsq};
}

} // namespace

GaussRule gauss_hermite(std::size_t n) {
    if (n == 0) throw InvalidConfig("gauss_hermite needs at least one node");
    SymMatrix jac(n);
    for (std::size_t k = 1; k < n; ++k) jac.set(k - 1, k, std::sqrt(0.5 * static_cast<double>(k)));
    const SymSpectrum sp = eig_sym(jac);

    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    rule.scaled_weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double t = sp.values[n - 1 - i];
        for (int it = 0; it < 4; ++it) {
            const HermiteEval h = hermite_functions(n, t);
            // d/dt q_n = sqrt(2n) q_{n-1} - t q_n, and q_n = 0 at a node
            const double deriv = std::sqrt(2.0 * n) * h.qn1 - t * h.qn;
            if (deriv == 0.0) break;
            t -= h.qn / deriv;
        }
        const HermiteEval h = hermite_functions(n, t);
        rule.nodes[i] = t;
        rule.scaled_weights[i] = 1.0 / h.sumsq;
        rule.weights[i] = rule.scaled_weights[i] * std::exp(-t * t);
    }
    return rule;
}

} // namespace ctrg
