#pragma once

#include <cstddef>

namespace ctrg {

// Infinite-lattice free energy per site of the gaussian link-field model. m = 0 is accepted.
double exact_f0(double mass);
// Coincident-point link variance G(0).
double link_variance(double mass);
// Order-lambda coefficient: two links per site, <x^4> = 3 G(0)^2 each.
double exact_f1(double mass);

// Finite L x L torus via the per-momentum 2x2 link kernel.
double torus_f0(std::size_t side, double mass);
double torus_f1(std::size_t side, double mass);

struct BruteForceResult {
    double log_z;
    double df; // d(-log Z)/d lambda at lambda = 0
    std::size_t links;
};

// Dense integral over all 2 L^2 link fields (at most 32). kinetic scales the nearest-leg couplings;
// kinetic = 0 decouples the links.
BruteForceResult brute_force(std::size_t side, double mass, double kinetic = 1.0);
double brute_force_logZ(std::size_t side, double mass, double kinetic = 1.0);
double brute_force_df(std::size_t side, double mass, double kinetic = 1.0);

} // namespace ctrg
