#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "ctrg/symlin.hpp"

namespace ctrg {

constexpr double kLog2Pi = 1.8378770664093454836;

// Gaussian vertex weight at level n, W_n(x) = exp(-x M_n x / 2) over legs ordered (x1, x2, x4, x3).
struct FreeWeightState {
    int level = 0;
    std::size_t chi = 1;
    std::vector<double> dinv_prev; // diagonal of D_{n-1}^{-1}; at level 0 it holds m^2
    Mat a;                         // chi x chi
    SymMatrix b;                   // 2chi x 2chi, L-R mixing
    std::vector<int> sector;       // per component: 0 symmetric (u), 1 antisymmetric (v), -1 at level 0
    double log_norm = 0.0;         // log constant extracted when this level was produced
    double structure_error = 0.0;  // A/B block-structure deviation found when this level was produced

    Mat full_a() const;        // A_n = 1/2 1_2 (x) D^{-1} + [[a,-a],[-a,a]]
    Mat vertex_matrix() const; // M_n = [[A+B, -B], [-B, A+B]]
};

struct SplitData {
    Mat e;                        // chi x chi', sector eigenvector of each kept component
    std::vector<int> sector;      // 0 = u block, 1 = v block
    std::vector<double> d;        // kept singular values, descending
    std::vector<double> spectrum; // every eigenvalue of b, descending
    double log_rho = 0.0;
    int kept_count = 0;
    int discarded_zero_count = 0;
    int truncated_count = 0;

    std::size_t chi_next() const { return d.size(); }
    Mat u() const;
    Mat v() const;
    Mat upper() const; // top half of U_n: e / sqrt2
    Mat lower() const; // bottom half of U_n: sigma e / sqrt2 with sigma = -1 on the v block
};

struct LoopKernel {
    SymMatrix q;  // 4chi x 4chi over the internal links 1..4
    Mat c_left;   // 4chi x 2chi', columns (p1, p2)
    Mat c_right;  // 4chi x 2chi', columns (p4, p3)
    Mat qinv;
    double logdet_q = 0.0;
    Mat coupling() const; // [c_left | c_right], columns (p1, p2, p4, p3)
};

struct FreeEnergyAccumulator {
    struct Entry {
        int level;
        double log_const;
        double vertices_remaining;
    };
    int total_levels = 0;
    std::vector<Entry> per_level_log;
    double per_site = 0.0; // sum of N_n log c_n / N

    explicit FreeEnergyAccumulator(int levels = 0) : total_levels(levels) {}
    void push(int level, double log_const);
    double total_sites() const;
};

FreeWeightState init_free(double mass);

// zero_tol < 0 keeps every component, zero and negative eigenvalues included.
SplitData split_weight(const FreeWeightState& state, std::size_t chi_max, double zero_tol = 1e-10);
SplitData full_split(const FreeWeightState& state);

LoopKernel build_loop(const FreeWeightState& state, const SplitData& split);

FreeWeightState coarse_grain_free(const FreeWeightState& state, const SplitData& split, const LoopKernel& kernel,
                                  FreeEnergyAccumulator* acc = nullptr, double structure_tol = 1e-9);

// Fold used by the torus closure: y (2chi) -> legs (x1, x2, x4, x3) with x3 = S x1, x4 = S x2,
// S = -1 on u-sector components.
Mat closure_fold(const FreeWeightState& state);

double close_trace(const FreeWeightState& state);

} // namespace ctrg
