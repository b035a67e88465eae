#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ctrg/free_trg.hpp"
#include "ctrg/pert_trg.hpp"

namespace ctrg {

struct LevelRecord {
    int level = 0;
    std::size_t chi = 0;      // chi_n of the weight at this level
    std::size_t chi_pre = 0;  // non-vanishing singular values of B_n
    std::size_t chi_post = 0; // kept after truncation (chi_{n+1})
    int discarded_zero = 0;
    std::vector<double> singular_values; // all 2chi eigenvalues of B_n, descending
    double cdl_distance = 0.0;
    double log_const = 0.0;       // constant extracted when producing this level
    double structure_error = 0.0; // block-structure deviation when producing this level
    std::optional<double> t0;     // order-lambda vacuum part produced by the sewing at this level
    std::vector<double> omega2, omega4;
};

struct RGTrace {
    std::vector<LevelRecord> levels;
    std::optional<int> cdl_onset;
    std::optional<int> freeze_level;
    std::optional<int> omega_matrix_level;
    Mat omega_matrix;
};

struct OmegaVectors {
    std::vector<double> omega2, omega4;
};

OmegaVectors omega_vectors(const PertTensors& t, std::size_t chi_max);
SymMatrix omega_matrix(const PertTensors& t, std::size_t chi_max);

// Share of the B_n singular-value weight beyond the chi leading channels: sqrt(sum_{i>chi} b_i^2 / sum b_i^2).
double cdl_distance(const std::vector<double>& spectrum, std::size_t chi);
double cdl_distance(const FreeWeightState& state);

double ir_scale(double mass);

// Start of the terminal monotone decay of the CDL distance on even levels, provided it ends below floor.
std::optional<int> detect_cdl_onset(const RGTrace& trace, double floor = 1e-10);

// First even level from which the relative L1 change of omega4 between consecutive even levels stays
// below tol.
std::optional<int> detect_freeze(const RGTrace& trace, double tol = 1e-3);

} // namespace ctrg
