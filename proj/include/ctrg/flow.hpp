#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctrg/diagnostics.hpp"
#include "ctrg/tensor4.hpp"

namespace ctrg {

struct RunConfig {
    double mass = 1.0;
    int order = 0;
    std::size_t chi_max = 16;
    int sites_exponent = 20; // N = 2^(2k), 2k coarse-graining levels
    double zero_tol = 1e-10;
    double coupling = 1.0;
    std::string output_dir = ".";
    bool emit_csv = true;
    bool emit_json = true;
    std::vector<double> sweep_masses;
    std::vector<std::size_t> sweep_chis;
    bool oracle = true;
    std::uint64_t seed = 42;
    bool diagnostics = false;      // omega vectors per level (order 1)
    int omega_matrix_level = -1;   // level whose Omega matrix is kept, -1 for none
    bool timing = true;            // wall time in summary.json
    Backend backend = Backend::Parallel;

    int levels() const { return 2 * sites_exponent; }
    void validate() const;
};

struct FreeEnergyReport {
    double mass = 0.0;
    std::size_t chi_max = 0;
    int order = 0;
    int levels = 0;
    double sites = 1.0;
    double f0 = 0.0;
    std::optional<double> exact_f0, delta_f0;
    std::optional<double> f1, exact_f1, delta_f1;
    double wall_seconds = 0.0;
};

struct FlowResult {
    FreeEnergyReport report;
    RGTrace trace;
};

FlowResult run_free_flow(const RunConfig& config);
FlowResult run_pert_flow(const RunConfig& config);
FlowResult run_flow(const RunConfig& config);

double relative_error(double value, double exact);

} // namespace ctrg
