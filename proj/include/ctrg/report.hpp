#pragma once

#include <string>
#include <vector>

#include "ctrg/flow.hpp"

namespace ctrg {

// 17 significant digits, round-trip exact.
std::string fmt17(double x);

void write_flow_trace_csv(const std::string& path, const RGTrace& trace);
void write_omega_trace_csv(const std::string& path, const RGTrace& trace);
void write_omega_matrix_csv(const std::string& path, const RGTrace& trace);

std::string summary_json(const RunConfig& config, const FlowResult& result);
void write_text(const std::string& path, const std::string& text);

// One row per (mass, chi) sweep point.
void write_fig_data_csv(const std::string& path, const std::vector<FreeEnergyReport>& rows);

} // namespace ctrg
