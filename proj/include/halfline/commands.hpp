#pragma once

#include <ostream>
#include <string>

#include "halfline/config.hpp"

namespace halfline {

// Exit codes: 0 success, 2 invalid input, 3 numerical budget or threshold
// failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitBudget = 3;

int cmd_validate_bc(const RunConfig& cfg, std::ostream& out);
int cmd_spectrum(const RunConfig& cfg, std::ostream& out);
int cmd_coeffs(const RunConfig& cfg, std::ostream& out);
int cmd_trace_check(const RunConfig& cfg, std::ostream& out);
int cmd_plot_data(const RunConfig& cfg, const std::string& out_dir);

std::string spectrum_json(const SpectrumResult& s);
std::string coeffs_json(const ETable& e);
std::string trace_report_json(const TraceReport& rep);

}  // namespace halfline
