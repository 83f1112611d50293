#pragma once

#include <string>

#include "halfline/bc.hpp"
#include "halfline/potential.hpp"
#include "halfline/solve.hpp"
#include "halfline/spectrum.hpp"
#include "halfline/trace.hpp"

namespace halfline {

/// Everything a run needs, schema-validated before any computation.
struct RunConfig {
  PotentialModel potential;
  BoundaryPair boundary;
  SolveOptions solve;
  SpectrumOptions spectrum;
  TraceOptions trace;
  int n_series = 8;
  std::string output_format = "json";
  std::string output_path;  // empty = stdout
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace halfline
