#pragma once

#include <vector>

#include "halfline/bc.hpp"
#include "halfline/potential.hpp"
#include "halfline/types.hpp"

namespace halfline {

struct SolveOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double x_max = 0.0;      // 0 = auto-select from the potential tail
  double tail_tol = 1e-10; // first-moment tail committed at x_max
  double x_cap = 2000.0;
  long max_steps = 4'000'000;
};

/// Samples of the Jost solution f (normalized to e^{ikx} I at infinity),
/// of m = e^{-ikx} f, and/or of the regular solution phi with data (A, B)
/// at the origin; which parts are filled depends on the producing call.
struct SolutionSample {
  Complex k;
  std::vector<double> grid;
  std::vector<Matrix> f, fprime;
  std::vector<Matrix> m, mprime;
  std::vector<Matrix> phi, phiprime;
};

std::vector<double> default_grid(double x_max, int points = 33);

/// Integrates m'' + 2ik m' = V m backward from x_max with m = I, m' = 0
/// and reconstructs f = e^{ikx} m. k must lie in the closed upper half
/// plane; k = 0 only with allow_zero_k (the zero-energy path m'' = V m).
SolutionSample jost_solution(const PotentialModel& v, Complex k,
                             std::vector<double> grid = {},
                             const SolveOptions& opt = {},
                             bool allow_zero_k = false);

/// Forward integration from the exact initial data phi(0) = A, phi'(0) = B.
SolutionSample regular_solution(const PotentialModel& v, const BoundaryPair& bc,
                                Complex k, std::vector<double> grid = {},
                                const SolveOptions& opt = {});

struct JostEval {
  Complex k;
  Matrix J;
  Complex detJ;
};

/// J(k) = f(-k*, 0)^H B - f'(-k*, 0)^H A.
JostEval jost_matrix(const PotentialModel& v, const BoundaryPair& bc, Complex k,
                     const SolveOptions& opt = {});

/// max over the grid of ||[f(-k*,x)^H; phi(k,x)] - J(k)||; diagnostic.
double wronskian_drift(const PotentialModel& v, const BoundaryPair& bc,
                       Complex k, const std::vector<double>& grid,
                       const SolveOptions& opt = {});

/// Resolved x_max for the given options (auto-selection included).
double resolve_x_max(const PotentialModel& v, const SolveOptions& opt);

}  // namespace halfline
