#pragma once

#include <utility>
#include <vector>

#include "halfline/bc.hpp"
#include "halfline/potential.hpp"
#include "halfline/solve.hpp"
#include "halfline/types.hpp"

namespace halfline {

struct SpectrumOptions {
  double kappa_max = 0.0;  // 0 = numerical-range bound with 20% margin
  int scan_points = 240;
  double refine_tol = 1e-10;
  double nullity_ratio = 1e-6;  // sigma < ratio * sigma_max counts as zero
  double order_fit_tol = 0.35;  // |fitted local order - nullity| allowed
  double scan_floor = 1e-4;
};

struct EigenvalueHit {
  double kappa = 0.0;
  int multiplicity = 1;      // SVD nullity of J(i kappa)
  double local_order = 0.0;  // fitted vanishing order of det J
  double kappa_error = 0.0;
};

struct SpectrumResult {
  std::vector<EigenvalueHit> eigen;
  int total = 0;  // sum of multiplicities
  int mu = 0;     // dim Ker J(0)
  double mu_slope = 0.0;
  double kappa_max_used = 0.0;
};

/// det J(i kappa) on a caller-supplied grid; used for bracketing and plots.
std::vector<std::pair<double, Complex>> det_on_imaginary_axis(
    const PotentialModel& v, const BoundaryPair& bc,
    const std::vector<double>& kappas, const SolveOptions& opt = {});

/// kappa bound: sqrt(sup||V||) plus the worst attracting Robin rate
/// max(0, cot theta_j), with a 20% margin.
double default_kappa_max(const PotentialModel& v, const BoundaryPair& bc);

SpectrumResult find_eigenvalues(const PotentialModel& v, const BoundaryPair& bc,
                                const SpectrumOptions& sopt = {},
                                const SolveOptions& opt = {});

/// (mu, fitted low-energy slope of log|det J(i kappa)|).
std::pair<int, double> half_bound_count(const PotentialModel& v,
                                        const BoundaryPair& bc,
                                        double nullity_ratio = 1e-6,
                                        const SolveOptions& opt = {});

struct FdResult {
  std::vector<double> eigenvalues;  // negative, Richardson-extrapolated
  std::vector<double> error_estimates;
  double L = 0.0;
  double h = 0.0;
};

/// Symmetric finite differences on [0, L]: channel-wise Robin closure at 0
/// in the diagonal boundary representation, Dirichlet cutoff at L; negative
/// spectrum by Sturm bisection on block-tridiagonal inertia; two meshes
/// (h, h/2) with Richardson extrapolation.
FdResult fd_oracle_spectrum(const PotentialModel& v, const BoundaryPair& bc,
                            double L, double h, double consistency_tol = 5e-2);

}  // namespace halfline
