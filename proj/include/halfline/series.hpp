#pragma once

#include <vector>

#include "halfline/bc.hpp"
#include "halfline/chebpanel.hpp"
#include "halfline/laurent.hpp"
#include "halfline/potential.hpp"
#include "halfline/solve.hpp"
#include "halfline/types.hpp"

namespace halfline {

/// Samples of the recursion kernels b_l and their derivative stacks on a
/// piecewise Chebyshev grid: b_0 = I, b_{l+1} = -b_l' - int_x^inf V b_l.
/// Derivatives come from the differentiated recursion, never from numerical
/// differentiation; stack depth for b_l is 2 (N - l) + 2.
struct BTable {
  int N = 0;
  int n = 0;
  cheb::PanelGrid grid;
  // stacks[l][j][node] = d^j/dx^j b_l at grid node
  std::vector<std::vector<std::vector<Matrix>>> stacks;
  double committed_tail = 0.0;  // neglected integral mass beyond the grid

  int depth(int l) const { return std::max(0, 2 * (N - l) + 2); }
  const Matrix& value(int l, int j, int node) const {
    return stacks[std::size_t(l)][std::size_t(j)][std::size_t(node)];
  }
  const Matrix& at_zero(int l, int j = 0) const { return value(l, j, 0); }
};

BTable b_table(const PotentialModel& v, int N, double x_max = 0.0,
               int panel_order = 24);

/// Coefficients of the Jost-matrix expansion J(k) = sum c_l z^l,
/// z = 1/(2ik): c(0) = c_{-1} = -A/2, c(1) = c_0, ...
struct CTable {
  int N = 0;
  std::vector<Matrix> c;
  const Matrix& at_power(int l) const { return c.at(std::size_t(l + 1)); }
};

CTable c_table(const BTable& b, const BoundaryPair& bc);

/// det J as a Laurent series in z = 1/(2ik); valuation >= -n, reliable
/// through order N - n + 1.
LaurentSeries<Complex> d_table(const CTable& c, int n);

struct ETable {
  int p = 0;          // n_mixed + n_neumann
  Complex c2{};       // (2i)^p d_{-p}
  std::vector<Complex> e;      // e[i] = e_{i+1}, from the d-recursion
  std::vector<Complex> e_log;  // same coefficients via the series logarithm
  double dual_path_defect = 0.0;

  int order() const { return static_cast<int>(e.size()); }
  Complex at(int l) const { return e.at(std::size_t(l - 1)); }
};

/// Normalization constant and log-expansion coefficients; the recursion
/// values and the series-log values must agree (relative 1e-12) or the
/// call throws.
ETable e_table(const LaurentSeries<Complex>& d, int p, double lead_tol = 1e-8);

struct CoeffTables {
  BTable b;
  CTable c;
  LaurentSeries<Complex> d;
  ETable e;
};

CoeffTables build_coeff_tables(const PotentialModel& v, const BoundaryPair& bc,
                               int N, double x_max = 0.0);

struct RemainderFit {
  std::vector<double> k;
  std::vector<double> norm;  // ||r_N(k, 0)||
  double slope = 0.0;        // log-log least squares
};

/// r_N(k,0) = m(k,0) - sum_{l<=N} b_l(0)/(2ik)^l; the fitted slope checks
/// the k^{-(N+1)} remainder rate.
RemainderFit m_remainder_check(const PotentialModel& v, int N,
                               const std::vector<double>& ks,
                               const SolveOptions& opt = {});

}  // namespace halfline
