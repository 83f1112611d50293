#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace halfline::cheb {

/// Piecewise Chebyshev-Lobatto collocation grid on [0, x_max].
///
/// Panels widen geometrically away from the origin. Nodes ascend globally;
/// panel p owns nodes [p*(order+1), (p+1)*(order+1)). `tail_weights` turns
/// nodal samples of an integrand on one panel into the partial integrals
/// from each node to the panel's right edge (reference scale, multiply by
/// half the panel width).
struct PanelGrid {
  std::vector<double> edges;
  int order = 24;
  std::vector<double> nodes;
  Eigen::MatrixXd tail_weights;  // (P+1) x (P+1), reference [-1, 1]

  int panel_count() const { return static_cast<int>(edges.size()) - 1; }
  int nodes_per_panel() const { return order + 1; }
  double half_width(int p) const { return 0.5 * (edges[p + 1] - edges[p]); }
};

namespace detail {

inline Eigen::MatrixXd vals_to_coeffs(int P) {
  // values at ascending nodes t_i = -cos(i*pi/P)  ->  Chebyshev coefficients
  Eigen::MatrixXd C(P + 1, P + 1);
  const double pi = 3.14159265358979323846;
  for (int k = 0; k <= P; ++k) {
    const double ck = (k == 0 || k == P) ? 2.0 : 1.0;
    for (int i = 0; i <= P; ++i) {
      const int j = P - i;  // standard descending index
      const double cj = (j == 0 || j == P) ? 2.0 : 1.0;
      C(k, i) = 2.0 / (P * ck * cj) * std::cos(k * j * pi / P);
    }
  }
  return C;
}

inline Eigen::MatrixXd antiderivative_map(int P) {
  // coeffs a_k (size P+1) -> coeffs A_k (size P+2) of the antiderivative
  // vanishing at t = -1.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(P + 2, P + 1);
  for (int k = 2; k <= P + 1; ++k) {
    if (k - 1 <= P) A(k, k - 1) += 1.0 / (2.0 * k);
    if (k + 1 <= P) A(k, k + 1) -= 1.0 / (2.0 * k);
  }
  A(1, 0) = 1.0;
  if (2 <= P) A(1, 2) = -0.5;
  for (int k = 1; k <= P + 1; ++k) {
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    A.row(0) -= sgn * A.row(k);
  }
  return A;
}

}  // namespace detail

inline PanelGrid make_panel_grid(double x_max, int order = 24,
                                 double first_width = 0.5) {
  PanelGrid g;
  g.order = order;
  g.edges.push_back(0.0);
  double w = first_width;
  while (g.edges.back() < x_max) {
    double next = g.edges.back() + w;
    if (next > x_max * 0.999) next = x_max;
    g.edges.push_back(next);
    w *= 2.0;
  }
  const int P = order;
  const double pi = 3.14159265358979323846;
  for (int p = 0; p < g.panel_count(); ++p) {
    const double c = 0.5 * (g.edges[p] + g.edges[p + 1]);
    const double h = g.half_width(p);
    for (int i = 0; i <= P; ++i)
      g.nodes.push_back(c - h * std::cos(i * pi / P));
  }

  Eigen::MatrixXd C = detail::vals_to_coeffs(P);
  Eigen::MatrixXd A = detail::antiderivative_map(P);  // (P+2) x (P+1)
  // Evaluate T_k at ascending nodes, k = 0..P+1.
  Eigen::MatrixXd E(P + 1, P + 2);
  for (int i = 0; i <= P; ++i) {
    const double t = -std::cos(i * pi / P);
    double tkm = 1.0, tk = t;
    E(i, 0) = 1.0;
    if (P + 1 >= 1) E(i, 1) = t;
    for (int k = 2; k <= P + 1; ++k) {
      const double tkp = 2.0 * t * tk - tkm;
      E(i, k) = tkp;
      tkm = tk;
      tk = tkp;
    }
  }
  Eigen::RowVectorXd at_one = Eigen::RowVectorXd::Ones(P + 2);  // T_k(1) = 1
  Eigen::MatrixXd F = E * A;                 // F(i,:)*a = antiderivative at t_i
  Eigen::MatrixXd Fend = at_one * A;         // 1 x (P+1)
  g.tail_weights = (Fend.replicate(P + 1, 1) - F) * C;
  return g;
}

}  // namespace halfline::cheb
