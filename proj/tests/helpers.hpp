#pragma once

#include <random>

#include "halfline/bc.hpp"
#include "halfline/potential.hpp"
#include "halfline/types.hpp"

namespace halfline::testing {

inline std::mt19937& rng() {
  static std::mt19937 gen(0x5eed);
  return gen;
}

inline Matrix random_complex(int n) {
  std::normal_distribution<double> d(0.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(d(rng()), d(rng()));
  return m;
}

inline Matrix random_unitary(int n) {
  Eigen::HouseholderQR<Matrix> qr(random_complex(n));
  Matrix q = qr.householderQ();
  return q;
}

inline Matrix random_invertible(int n) {
  for (;;) {
    Matrix m = random_complex(n);
    if (std::abs(m.determinant()) > 0.3) return m;
  }
}

inline Matrix random_hermitian(int n) {
  Matrix m = random_complex(n);
  return 0.5 * (m + m.adjoint().eval());
}

inline PotentialModel scalar_exp(double c, double alpha = 1.0) {
  Matrix h(1, 1);
  h(0, 0) = c;
  return make_potential(1, 2.0, {{h, {ProfileKind::Exponential, 1.0, alpha}}});
}

/// Coupled 2x2 with two exponential profiles; Hermitian coefficients.
inline PotentialModel coupled_2x2_exp() {
  Matrix h1(2, 2), h2(2, 2);
  h1 << -3.0, 0.7, 0.7, -1.0;
  h2 << 1.0, Complex(0.0, -0.4), Complex(0.0, 0.4), 0.5;
  return make_potential(2, 2.0,
                        {{h1, {ProfileKind::Exponential, 1.0, 1.0}},
                         {h2, {ProfileKind::Exponential, 1.0, 2.0}}});
}

/// Fixed-step classical RK4 on y' = f(x, y); the independent integrator used
/// as the self-convergence oracle.
template <class F>
Matrix rk4_integrate(F&& f, Matrix y, double x0, double x1, int steps) {
  const double h = (x1 - x0) / steps;
  double x = x0;
  for (int i = 0; i < steps; ++i) {
    Matrix k1 = f(x, y);
    Matrix k2 = f(x + 0.5 * h, y + 0.5 * h * k1);
    Matrix k3 = f(x + 0.5 * h, y + 0.5 * h * k2);
    Matrix k4 = f(x + h, y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    x += h;
  }
  return y;
}

}  // namespace halfline::testing
