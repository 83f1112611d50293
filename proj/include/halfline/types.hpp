#pragma once

#include <Eigen/Dense>
#include <complex>

namespace halfline {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kImag{0.0, 1.0};

/// Spectral (operator) norm on C^n.
inline double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.jacobiSvd().singularValues()(0);
}

inline bool is_hermitian(const Matrix& a, double tol) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

/// Unitarity defect ||U^dagger U - I|| in the spectral norm.
inline double unitarity_defect(const Matrix& u) {
  return operator_norm(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

// z^m for integer m, |z| > 0 assumed when m < 0.
inline Complex ipow(Complex z, int m) {
  if (m < 0) return 1.0 / ipow(z, -m);
  Complex r{1.0, 0.0};
  while (m > 0) {
    if (m & 1) r *= z;
    z *= z;
    m >>= 1;
  }
  return r;
}

}  // namespace halfline
