#include "halfline/bc.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "halfline/errors.hpp"

namespace halfline {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

BoundaryPair validate_boundary(const Matrix& A, const Matrix& B,
                               const BoundaryTolerances& tol) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows() ||
      A.rows() < 1)
    throw ShapeMismatch("boundary: A, B must be square of equal dimension");
  const int n = static_cast<int>(A.rows());

  const double scale = std::max(1e-300, operator_norm(A) * operator_norm(B));
  const double sa_defect = operator_norm(A.adjoint() * B - B.adjoint() * A);
  if (sa_defect > tol.selfadjoint * std::max(1.0, scale))
    throw NotSelfAdjointBC("boundary: A^H B - B^H A has norm " +
                           std::to_string(sa_defect));

  Matrix gram = A.adjoint() * A + B.adjoint() * B;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  if (!(lmin > tol.definite * std::max(lmax, 1e-300)))
    throw DegenerateBC("boundary: A^H A + B^H B not positive definite, "
                       "lambda_min = " +
                       std::to_string(lmin));
  return BoundaryPair{n, A, B};
}

Matrix boundary_unitary(const BoundaryPair& bc) {
  const Matrix denom = bc.A - kImag * bc.B;
  Eigen::FullPivLU<Matrix> lu(denom);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible())
    throw DegenerateBC("boundary: A - iB numerically singular");
  return -(bc.A + kImag * bc.B) * lu.inverse();
}

DiagonalBC reduce_to_diagonal(const BoundaryPair& bc,
                              const BoundaryTolerances& tol,
                              bool reconstruct_transforms) {
  const int n = bc.n;
  Matrix lambda = boundary_unitary(bc);
  if (unitarity_defect(lambda) > 1e-10)
    throw DegenerateBC("boundary: Lambda failed the unitarity check");

  // Schur of a normal matrix: Q is exactly unitary, T is diagonal up to
  // roundoff; eigenvectors from Schur stay orthonormal in degenerate clusters.
  Eigen::ComplexSchur<Matrix> schur(lambda);
  Matrix Q = schur.matrixU();
  Matrix T = schur.matrixT();

  DiagonalBC d;
  d.theta.resize(n);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  RealVector raw(n);
  for (int j = 0; j < n; ++j) {
    double th = 0.5 * std::arg(T(j, j));
    if (th <= 0.0) th += kPi;
    raw(j) = th;
  }
  std::sort(perm.begin(), perm.end(),
            [&](int a, int b) { return raw(a) < raw(b); });
  d.M.resize(n, n);
  for (int j = 0; j < n; ++j) {
    d.theta(j) = raw(perm[j]);
    d.M.col(j) = Q.col(perm[j]);
  }

  d.threshold_distance.resize(n);
  for (int j = 0; j < n; ++j) {
    const double th = d.theta(j);
    const double dd = std::abs(th - kPi);
    const double dn = std::abs(th - 0.5 * kPi);
    d.threshold_distance[j] = std::min(dd, dn);
    if (dd < tol.theta_classify)
      ++d.n_dirichlet;
    else if (dn < tol.theta_classify)
      ++d.n_neumann;
    else
      ++d.n_mixed;
  }

  if (reconstruct_transforms) {
    // A = M At T2 M^H T1 with T2 = I: stack [M At; M Bt] K = [A; B],
    // then T1 = M K.
    auto [At, Bt] = diagonal_pair(d);
    Matrix lhs(2 * n, n), rhs(2 * n, n);
    lhs.topRows(n) = d.M * At;
    lhs.bottomRows(n) = d.M * Bt;
    rhs.topRows(n) = bc.A;
    rhs.bottomRows(n) = bc.B;
    Matrix K = lhs.colPivHouseholderQr().solve(rhs);
    if ((lhs * K - rhs).norm() > 1e-8 * std::max(1.0, rhs.norm()))
      throw DegenerateBC("boundary: transform reconstruction inconsistent");
    d.T1 = d.M * K;
    d.T2 = Matrix::Identity(n, n);
  }
  return d;
}

std::pair<Matrix, Matrix> diagonal_pair(const DiagonalBC& d) {
  const int n = static_cast<int>(d.theta.size());
  Matrix At = Matrix::Zero(n, n), Bt = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    At(j, j) = -std::sin(d.theta(j));
    Bt(j, j) = std::cos(d.theta(j));
  }
  return {At, Bt};
}

std::pair<PotentialModel, BoundaryPair> transform_problem(
    const PotentialModel& v, const BoundaryPair& bc, const Matrix& M,
    const Matrix& T1, const Matrix& T2) {
  const int n = bc.n;
  if (M.rows() != n || M.cols() != n || T1.rows() != n || T1.cols() != n ||
      T2.rows() != n || T2.cols() != n || v.n != n)
    throw ShapeMismatch("transform: dimension mismatch");
  if (unitarity_defect(M) > 1e-10)
    throw SingularTransform("transform: M is not unitary");
  for (const Matrix* t : {&T1, &T2}) {
    Eigen::FullPivLU<Matrix> lu(*t);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible())
      throw SingularTransform("transform: T1 or T2 numerically singular");
  }

  std::vector<PotentialTerm> terms;
  for (const auto& t : v.terms)
    terms.push_back({M * t.H * M.adjoint(), t.profile});
  PotentialModel vt = make_potential(n, v.rho, std::move(terms));

  Matrix core = T1 * M.adjoint() * T2;
  BoundaryPair out = validate_boundary(M * bc.A * core, M * bc.B * core);
  return {std::move(vt), std::move(out)};
}

BoundaryPair dirichlet_pair(int n) {
  return validate_boundary(Matrix::Zero(n, n), -Matrix::Identity(n, n));
}

BoundaryPair neumann_pair(int n) {
  return validate_boundary(Matrix::Identity(n, n), Matrix::Zero(n, n));
}

BoundaryPair delta_prime_pair(double a) {
  Matrix A(3, 3), B(3, 3);
  A << 1, 0, -a,
      -1, 1, 0,
       0, -1, 0;
  B << 0, 0, -1,
       0, 0, -1,
       0, 0, -1;
  return validate_boundary(A, B);
}

}  // namespace halfline
