#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "halfline/bc.hpp"
#include "halfline/errors.hpp"
#include "halfline/solve.hpp"
#include "helpers.hpp"

using namespace halfline;
using namespace halfline::testing;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("pure dirichlet pair validates") {
  BoundaryPair bc = validate_boundary(Matrix::Zero(2, 2), -Matrix::Identity(2, 2));
  CHECK(bc.n == 2);
}

TEST_CASE("non-selfadjoint pair is rejected") {
  Matrix a = Matrix::Identity(2, 2);
  Matrix b = Matrix::Zero(2, 2);
  b(0, 0) = 1.0;
  b(1, 1) = Complex(0.0, 1.0);  // A^H B not Hermitian
  CHECK_THROWS_AS(validate_boundary(a, b), NotSelfAdjointBC);
}

TEST_CASE("shape mismatch and degenerate pairs are rejected") {
  CHECK_THROWS_AS(validate_boundary(Matrix::Zero(2, 3), Matrix::Zero(2, 3)),
                  ShapeMismatch);
  CHECK_THROWS_AS(validate_boundary(Matrix::Zero(2, 2), Matrix::Zero(3, 3)),
                  ShapeMismatch);
  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;  // second row of [A; B] vanishes
  CHECK_THROWS_AS(validate_boundary(a, b), DegenerateBC);
}

TEST_CASE("delta-prime matrices satisfy the constraints") {
  for (double a : {-1.0, 0.0, 2.0}) CHECK(delta_prime_pair(a).n == 3);
}

TEST_CASE("boundary unitary is unitary and right-parametrization invariant") {
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 2 + trial % 3;
    // build a valid pair from a random diagonal representation
    RealVector theta(n);
    std::uniform_real_distribution<double> u(0.05, kPi);
    for (int j = 0; j < n; ++j) theta(j) = u(rng());
    Matrix at = Matrix::Zero(n, n), bt = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      at(j, j) = -std::sin(theta(j));
      bt(j, j) = std::cos(theta(j));
    }
    Matrix m = random_unitary(n);
    BoundaryPair bc = validate_boundary(m * at * m.adjoint(), m * bt * m.adjoint());
    Matrix lam = boundary_unitary(bc);
    CHECK(unitarity_defect(lam) <= 1e-10);

    Matrix t = random_invertible(n);
    BoundaryPair bct = validate_boundary(bc.A * t, bc.B * t);
    CHECK(operator_norm(boundary_unitary(bct) - lam) < 1e-10);
  }
}

TEST_CASE("reduction recovers dirichlet and neumann") {
  DiagonalBC d = reduce_to_diagonal(dirichlet_pair(3));
  CHECK(d.n_dirichlet == 3);
  CHECK(d.n_mixed == 0);
  CHECK(d.n_neumann == 0);
  for (int j = 0; j < 3; ++j) CHECK(std::fabs(d.theta(j) - kPi) < 1e-12);

  DiagonalBC dn = reduce_to_diagonal(neumann_pair(3));
  CHECK(dn.n_neumann == 3);
  CHECK(dn.n_dirichlet == 0);
  for (int j = 0; j < 3; ++j) CHECK(std::fabs(dn.theta(j) - kPi / 2) < 1e-12);
}

TEST_CASE("reduction round-trips through the diagonal pair") {
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + trial % 2;
    RealVector theta(n);
    std::uniform_real_distribution<double> u(0.05, kPi);
    for (int j = 0; j < n; ++j) theta(j) = u(rng());
    Matrix at = Matrix::Zero(n, n), bt = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      at(j, j) = -std::sin(theta(j));
      bt(j, j) = std::cos(theta(j));
    }
    Matrix m = random_unitary(n);
    Matrix t = random_invertible(n);
    BoundaryPair bc = validate_boundary(m * at * m.adjoint() * t,
                                        m * bt * m.adjoint() * t);
    DiagonalBC d = reduce_to_diagonal(bc);
    std::vector<double> want(theta.data(), theta.data() + n);
    std::sort(want.begin(), want.end());
    for (int j = 0; j < n; ++j)
      CHECK(std::fabs(d.theta(j) - want[std::size_t(j)]) < 1e-9);
    // Lambda diagonalizes in the recovered basis
    Matrix lam = boundary_unitary(bc);
    Matrix diag = d.M.adjoint() * lam * d.M;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) CHECK(std::abs(diag(i, j)) < 1e-10);
  }
}

TEST_CASE("delta-prime channel counts") {
  // a != 0: one mixed and two neumann channels; a = 0: one dirichlet instead
  for (double a : {-1.0, -0.5, 1.0, 2.0}) {
    DiagonalBC d = reduce_to_diagonal(delta_prime_pair(a));
    CHECK(d.n_dirichlet == 0);
    CHECK(d.n_mixed == 1);
    CHECK(d.n_neumann == 2);
  }
  DiagonalBC d0 = reduce_to_diagonal(delta_prime_pair(0.0));
  CHECK(d0.n_dirichlet == 1);
  CHECK(d0.n_mixed == 0);
  CHECK(d0.n_neumann == 2);
}

TEST_CASE("delta-prime leading power cross-checks against det J") {
  // det J = k^2 (3 - iak): degree 3 for a != 0, degree 2 for a = 0
  PotentialModel v = zero_potential(3);
  for (double a : {-1.0, 2.0, 0.0}) {
    BoundaryPair bc = delta_prime_pair(a);
    const int p = reduce_to_diagonal(bc).leading_power();
    const double k1 = 40.0, k2 = 80.0;
    const Complex d1 = jost_matrix(v, bc, k1).detJ;
    const Complex d2 = jost_matrix(v, bc, k2).detJ;
    const double slope = std::log(std::abs(d2) / std::abs(d1)) / std::log(k2 / k1);
    CHECK(std::fabs(slope - p) < 0.05);
  }
}

TEST_CASE("transform reconstruction reproduces the pair") {
  BoundaryPair bc = delta_prime_pair(-1.0);
  DiagonalBC d = reduce_to_diagonal(bc, {}, true);
  REQUIRE(d.T1.has_value());
  REQUIRE(d.T2.has_value());
  auto [at, bt] = diagonal_pair(d);
  Matrix lhs_a = d.M * at * (*d.T2) * d.M.adjoint() * (*d.T1);
  Matrix lhs_b = d.M * bt * (*d.T2) * d.M.adjoint() * (*d.T1);
  CHECK(operator_norm(lhs_a - bc.A) < 1e-9);
  CHECK(operator_norm(lhs_b - bc.B) < 1e-9);
}

TEST_CASE("transform_problem identity and errors") {
  PotentialModel v = coupled_2x2_exp();
  BoundaryPair bc = dirichlet_pair(2);
  Matrix eye = Matrix::Identity(2, 2);
  auto [v2, bc2] = transform_problem(v, bc, eye, eye, eye);
  CHECK(operator_norm(bc2.A - bc.A) == 0.0);
  CHECK(operator_norm(evaluate(v2, 0.7) - evaluate(v, 0.7)) < 1e-14);

  CHECK_THROWS_AS(transform_problem(v, bc, 2.0 * eye, eye, eye),
                  SingularTransform);
  CHECK_THROWS_AS(transform_problem(v, bc, eye, Matrix::Zero(2, 2), eye),
                  SingularTransform);
  CHECK_THROWS_AS(
      transform_problem(v, bc, Matrix::Identity(3, 3), eye, eye),
      ShapeMismatch);
}

TEST_CASE("right multiplication leaves theta multiset unchanged") {
  BoundaryPair bc = delta_prime_pair(2.0);
  DiagonalBC d0 = reduce_to_diagonal(bc);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix t = random_invertible(3);
    DiagonalBC d1 = reduce_to_diagonal(validate_boundary(bc.A * t, bc.B * t));
    for (int j = 0; j < 3; ++j) CHECK(std::fabs(d0.theta(j) - d1.theta(j)) < 1e-9);
  }
}
