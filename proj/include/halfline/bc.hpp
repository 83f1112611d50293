#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "halfline/potential.hpp"
#include "halfline/types.hpp"

namespace halfline {

struct BoundaryTolerances {
  double selfadjoint = 1e-12;  // ||A^H B - B^H A|| relative to ||A|| ||B||
  double definite = 1e-10;     // lambda_min(A^H A + B^H B) relative to lambda_max
  double theta_classify = 1e-9;
};

/// The matrices (A, B) of the vertex condition -B^H psi(0) + A^H psi'(0) = 0.
struct BoundaryPair {
  int n = 0;
  Matrix A, B;
};

/// Diagonal representation: theta_j in (0, pi], unitary M, channel counts.
/// theta = pi is Dirichlet, theta = pi/2 is Neumann, anything else mixed.
struct DiagonalBC {
  RealVector theta;
  Matrix M;
  std::optional<Matrix> T1, T2;  // reconstructed on request only
  int n_dirichlet = 0, n_mixed = 0, n_neumann = 0;
  std::vector<double> threshold_distance;  // per channel, min distance to pi or pi/2

  int leading_power() const { return n_mixed + n_neumann; }
};

BoundaryPair validate_boundary(const Matrix& A, const Matrix& B,
                               const BoundaryTolerances& tol = {});

/// Lambda = -(A + iB)(A - iB)^{-1}: unitary, invariant under (A,B) -> (AT,BT),
/// eigenvalues exp(2 i theta_j).
Matrix boundary_unitary(const BoundaryPair& bc);

DiagonalBC reduce_to_diagonal(const BoundaryPair& bc,
                              const BoundaryTolerances& tol = {},
                              bool reconstruct_transforms = false);

/// (A_tilde, B_tilde) = (-diag sin theta, diag cos theta).
std::pair<Matrix, Matrix> diagonal_pair(const DiagonalBC& d);

/// (V, A, B) -> (M V M^H, (M A T1 M^H T2, M B T1 M^H T2)).
std::pair<PotentialModel, BoundaryPair> transform_problem(
    const PotentialModel& v, const BoundaryPair& bc, const Matrix& M,
    const Matrix& T1, const Matrix& T2);

BoundaryPair dirichlet_pair(int n);
BoundaryPair neumann_pair(int n);
/// psi_1'(0)=psi_2'(0)=psi_3'(0), sum_j psi_j(0) = a psi_1'(0).
BoundaryPair delta_prime_pair(double a);

}  // namespace halfline
