#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "halfline/bc.hpp"
#include "halfline/errors.hpp"
#include "halfline/solve.hpp"
#include "helpers.hpp"

using namespace halfline;
using namespace halfline::testing;

TEST_CASE("free jost solution is the plane wave") {
  PotentialModel v = zero_potential(2);
  for (Complex k : {Complex(1.0, 0.0), Complex(0.7, 1.1), Complex(0.0, 2.0)}) {
    SolutionSample s = jost_solution(v, k, default_grid(1.0, 5));
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
      const Complex phase = std::exp(kImag * k * s.grid[i]);
      CHECK(operator_norm(s.f[i] - phase * Matrix::Identity(2, 2)) < 1e-13);
      CHECK(operator_norm(s.fprime[i] -
                          kImag * k * phase * Matrix::Identity(2, 2)) < 1e-13);
    }
  }
}

TEST_CASE("zero wavenumber requires the explicit zero-energy path") {
  PotentialModel v = scalar_exp(1.0);
  CHECK_THROWS_AS(jost_solution(v, Complex(0.0, 0.0)), ZeroWavenumberOnAxis);
  SolutionSample s = jost_solution(v, Complex(0.0, 0.0), {}, {}, true);
  CHECK(s.m.size() == 2);
}

TEST_CASE("lower half plane is rejected") {
  PotentialModel v = scalar_exp(1.0);
  CHECK_THROWS_AS(jost_solution(v, Complex(1.0, -0.5)), Error);
}

TEST_CASE("free regular solutions: dirichlet and neumann closed forms") {
  PotentialModel v = zero_potential(1);
  const Complex k(1.3, 0.0);
  auto grid = default_grid(1.0, 9);
  SolutionSample sd = regular_solution(v, dirichlet_pair(1), k, grid);
  SolutionSample sn = regular_solution(v, neumann_pair(1), k, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    // dirichlet (A, B) = (0, -1): phi = -sin(kx)/k
    CHECK(std::abs(sd.phi[i](0, 0) - (-std::sin(k.real() * x) / k.real())) <
          1e-12);
    // neumann (A, B) = (1, 0): phi = cos(kx)
    CHECK(std::abs(sn.phi[i](0, 0) - std::cos(k.real() * x)) < 1e-12);
  }
}

TEST_CASE("self-convergence against a fixed-step rk4 oracle") {
  SUBCASE("jost solution, scalar V = 2 exp(-x) at k = i") {
    PotentialModel v = scalar_exp(2.0);
    const Complex k(0.0, 1.0);
    SolveOptions opt;
    opt.rtol = opt.atol = 1e-11;
    SolutionSample s = jost_solution(v, k, {}, opt);
    const double xmax = s.grid.back();

    const Complex two_ik = 2.0 * kImag * k;
    auto rhs = [&](double x, const Matrix& y) {
      Matrix d(2, 1);
      d(0, 0) = y(1, 0);
      d(1, 0) = evaluate(v, x)(0, 0) * y(0, 0) - two_ik * y(1, 0);
      return d;
    };
    Matrix y0(2, 1);
    y0(0, 0) = 1.0;
    y0(1, 0) = 0.0;
    Matrix ref = rk4_integrate(rhs, y0, xmax, 0.0, 120000);
    CHECK(std::abs(s.m.front()(0, 0) - ref(0, 0)) < 1e-9);
    CHECK(std::abs(s.mprime.front()(0, 0) - ref(1, 0)) < 1e-9);
  }
  SUBCASE("regular solution, coupled 2x2 at k = 1") {
    PotentialModel v = coupled_2x2_exp();
    BoundaryPair bc = neumann_pair(2);
    const Complex k(1.0, 0.0);
    SolveOptions opt;
    opt.rtol = opt.atol = 1e-11;
    auto grid = default_grid(10.0, 3);
    SolutionSample s = regular_solution(v, bc, k, grid, opt);

    auto rhs = [&](double x, const Matrix& y) {
      Matrix d(4, 2);
      d.topRows(2) = y.bottomRows(2);
      d.bottomRows(2) = evaluate(v, x) * y.topRows(2) - k * k * y.topRows(2);
      return d;
    };
    Matrix y0(4, 2);
    y0.topRows(2) = bc.A;
    y0.bottomRows(2) = bc.B;
    Matrix ref = rk4_integrate(rhs, y0, 0.0, 10.0, 100000);
    CHECK(operator_norm(s.phi.back() - ref.topRows(2)) < 1e-9);
    CHECK(operator_norm(s.phiprime.back() - ref.bottomRows(2)) < 1e-9);
  }
}

TEST_CASE("delta-prime jost matrix matches the closed form") {
  PotentialModel v = zero_potential(3);
  for (double a : {-1.0, 0.0, 2.0}) {
    BoundaryPair bc = delta_prime_pair(a);
    for (Complex k : {Complex(1.0, 0.0), Complex(-2.0, 0.0), Complex(0.5, 0.5),
                      Complex(0.0, 1.5)}) {
      JostEval je = jost_matrix(v, bc, k);
      // J = B - ik A for the free potential
      Matrix expect = bc.B - kImag * k * bc.A;
      CHECK(operator_norm(je.J - expect) < 1e-12);
      const Complex dexp = k * k * (3.0 - kImag * a * k);
      CHECK(std::abs(je.detJ - dexp) < 1e-12 * (1.0 + std::abs(dexp)));
    }
  }
}

TEST_CASE("free scalar dirichlet jost matrix is -1") {
  PotentialModel v = zero_potential(1);
  Matrix a = Matrix::Zero(1, 1), b = -Matrix::Identity(1, 1);
  BoundaryPair bc = validate_boundary(a, b);
  for (Complex k : {Complex(0.5, 0.0), Complex(2.0, 1.0), Complex(0.0, 3.0)})
    CHECK(std::abs(jost_matrix(v, bc, k).detJ - Complex(-1.0)) < 1e-13);
}

TEST_CASE("wronskian constancy for exact free solutions") {
  PotentialModel v = zero_potential(2);
  BoundaryPair bc = dirichlet_pair(2);
  CHECK(wronskian_drift(v, bc, Complex(1.7, 0.0), default_grid(1.0, 17)) <
        1e-12);
}

TEST_CASE("jost matrix equals the wronskian at interior points") {
  PotentialModel v = coupled_2x2_exp();
  BoundaryPair bc = neumann_pair(2);
  const Complex k(0.0, 2.0);
  SolveOptions opt;
  auto grid = default_grid(resolve_x_max(v, opt), 9);
  SolutionSample fs = jost_solution(v, k, grid, opt);
  SolutionSample ps = regular_solution(v, bc, k, grid, opt);
  const Matrix j = jost_matrix(v, bc, k, opt).J;
  const std::size_t mid = grid.size() / 2;
  Matrix w = fs.f[mid].adjoint() * ps.phiprime[mid] -
             fs.fprime[mid].adjoint() * ps.phi[mid];
  CHECK(operator_norm(w - j) < 1e-9);
}

TEST_CASE("wronskian drift across random wavenumbers stays within budget") {
  SolveOptions opt;  // rtol = atol = 1e-10
  std::uniform_real_distribution<double> ur(0.4, 3.0), ui(0.0, 1.2);
  auto grid = default_grid(35.0, 12);
  for (int trial = 0; trial < 20; ++trial) {
    PotentialModel v = (trial % 2 == 0) ? scalar_exp(1.0 + 0.2 * trial, 1.0)
                                        : coupled_2x2_exp();
    BoundaryPair bc = (trial % 3 == 0) ? neumann_pair(v.n)
                                       : dirichlet_pair(v.n);
    const Complex k(ur(rng()), trial % 4 == 0 ? 0.0 : ui(rng()));
    const double drift = wronskian_drift(v, bc, k, grid, opt);
    CHECK(drift <= 100.0 * opt.rtol);
  }
}

TEST_CASE("drift grows as the integrator tolerance is loosened") {
  PotentialModel v = coupled_2x2_exp();
  BoundaryPair bc = delta_prime_pair(0.0).n == 3 ? dirichlet_pair(2)
                                                 : dirichlet_pair(2);
  const Complex k(1.0, 0.5);
  auto grid = default_grid(30.0, 12);
  std::vector<double> drifts;
  for (double tol : {1e-10, 1e-8, 1e-6, 1e-4}) {
    SolveOptions opt;
    opt.rtol = opt.atol = tol;
    opt.x_max = 30.0;
    opt.tail_tol = 1e-9;  // keep the admission gate off the tolerance study
    drifts.push_back(wronskian_drift(v, bc, k, grid, opt));
  }
  for (std::size_t i = 1; i < drifts.size(); ++i)
    CHECK(drifts[i] >= drifts[i - 1]);
  CHECK(drifts.back() > 10.0 * drifts.front());
}

TEST_CASE("transformation covariance of the jost matrix") {
  PotentialModel v = coupled_2x2_exp();
  BoundaryPair bc = neumann_pair(2);
  for (int trial = 0; trial < 6; ++trial) {
    Matrix m = random_unitary(2);
    Matrix t1 = random_invertible(2);
    Matrix t2 = random_invertible(2);
    auto [vt, bct] = transform_problem(v, bc, m, t1, t2);
    for (Complex k : {Complex(1.0, 0.0), Complex(0.0, 1.0), Complex(1.5, 0.8)}) {
      Matrix lhs = jost_matrix(vt, bct, k).J;
      Matrix rhs = m * jost_matrix(v, bc, k).J * t1 * m.adjoint() * t2;
      CHECK(operator_norm(lhs - rhs) <= 1e-9 * std::max(1.0, operator_norm(rhs)));
    }
  }
}

TEST_CASE("det J is analytic in the open upper half plane") {
  PotentialModel v = scalar_exp(-1.5, 1.0);
  BoundaryPair bc = neumann_pair(1);
  const double d = 1e-3;
  for (Complex k0 : {Complex(0.8, 0.6), Complex(1.5, 1.0)}) {
    auto det = [&](Complex k) { return jost_matrix(v, bc, k).detJ; };
    const Complex dx = (det(k0 + d) - det(k0 - d)) / (2.0 * d);
    const Complex dy =
        (det(k0 + Complex(0, d)) - det(k0 - Complex(0, d))) / (2.0 * d);
    const Complex cr = 0.5 * (dx + kImag * dy);  // d/d conj(k)
    CHECK(std::abs(cr) <= 1e-6 * std::max(1.0, std::abs(dx)));
  }
}

TEST_CASE("det J does not vanish on the real axis") {
  PotentialModel v = coupled_2x2_exp();
  BoundaryPair bc = dirichlet_pair(2);
  for (double k = 0.05; k < 12.0; k *= 1.6)
    CHECK(std::abs(jost_matrix(v, bc, Complex(k, 0.0)).detJ) > 1e-6);
}

TEST_CASE("explicit x_max below the tail tolerance is rejected") {
  PotentialModel v = scalar_exp(1.0);
  SolveOptions opt;
  opt.x_max = 3.0;  // exp(-3) tail far above 1e-10
  CHECK_THROWS_AS(jost_solution(v, Complex(1.0, 0.0), {}, opt), TailTooShort);
}
