#include "halfline/solve.hpp"

#include <algorithm>
#include <cmath>

#include "halfline/errors.hpp"
#include "halfline/ode.hpp"

namespace halfline {

namespace {

void check_upper_half(Complex k) {
  if (k.imag() < -1e-14 * std::max(1.0, std::abs(k)))
    throw Error("solve: k must lie in the closed upper half plane");
}

ode::Options ode_options(const SolveOptions& opt) {
  ode::Options o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  o.max_steps = opt.max_steps;
  return o;
}

}  // namespace

double resolve_x_max(const PotentialModel& v, const SolveOptions& opt) {
  if (opt.x_max > 0.0) {
    double tail = 0.0;
    for (const auto& t : v.terms)
      tail += operator_norm(t.H) * t.profile.tail_first_moment(opt.x_max);
    if (tail > opt.tail_tol)
      throw TailTooShort("solve: potential tail at x_max exceeds tolerance");
    return opt.x_max;
  }
  return select_x_max(v, opt.tail_tol, opt.x_cap);
}

std::vector<double> default_grid(double x_max, int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = x_max * i / (points - 1);
  g.front() = 0.0;
  g.back() = x_max;
  return g;
}

SolutionSample jost_solution(const PotentialModel& v, Complex k,
                             std::vector<double> grid, const SolveOptions& opt,
                             bool allow_zero_k) {
  check_upper_half(k);
  if (k == Complex(0.0, 0.0) && !allow_zero_k)
    throw ZeroWavenumberOnAxis(
        "solve: k = 0 requires the explicit zero-energy path");
  const int n = v.n;
  if (grid.empty()) grid = {0.0, resolve_x_max(v, opt)};
  if (grid.size() < 2 || grid.front() != 0.0 ||
      !std::is_sorted(grid.begin(), grid.end()))
    throw Error("solve: grid must ascend from 0 to x_max");
  {
    double tail = 0.0;
    for (const auto& t : v.terms)
      tail += operator_norm(t.H) * t.profile.tail_first_moment(grid.back());
    if (tail > opt.tail_tol)
      throw TailTooShort("solve: potential tail at grid end exceeds tolerance");
  }

  SolutionSample s;
  s.k = k;
  s.grid = grid;
  const std::size_t npts = grid.size();
  s.m.resize(npts);
  s.mprime.resize(npts);
  s.f.resize(npts);
  s.fprime.resize(npts);

  const Complex two_ik = 2.0 * kImag * k;
  auto rhs = [&](double x, const Matrix& y) {
    Matrix d(2 * n, n);
    d.topRows(n) = y.bottomRows(n);
    d.bottomRows(n) = evaluate(v, x) * y.topRows(n) - two_ik * y.bottomRows(n);
    return d;
  };

  Matrix y0(2 * n, n);
  y0.topRows(n) = Matrix::Identity(n, n);
  y0.bottomRows(n) = Matrix::Zero(n, n);

  std::vector<double> stations(grid.rbegin(), grid.rend());
  std::size_t idx = npts;
  ode::integrate(rhs, std::move(y0), stations, ode_options(opt),
                 [&](double, const Matrix& y) {
                   --idx;
                   s.m[idx] = y.topRows(n);
                   s.mprime[idx] = y.bottomRows(n);
                 });

  const Complex ik = kImag * k;
  for (std::size_t i = 0; i < npts; ++i) {
    const Complex phase = std::exp(ik * grid[i]);
    s.f[i] = phase * s.m[i];
    s.fprime[i] = phase * (s.mprime[i] + ik * s.m[i]);
  }
  return s;
}

SolutionSample regular_solution(const PotentialModel& v, const BoundaryPair& bc,
                                Complex k, std::vector<double> grid,
                                const SolveOptions& opt) {
  if (bc.n != v.n) throw ShapeMismatch("solve: boundary/potential dimension");
  const int n = v.n;
  if (grid.empty()) grid = {0.0, resolve_x_max(v, opt)};
  if (grid.size() < 2 || grid.front() != 0.0 ||
      !std::is_sorted(grid.begin(), grid.end()))
    throw Error("solve: grid must ascend from 0 to x_max");

  SolutionSample s;
  s.k = k;
  s.grid = grid;
  const std::size_t npts = grid.size();
  s.phi.resize(npts);
  s.phiprime.resize(npts);

  const Complex k2 = k * k;
  auto rhs = [&](double x, const Matrix& y) {
    Matrix d(2 * n, n);
    d.topRows(n) = y.bottomRows(n);
    d.bottomRows(n) = evaluate(v, x) * y.topRows(n) - k2 * y.topRows(n);
    return d;
  };

  Matrix y0(2 * n, n);
  y0.topRows(n) = bc.A;
  y0.bottomRows(n) = bc.B;

  std::size_t idx = 0;
  ode::integrate(rhs, std::move(y0), grid, ode_options(opt),
                 [&](double, const Matrix& y) {
                   s.phi[idx] = y.topRows(n);
                   s.phiprime[idx] = y.bottomRows(n);
                   ++idx;
                 });
  return s;
}

JostEval jost_matrix(const PotentialModel& v, const BoundaryPair& bc, Complex k,
                     const SolveOptions& opt) {
  if (bc.n != v.n) throw ShapeMismatch("solve: boundary/potential dimension");
  check_upper_half(k);
  const Complex kf = -std::conj(k);
  const bool zero = (k == Complex(0.0, 0.0));
  SolutionSample s = jost_solution(v, kf, {}, opt, zero);
  JostEval out;
  out.k = k;
  out.J = s.f.front().adjoint() * bc.B - s.fprime.front().adjoint() * bc.A;
  out.detJ = out.J.determinant();
  return out;
}

double wronskian_drift(const PotentialModel& v, const BoundaryPair& bc,
                       Complex k, const std::vector<double>& grid,
                       const SolveOptions& opt) {
  const Complex kf = -std::conj(k);
  SolutionSample fs = jost_solution(v, kf, grid, opt, k == Complex(0.0, 0.0));
  SolutionSample ps = regular_solution(v, bc, k, grid, opt);
  const Matrix J =
      fs.f.front().adjoint() * bc.B - fs.fprime.front().adjoint() * bc.A;
  double drift = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Matrix w = fs.f[i].adjoint() * ps.phiprime[i] -
               fs.fprime[i].adjoint() * ps.phi[i];
    drift = std::max(drift, operator_norm(w - J));
  }
  return drift;
}

}  // namespace halfline
