#include "halfline/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "halfline/errors.hpp"
#include "halfline/parallel.hpp"

namespace halfline {

namespace {

constexpr double kPi = 3.14159265358979323846;

Complex det_at(const PotentialModel& v, const BoundaryPair& bc, double kappa,
               const SolveOptions& opt) {
  return jost_matrix(v, bc, Complex(0.0, kappa), opt).detJ;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = static_cast<int>(xs.size());
  for (int i = 0; i < m; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (m * sxy - sx * sy) / std::max(m * sxx - sx * sx, 1e-300);
}

int svd_nullity(const Matrix& J, double ratio) {
  Eigen::JacobiSVD<Matrix> svd(J);
  const auto& s = svd.singularValues();
  const double smax = std::max(s(0), 1e-300);
  int nul = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) < ratio * smax) ++nul;
  return nul;
}

}  // namespace

std::vector<std::pair<double, Complex>> det_on_imaginary_axis(
    const PotentialModel& v, const BoundaryPair& bc,
    const std::vector<double>& kappas, const SolveOptions& opt) {
  std::vector<Complex> vals = parallel_map(
      kappas, [&](double kap) { return det_at(v, bc, kap, opt); });
  std::vector<std::pair<double, Complex>> out;
  out.reserve(kappas.size());
  for (std::size_t i = 0; i < kappas.size(); ++i)
    out.emplace_back(kappas[i], vals[i]);
  return out;
}

double default_kappa_max(const PotentialModel& v, const BoundaryPair& bc) {
  DiagonalBC d = reduce_to_diagonal(bc);
  double robin = 0.0;
  for (int j = 0; j < bc.n; ++j) {
    const double th = d.theta(j);
    const double dd = std::abs(th - kPi);
    const double dn = std::abs(th - 0.5 * kPi);
    if (dd < 1e-9 || dn < 1e-9) continue;
    robin = std::max(robin, 1.0 / std::tan(th));  // attracting only if > 0
  }
  const double base = std::sqrt(sup_norm_bound(v)) + std::max(0.0, robin);
  return std::max(0.5, 1.2 * base + 0.2);
}

SpectrumResult find_eigenvalues(const PotentialModel& v, const BoundaryPair& bc,
                                const SpectrumOptions& sopt,
                                const SolveOptions& opt) {
  SpectrumResult res;
  const double kmax =
      sopt.kappa_max > 0 ? sopt.kappa_max : default_kappa_max(v, bc);
  res.kappa_max_used = kmax;

  const int m = std::max(sopt.scan_points, 16);
  std::vector<double> grid(m);
  for (int i = 0; i < m; ++i)
    grid[i] = sopt.scan_floor + (kmax - sopt.scan_floor) * i / (m - 1);
  std::vector<Complex> dval =
      parallel_map(grid, [&](double kap) { return det_at(v, bc, kap, opt); });
  std::vector<double> dabs(m);
  for (int i = 0; i < m; ++i) dabs[i] = std::abs(dval[i]);

  // Guarded complex Newton on det J(i kappa) along the real kappa direction.
  // Converges quadratically at simple zeros, linearly (rate (m-1)/m) at
  // multiple zeros; the iteration cap still drives it to the noise floor.
  auto refine = [&](double lo, double hi, double seed) {
    double k0 = std::clamp(seed, lo, hi);
    Complex g0 = det_at(v, bc, k0, opt);
    double err = hi - lo;
    for (int it = 0; it < 80; ++it) {
      const double dk = std::max(1e-9, 1e-7 * k0);
      Complex deriv =
          (det_at(v, bc, k0 + dk, opt) - det_at(v, bc, k0 - dk, opt)) /
          (2.0 * dk);
      const double step = std::real(g0 / deriv);
      if (!std::isfinite(step)) break;
      const double k1 = std::clamp(k0 - step, lo, hi);
      err = std::abs(k1 - k0);
      k0 = k1;
      g0 = det_at(v, bc, k0, opt);
      if (err < sopt.refine_tol) break;
    }
    return std::pair<double, double>(k0, err);
  };

  std::vector<std::pair<double, double>> roots;
  for (int i = 1; i + 1 < m; ++i) {
    if (!(dabs[i] <= dabs[i - 1] && dabs[i] <= dabs[i + 1])) continue;
    // plausibility: the dip must be real against neighbours
    const double shoulder = std::max(dabs[i - 1], dabs[i + 1]);
    if (dabs[i] > 0.5 * shoulder) continue;
    auto [k0, err] = refine(grid[i - 1], grid[i + 1], grid[i]);
    const Complex g = det_at(v, bc, k0, opt);
    // reject shallow minima: |det| must actually vanish against the scale
    double scale = *std::max_element(dabs.begin(), dabs.end());
    if (std::abs(g) > 1e-5 * std::max(scale, 1e-300)) continue;
    roots.emplace_back(k0, err);
  }
  std::sort(roots.begin(), roots.end());
  // merge refinements that converged to one zero
  std::vector<std::pair<double, double>> merged;
  for (auto& r : roots) {
    if (!merged.empty() &&
        std::abs(r.first - merged.back().first) <
            100 * std::max(sopt.refine_tol, merged.back().second))
      continue;
    merged.push_back(r);
  }

  for (auto& [kap, err] : merged) {
    EigenvalueHit hit;
    hit.kappa = kap;
    hit.kappa_error = err;
    Matrix J = jost_matrix(v, bc, Complex(0.0, kap), opt).J;
    hit.multiplicity = std::max(1, svd_nullity(J, sopt.nullity_ratio));

    // local vanishing order of det J at i kappa
    std::vector<double> lx, ly;
    for (double d : {3e-3, 1e-3, 3e-4, 1e-4}) {
      const double dk = d * std::max(1.0, kap);
      const double a1 = std::abs(det_at(v, bc, kap + dk, opt));
      const double a2 = std::abs(det_at(v, bc, kap - dk, opt));
      lx.push_back(std::log(dk));
      ly.push_back(0.5 * (std::log(a1) + std::log(a2)));
    }
    hit.local_order = fit_slope(lx, ly);
    if (std::abs(hit.local_order - hit.multiplicity) > sopt.order_fit_tol)
      throw MultiplicityMismatch(
          "spectrum: SVD nullity and local vanishing order disagree at kappa=" +
          std::to_string(kap));
    res.eigen.push_back(hit);
    res.total += hit.multiplicity;
  }

  auto [mu, slope] = half_bound_count(v, bc, sopt.nullity_ratio, opt);
  res.mu = mu;
  res.mu_slope = slope;
  return res;
}

std::pair<int, double> half_bound_count(const PotentialModel& v,
                                        const BoundaryPair& bc,
                                        double nullity_ratio,
                                        const SolveOptions& opt) {
  JostEval j0 = jost_matrix(v, bc, Complex(0.0, 0.0), opt);
  const int mu = svd_nullity(j0.J, nullity_ratio);
  std::vector<double> lx, ly;
  for (double kap : {1e-4, 3e-4, 1e-3, 3e-3}) {
    lx.push_back(std::log(kap));
    ly.push_back(std::log(std::abs(det_at(v, bc, kap, opt))));
  }
  const double slope = fit_slope(lx, ly);
  if (std::abs(slope - mu) > 0.1)
    throw InconsistentMu("spectrum: nullity of J(0) is " + std::to_string(mu) +
                         " but low-energy slope is " + std::to_string(slope));
  return {mu, slope};
}

// ---------------------------------------------------------------------------
// Finite-difference oracle
// ---------------------------------------------------------------------------

namespace {

struct FdPencil {
  // DOFs: node 0 carries only the non-Dirichlet channels (n0 of them),
  // nodes 1..K-1 carry all n channels; Dirichlet cutoff at node K.
  int n = 0, n0 = 0, K = 0;
  double h = 0.0;
  Matrix d0;                // n0 x n0 stiffness block at node 0
  Matrix c01;               // n x n0 coupling node0 -> node1
  std::vector<Matrix> di;   // n x n blocks, nodes 1..K-1
  Matrix offdiag;           // n x n coupling between interior nodes
  double b0 = 0.0;          // mass weight at node 0 (h/2)
  double bi = 0.0;          // mass weight at interior nodes (h)

  // eigenvalue count of (A, B) below lambda via block LDL inertia
  int count_below(double lambda) const {
    int neg = 0;
    Matrix s;
    if (n0 > 0) {
      s = d0 - lambda * b0 * Matrix::Identity(n0, n0);
      Eigen::SelfAdjointEigenSolver<Matrix> es(s);
      for (Eigen::Index i = 0; i < n0; ++i)
        if (es.eigenvalues()(i) < 0) ++neg;
      Matrix sc = c01 * s.inverse() * c01.adjoint();
      s = di[0] - lambda * bi * Matrix::Identity(n, n) - sc;
    } else {
      s = di[0] - lambda * bi * Matrix::Identity(n, n);
    }
    for (int i = 1;; ++i) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(s);
      for (Eigen::Index j = 0; j < n; ++j)
        if (es.eigenvalues()(j) < 0) ++neg;
      if (i >= static_cast<int>(di.size())) break;
      Matrix sc = offdiag * s.inverse() * offdiag.adjoint();
      s = di[std::size_t(i)] - lambda * bi * Matrix::Identity(n, n) - sc;
    }
    return neg;
  }
};

FdPencil assemble(const PotentialModel& vt, const RealVector& theta, double L,
                  double h) {
  FdPencil p;
  p.n = vt.n;
  p.h = h;
  p.K = static_cast<int>(std::round(L / h));
  if (p.K < 8) throw MeshTooCoarse("fd oracle: fewer than 8 mesh cells");

  std::vector<int> open;  // non-Dirichlet channels
  std::vector<double> robin;
  for (int j = 0; j < p.n; ++j) {
    if (std::abs(theta(j) - kPi) < 1e-9) continue;  // Dirichlet: u_j(0) = 0
    open.push_back(j);
    const double dn = std::abs(theta(j) - 0.5 * kPi);
    robin.push_back(dn < 1e-9 ? 0.0 : 1.0 / std::tan(theta(j)));
  }
  p.n0 = static_cast<int>(open.size());

  const Matrix v0 = evaluate(vt, 0.0);
  p.d0 = Matrix::Zero(p.n0, p.n0);
  for (int a = 0; a < p.n0; ++a) {
    for (int b = 0; b < p.n0; ++b)
      p.d0(a, b) = 0.5 * h * v0(open[std::size_t(a)], open[std::size_t(b)]);
    p.d0(a, a) += 1.0 / h - robin[std::size_t(a)];
  }
  p.c01 = Matrix::Zero(p.n, p.n0);
  for (int a = 0; a < p.n0; ++a) p.c01(open[std::size_t(a)], a) = -1.0 / h;

  p.offdiag = -1.0 / h * Matrix::Identity(p.n, p.n);
  p.di.resize(std::size_t(p.K - 1));
  for (int i = 1; i <= p.K - 1; ++i) {
    Matrix d = h * evaluate(vt, i * h);
    d += 2.0 / h * Matrix::Identity(p.n, p.n);
    p.di[std::size_t(i - 1)] = d;
  }
  p.b0 = 0.5 * h;
  p.bi = h;
  return p;
}

std::vector<double> negative_eigs(const FdPencil& p, double lambda_floor) {
  const int count = p.count_below(0.0);
  std::vector<double> eigs;
  for (int j = 1; j <= count; ++j) {
    double lo = lambda_floor, hi = 0.0;
    for (int it = 0; it < 80 && hi - lo > 1e-12 * std::max(1.0, -lo); ++it) {
      const double mid = 0.5 * (lo + hi);
      (p.count_below(mid) >= j ? hi : lo) = mid;
    }
    eigs.push_back(0.5 * (lo + hi));
  }
  return eigs;
}

}  // namespace

FdResult fd_oracle_spectrum(const PotentialModel& v, const BoundaryPair& bc,
                            double L, double h, double consistency_tol) {
  if (v.n != bc.n) throw ShapeMismatch("fd oracle: dimension mismatch");
  DiagonalBC d = reduce_to_diagonal(bc);
  // conjugate the potential so the boundary condition decouples channel-wise
  std::vector<PotentialTerm> terms;
  for (const auto& t : v.terms)
    terms.push_back({d.M.adjoint() * t.H * d.M, t.profile});
  PotentialModel vt = make_potential(v.n, v.rho, std::move(terms));

  double robin_max = 0.0;
  for (int j = 0; j < v.n; ++j) {
    if (std::abs(d.theta(j) - kPi) < 1e-9 ||
        std::abs(d.theta(j) - 0.5 * kPi) < 1e-9)
      continue;
    robin_max = std::max(robin_max, 1.0 / std::tan(d.theta(j)));
  }
  const double floor =
      -2.0 * (sup_norm_bound(v) + robin_max * robin_max + 1.0);

  FdPencil p1 = assemble(vt, d.theta, L, h);
  FdPencil p2 = assemble(vt, d.theta, L, 0.5 * h);
  std::vector<double> e1 = negative_eigs(p1, floor);
  std::vector<double> e2 = negative_eigs(p2, floor);
  if (e1.size() != e2.size())
    throw MeshTooCoarse("fd oracle: eigenvalue count changed under h -> h/2");

  FdResult out;
  out.L = L;
  out.h = h;
  for (std::size_t i = 0; i < e1.size(); ++i) {
    const double extrap = (4.0 * e2[i] - e1[i]) / 3.0;
    const double est = std::abs(e2[i] - e1[i]) / 3.0;
    if (est > consistency_tol * std::max(1.0, std::abs(extrap)))
      throw MeshTooCoarse("fd oracle: Richardson consistency failed");
    out.eigenvalues.push_back(extrap);
    out.error_estimates.push_back(est);
  }
  return out;
}

}  // namespace halfline
