#include "halfline/series.hpp"

#include <cmath>

#include "halfline/errors.hpp"

namespace halfline {

namespace {

double signed_profile_tail(const Profile& p, double x) {
  return (p.c < 0 ? -1.0 : 1.0) * p.tail_l1(x);
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

BTable b_table(const PotentialModel& v, int N, double x_max, int panel_order) {
  if (N < 0) throw Error("b_table: negative order");
  if (v.max_derivative < 2 * N)
    throw SmoothnessRequired("b_table: potential must supply 2N derivatives");

  BTable t;
  t.N = N;
  t.n = v.n;
  double xb = x_max;
  if (xb <= 0.0) {
    try {
      xb = select_x_max(v, 1e-12, 600.0);
    } catch (const TailTooShort&) {
      xb = 600.0;  // slow tails: run to the cap, record the committed mass
    }
  }
  t.grid = cheb::make_panel_grid(std::max(xb, 1.0), panel_order);
  const auto& g = t.grid;
  const int npp = g.nodes_per_panel();
  const int total = static_cast<int>(g.nodes.size());
  const int n = v.n;

  // Analytic V derivatives at every node, order 0 .. max needed.
  const int max_vder = std::max(0, t.depth(1) - 1);
  std::vector<std::vector<Matrix>> vder(std::size_t(max_vder + 1));
  for (int i = 0; i <= max_vder; ++i) {
    vder[i].reserve(total);
    for (int node = 0; node < total; ++node)
      vder[i].push_back(evaluate(v, g.nodes[node], i));
  }

  double tail0 = 0.0;
  for (const auto& term : v.terms)
    tail0 += operator_norm(term.H) * term.profile.tail_l1(g.edges.back());
  t.committed_tail = tail0;

  t.stacks.assign(std::size_t(N + 2), {});
  auto alloc = [&](int l) {
    t.stacks[l].assign(std::size_t(t.depth(l) + 1),
                       std::vector<Matrix>(std::size_t(total)));
  };

  alloc(0);
  for (int node = 0; node < total; ++node) {
    t.stacks[0][0][node] = Matrix::Identity(n, n);
    for (int j = 1; j <= t.depth(0); ++j)
      t.stacks[0][j][node] = Matrix::Zero(n, n);
  }

  for (int l = 0; l <= N; ++l) {
    alloc(l + 1);
    // Tail integral T_l(x) = int_x^inf V b_l, panel by panel from the right.
    // Beyond the grid: closed-form profile tails for l = 0 (b_0 = I); for
    // l >= 1 the neglected mass is O(tail * ||b_l||), recorded above.
    Matrix carry = Matrix::Zero(n, n);
    if (l == 0)
      for (const auto& term : v.terms)
        carry += term.H * signed_profile_tail(term.profile, g.edges.back());

    std::vector<Matrix> tl(static_cast<std::size_t>(total));
    for (int p = g.panel_count() - 1; p >= 0; --p) {
      const double hw = g.half_width(p);
      const int base = p * npp;
      std::vector<Matrix> integrand(static_cast<std::size_t>(npp));
      for (int i = 0; i < npp; ++i)
        integrand[i] = vder[0][base + i] * t.stacks[l][0][base + i];
      for (int i = 0; i < npp; ++i) {
        Matrix partial = Matrix::Zero(n, n);
        for (int j = 0; j < npp; ++j)
          partial += g.tail_weights(i, j) * integrand[j];
        tl[base + i] = hw * partial + carry;
      }
      Matrix full = Matrix::Zero(n, n);
      for (int j = 0; j < npp; ++j)
        full += g.tail_weights(0, j) * integrand[j];
      carry += hw * full;
    }

    for (int node = 0; node < total; ++node)
      t.stacks[l + 1][0][node] = -t.stacks[l][1][node] - tl[node];
    for (int j = 1; j <= t.depth(l + 1); ++j)
      for (int node = 0; node < total; ++node) {
        Matrix acc = -t.stacks[l][j + 1][node];
        for (int i = 0; i <= j - 1; ++i)
          acc += binom(j - 1, i) * (vder[i][node] * t.stacks[l][j - 1 - i][node]);
        t.stacks[l + 1][j][node] = acc;
      }
  }
  return t;
}

CTable c_table(const BTable& b, const BoundaryPair& bc) {
  if (bc.n != b.n) throw ShapeMismatch("c_table: dimension mismatch");
  CTable c;
  c.N = b.N;
  c.c.resize(std::size_t(b.N + 2));
  c.c[0] = -0.5 * bc.A;
  c.c[1] = bc.B - 0.5 * (b.at_zero(1).adjoint() * bc.A);
  for (int l = 1; l <= b.N; ++l)
    c.c[std::size_t(l + 1)] =
        b.at_zero(l).adjoint() * bc.B -
        (0.5 * b.at_zero(l + 1).adjoint() + b.at_zero(l, 1).adjoint()) * bc.A;
  return c;
}

LaurentSeries<Complex> d_table(const CTable& c, int n) {
  if (n < 1) throw ShapeMismatch("d_table: dimension must be positive");
  for (const auto& m : c.c)
    if (m.rows() != n || m.cols() != n)
      throw ShapeMismatch("d_table: coefficient dimension mismatch");
  if (c.N < 0) throw TruncationTooShort("d_table: no coefficients");
  std::vector<std::vector<LaurentSeries<Complex>>> entries(
      static_cast<std::size_t>(n),
      std::vector<LaurentSeries<Complex>>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      LaurentSeries<Complex> s;
      s.lo = -1;
      s.coef.resize(std::size_t(c.N + 2));
      for (int l = -1; l <= c.N; ++l) s.coef[std::size_t(l + 1)] = c.at_power(l)(i, j);
      entries[i][j] = std::move(s);
    }
  return series_determinant(entries);
}

ETable e_table(const LaurentSeries<Complex>& d, int p, double lead_tol) {
  if (d.empty()) throw TruncationTooShort("e_table: empty determinant series");
  double dmax = 0.0;
  for (const auto& z : d.coef) dmax = std::max(dmax, std::abs(z));
  if (dmax == 0.0)
    throw LeadingCoefficientZero("e_table: determinant series is zero");
  if (-p < d.lo || -p > d.hi())
    throw TruncationTooShort("e_table: leading power outside series range");
  const Complex lead = d.at_or_zero(-p);
  if (std::abs(lead) <= lead_tol * dmax)
    throw LeadingCoefficientZero(
        "e_table: |d_{-p}| below tolerance; boundary channel counts suspect");
  for (int l = d.lo; l < -p; ++l)
    if (std::abs(d.at_or_zero(l)) > lead_tol * dmax)
      throw LeadingCoefficientZero(
          "e_table: nonzero coefficient below the expected leading power");

  ETable t;
  t.p = p;
  t.c2 = ipow(2.0 * kImag, p) * lead;

  const int order = d.hi() + p;  // e_1 .. e_order available
  if (order < 1)
    throw TruncationTooShort("e_table: series too short for any e_l");

  // Path 1: the d-recursion.
  t.e.resize(std::size_t(order));
  for (int l = 1; l <= order; ++l) {
    Complex s = d.at_or_zero(l - p);
    for (int j = 1; j <= l - 1; ++j)
      s -= (double(j) / l) * d.at_or_zero(l - p - j) * t.e[std::size_t(j - 1)];
    t.e[std::size_t(l - 1)] = s / lead;
  }

  // Path 2: series logarithm of the normalized determinant.
  LaurentSeries<Complex> h = shifted(d, p);
  h = (1.0 / lead) * h;
  LaurentSeries<Complex> lg = series_log(h.truncated(order), 1e-6);
  t.e_log.resize(std::size_t(order));
  for (int l = 1; l <= order; ++l) t.e_log[std::size_t(l - 1)] = lg.at_or_zero(l);

  for (int l = 1; l <= order; ++l) {
    const double scale = std::max(1.0, std::abs(t.e[std::size_t(l - 1)]));
    t.dual_path_defect =
        std::max(t.dual_path_defect,
                 std::abs(t.e[std::size_t(l - 1)] - t.e_log[std::size_t(l - 1)]) / scale);
  }
  if (t.dual_path_defect > 1e-12)
    throw Error("e_table: recursion and series-log coefficients disagree");
  return t;
}

CoeffTables build_coeff_tables(const PotentialModel& v, const BoundaryPair& bc,
                               int N, double x_max) {
  CoeffTables t;
  t.b = b_table(v, N, x_max);
  t.c = c_table(t.b, bc);
  t.d = d_table(t.c, bc.n);
  DiagonalBC diag = reduce_to_diagonal(bc);
  t.e = e_table(t.d, diag.leading_power());
  return t;
}

RemainderFit m_remainder_check(const PotentialModel& v, int N,
                               const std::vector<double>& ks,
                               const SolveOptions& opt) {
  BTable b = b_table(v, N, 0.0);
  RemainderFit fit;
  for (double k : ks) {
    SolutionSample s = jost_solution(v, Complex(k, 0.0), {}, opt);
    Matrix r = s.m.front();
    for (int l = 0; l <= N; ++l)
      r -= ipow(1.0 / (2.0 * kImag * k), l) * b.at_zero(l);
    fit.k.push_back(k);
    fit.norm.push_back(operator_norm(r));
  }
  // least squares slope of log||r|| against log k
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = static_cast<int>(fit.k.size());
  for (int i = 0; i < m; ++i) {
    const double x = std::log(fit.k[i]);
    const double y = std::log(std::max(fit.norm[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.slope = (m * sxy - sx * sy) / std::max(m * sxx - sx * sx, 1e-300);
  return fit;
}

}  // namespace halfline
