#include "halfline/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "halfline/errors.hpp"
#include "halfline/quadrature.hpp"

namespace halfline {

namespace {

constexpr int kUnlimitedDerivatives = 1 << 20;
constexpr double kPi = 3.14159265358979323846;

double falling_power_coeff(double p, int j) {
  // p (p+1) ... (p+j-1)
  double r = 1.0;
  for (int i = 0; i < j; ++i) r *= p + i;
  return r;
}

// Coefficients of the polynomial Q_j with d^j/dx^j exp(-a x^2)
// = Q_j(x) exp(-a x^2); recursion Q_{j+1} = Q_j' - 2 a x Q_j.
std::vector<double> gaussian_poly(double a, int j) {
  std::vector<double> q{1.0};
  for (int step = 0; step < j; ++step) {
    std::vector<double> next(q.size() + 1, 0.0);
    for (std::size_t m = 1; m < q.size(); ++m) next[m - 1] += m * q[m];
    for (std::size_t m = 0; m < q.size(); ++m) next[m + 1] -= 2.0 * a * q[m];
    q.swap(next);
  }
  return q;
}

double polyval(const std::vector<double>& q, double x) {
  double r = 0.0;
  for (std::size_t m = q.size(); m-- > 0;) r = r * x + q[m];
  return r;
}

}  // namespace

double Profile::eval(double x, int j) const {
  switch (kind) {
    case ProfileKind::Exponential: {
      double s = c * std::exp(-param * x);
      return (j % 2 == 0 ? 1.0 : -1.0) * std::pow(param, j) * s;
    }
    case ProfileKind::Power: {
      const double base = std::pow(1.0 + x, -param - j);
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      return c * sign * falling_power_coeff(param, j) * base;
    }
    case ProfileKind::Gaussian: {
      if (j == 0) return c * std::exp(-param * x * x);
      return c * polyval(gaussian_poly(param, j), x) * std::exp(-param * x * x);
    }
    case ProfileKind::Well:
      if (j > 0) throw DerivativeUnavailable("well profile has no derivatives");
      return x <= param ? c : 0.0;
  }
  return 0.0;
}

double Profile::tail_l1(double x) const {
  const double a = std::abs(c);
  switch (kind) {
    case ProfileKind::Exponential:
      return a / param * std::exp(-param * x);
    case ProfileKind::Power:
      if (param <= 1.0) return std::numeric_limits<double>::infinity();
      return a * std::pow(1.0 + x, 1.0 - param) / (param - 1.0);
    case ProfileKind::Gaussian: {
      const double s = std::sqrt(param);
      return a * 0.5 * std::sqrt(kPi / param) * std::erfc(s * x);
    }
    case ProfileKind::Well:
      return a * std::max(0.0, param - x);
  }
  return 0.0;
}

double Profile::tail_first_moment(double x) const {
  const double a = std::abs(c);
  switch (kind) {
    case ProfileKind::Exponential:
      return a * std::exp(-param * x) * ((1.0 + x) / param + 1.0 / (param * param));
    case ProfileKind::Power:
      if (param <= 2.0) return std::numeric_limits<double>::infinity();
      return a * std::pow(1.0 + x, 2.0 - param) / (param - 2.0);
    case ProfileKind::Gaussian: {
      const double s = std::sqrt(param);
      return a * (0.5 * std::sqrt(kPi / param) * std::erfc(s * x) +
                  std::exp(-param * x * x) / (2.0 * param));
    }
    case ProfileKind::Well: {
      if (x >= param) return 0.0;
      return a * ((param - x) + 0.5 * (param * param - x * x));
    }
  }
  return 0.0;
}

int Profile::max_derivative() const {
  return kind == ProfileKind::Well ? 0 : kUnlimitedDerivatives;
}

PotentialModel make_potential(int n, double rho, std::vector<PotentialTerm> terms) {
  if (n < 1) throw ShapeMismatch("potential: channel count must be positive");
  if (!(rho > 1.0 && rho <= 2.0))
    throw Error("potential: decay exponent rho must lie in (1, 2]");
  PotentialModel v;
  v.n = n;
  v.rho = rho;
  v.max_derivative = kUnlimitedDerivatives;
  for (auto& t : terms) {
    if (t.H.rows() != n || t.H.cols() != n)
      throw ShapeMismatch("potential: coefficient matrix is not n x n");
    if (!is_hermitian(t.H, 1e-13))
      throw Error("potential: coefficient matrix is not Hermitian");
    t.H = 0.5 * (t.H + t.H.adjoint().eval());
    if (t.profile.kind == ProfileKind::Power && t.profile.param < rho)
      throw Error("potential: power profile decays slower than declared rho");
    if ((t.profile.kind == ProfileKind::Exponential ||
         t.profile.kind == ProfileKind::Gaussian) &&
        t.profile.param <= 0.0)
      throw Error("potential: decay rate must be positive");
    v.max_derivative = std::min(v.max_derivative, t.profile.max_derivative());
    v.terms.push_back(std::move(t));
  }
  return v;
}

Matrix evaluate(const PotentialModel& v, double x, int j) {
  if (x < 0) throw Error("potential: x must be nonnegative");
  if (j < 0 || j > v.max_derivative)
    throw DerivativeUnavailable("potential: derivative order not available");
  Matrix out = Matrix::Zero(v.n, v.n);
  for (const auto& t : v.terms) out += t.H * t.profile.eval(x, j);
  return out;
}

double sup_norm_bound(const PotentialModel& v) {
  double s = 0.0;
  for (const auto& t : v.terms) s += operator_norm(t.H) * t.profile.sup_abs();
  return s;
}

double DecayReport::tail(double x) const {
  double s = 0.0;
  for (const auto& [h, prof] : term_bounds) s += h * prof.tail_l1(x);
  return s;
}

double DecayReport::tail_first_moment(double x) const {
  double s = 0.0;
  for (const auto& [h, prof] : term_bounds) s += h * prof.tail_first_moment(x);
  return s;
}

DecayReport decay_report(const PotentialModel& v, double rtol) {
  DecayReport rep;
  for (const auto& t : v.terms)
    rep.term_bounds.emplace_back(operator_norm(t.H), t.profile);
  if (v.terms.empty()) return rep;

  for (const auto& [h, prof] : rep.term_bounds) {
    if (h > 0 && !std::isfinite(prof.tail_first_moment(0.0)))
      throw NotFaddeev("potential: first moment of ||V|| diverges");
  }

  // Truncation point: term-wise closed-form tails below the quadrature
  // tolerance, or the cap (the closed-form tail is then added as a
  // correction; exact for a single term, an upper bound otherwise).
  double X = 1.0;
  const double cap = 1e6;
  while (X < cap && rep.tail_first_moment(X) >
                        1e-3 * rtol * std::max(1.0, rep.tail_first_moment(0.0)))
    X *= 2.0;

  auto vnorm = [&](double x) {
    Matrix m = Matrix::Zero(v.n, v.n);
    for (const auto& t : v.terms) m += t.H * t.profile.eval(x, 0);
    return operator_norm(m);
  };
  auto est_l1 = quad::adaptive([&](double x) { return vnorm(x); }, 0.0, X,
                               rtol, 1e-300, 20000);
  auto est_fm = quad::adaptive([&](double x) { return (1.0 + x) * vnorm(x); },
                               0.0, X, rtol, 1e-300, 20000);
  const double tail_l1 = rep.tail(X);
  const double tail_fm = rep.tail_first_moment(X);
  rep.l1_norm = est_l1.value + tail_l1;
  rep.faddeev_norm = est_fm.value + tail_fm;
  // For several distinct profiles the triangle-inequality tail may
  // overestimate; count it toward the error budget.
  const double tail_gap = v.terms.size() > 1 ? tail_fm : 0.0;
  rep.error_estimate = est_l1.error + est_fm.error + tail_gap;
  return rep;
}

double select_x_max(const PotentialModel& v, double tail_tol, double x_cap) {
  if (v.terms.empty()) return 1.0;
  auto tail = [&](double x) {
    double s = 0.0;
    for (const auto& t : v.terms)
      s += operator_norm(t.H) * t.profile.tail_first_moment(x);
    return s;
  };
  if (tail(0.0) <= tail_tol) return 1.0;
  if (tail(x_cap) > tail_tol)
    throw TailTooShort("potential: tail tolerance unreachable below x cap");
  double lo = 0.0, hi = x_cap;
  for (int i = 0; i < 200 && hi - lo > 1e-3 * (1.0 + hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) > tail_tol ? lo : hi) = mid;
  }
  return hi;
}

double verify_decay_bound(const PotentialModel& v, int j_max) {
  double worst = 0.0;
  for (const auto& t : v.terms) {
    for (int j = 0; j <= std::min(j_max, t.profile.max_derivative()); ++j) {
      double cj = 0.0;
      for (double x = 0.0; x <= 50.0; x += 0.25) {
        const double bound = std::pow(1.0 + x, -v.rho - j);
        cj = std::max(cj, std::abs(t.profile.eval(x, j)) / bound);
      }
      const double c0 = std::max(std::abs(t.profile.c), 1e-300);
      worst = std::max(worst, cj / c0);
    }
  }
  return worst;
}

}  // namespace halfline
