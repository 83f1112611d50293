#pragma once

#include <cmath>
#include <complex>
#include <queue>
#include <type_traits>
#include <vector>

#include "halfline/errors.hpp"

namespace halfline::quad {

inline double norm_of(double x) { return std::fabs(x); }
inline double norm_of(const std::complex<double>& z) { return std::abs(z); }

template <class F>
using value_t = std::invoke_result_t<F, double>;

template <class V>
struct Estimate {
  V value{};
  double error = 0.0;
  long evals = 0;
};

namespace detail {

// 15-point Kronrod nodes (positive half) and weights, 7-point Gauss weights.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

/// One Gauss-Kronrod 15(7) panel; error from |K15 - G7|.
template <class F, class V = value_t<F>>
Estimate<V> gk15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  V fc = f(c);
  V resk = detail::kWgk[7] * fc;
  V resg = detail::kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * detail::kXgk[j];
    V f1 = f(c - dx);
    V f2 = f(c + dx);
    resk += detail::kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += detail::kWg[j / 2] * (f1 + f2);
  }
  Estimate<V> out;
  out.value = resk * h;
  out.error = norm_of((resk - resg) * h);
  out.evals = 15;
  return out;
}

/// Globally adaptive Gauss-Kronrod on [a, b]: splits the worst panel first.
template <class F, class V = value_t<F>>
Estimate<V> adaptive(F&& f, double a, double b, double rtol = 1e-10,
                     double atol = 0.0, int max_panels = 4000) {
  struct Panel {
    double a, b, error;
    V value;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  std::priority_queue<Panel> heap;
  auto first = gk15(f, a, b);
  long evals = first.evals;
  heap.push({a, b, first.error, first.value});
  V total = first.value;
  double total_err = first.error;
  int panels = 1;
  while (total_err > std::max(atol, rtol * norm_of(total)) &&
         panels < max_panels) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);  // interval at rounding floor
      break;
    }
    auto left = gk15(f, worst.a, mid);
    auto right = gk15(f, mid, worst.b);
    evals += left.evals + right.evals;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push({worst.a, mid, left.error, left.value});
    heap.push({mid, worst.b, right.error, right.value});
    ++panels;
  }
  if (panels >= max_panels)
    throw QuadratureFailure("adaptive quadrature: panel budget exhausted");
  Estimate<V> out;
  out.value = total;
  out.error = total_err;
  out.evals = evals;
  return out;
}

/// Double-exponential rule on [a, b]; handles integrable endpoint
/// singularities (log, mild power). Nodes near the endpoints are generated
/// from the distance to the endpoint, so x never collapses onto a or b.
template <class F, class V = value_t<F>>
Estimate<V> tanh_sinh(F&& f, double a, double b, double tol = 1e-11,
                      int max_level = 12) {
  const double w = b - a;
  const double pi_half = 1.5707963267948966;
  auto node = [&](double u, double& x, double& weight) {
    // t in (0,1): fractional position, computed stably on both sides.
    const double s = pi_half * std::sinh(u);
    const double tl = 1.0 / (1.0 + std::exp(2.0 * s));   // distance from b side
    const double tr = 1.0 / (1.0 + std::exp(-2.0 * s));  // distance from a side
    x = (u >= 0) ? b - w * tl : a + w * tr;
    const double ch = std::cosh(s);
    weight = w * pi_half * std::cosh(u) / (2.0 * ch * ch);
  };

  double h = 1.0;
  double x0, w0;
  node(0.0, x0, w0);
  V sum = w0 * f(x0);
  long evals = 1;
  for (int j = 1; j <= 5; ++j) {  // coarsest level: all integer abscissae
    double xp, wp, xm, wm;
    node(j * h, xp, wp);
    node(-j * h, xm, wm);
    if (wp < 1e-300 && wm < 1e-300) break;
    V term = wp * f(xp) + wm * f(xm);
    evals += 2;
    if (!std::isfinite(norm_of(term))) break;
    sum += term;
  }
  double prev_norm = norm_of(sum) * h;
  double err = prev_norm;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    V add{};
    // new nodes at odd multiples of h
    for (int j = 1;; j += 2) {
      const double u = j * h;
      if (u > 5.0) break;
      double xp, wp, xm, wm;
      node(u, xp, wp);
      node(-u, xm, wm);
      if (wp < 1e-300 && wm < 1e-300) break;
      V term = wp * f(xp) + wm * f(xm);
      evals += 2;
      if (!std::isfinite(norm_of(term))) break;  // underflow fringe
      add += term;
      if (norm_of(term) < 1e-18 * (norm_of(sum) + norm_of(add)) && j > 7) break;
      if (j > 4000) break;
    }
    sum += add;
    const double cur = norm_of(sum) * h;
    err = std::fabs(cur - prev_norm);
    prev_norm = cur;
    if (level >= 3 && err <= tol * std::max(1.0, cur)) {
      Estimate<V> out;
      out.value = sum * h;
      out.error = err;
      out.evals = evals;
      return out;
    }
  }
  Estimate<V> out;
  out.value = sum * h;
  out.error = err;
  out.evals = evals;
  return out;
}

/// Integral over [a, infinity) of a decaying integrand: geometric panels of
/// doubling width until a panel is negligible against the running total.
template <class F, class V = value_t<F>>
Estimate<V> decaying_tail(F&& f, double a, double rtol = 1e-11,
                          double atol = 1e-300, int max_panels = 60) {
  V total{};
  double err = 0.0;
  long evals = 0;
  double left = a;
  double width = std::max(1.0, std::fabs(a) * 0.5);
  for (int p = 0; p < max_panels; ++p) {
    auto est = adaptive(f, left, left + width, rtol, atol, 800);
    total += est.value;
    err += est.error;
    evals += est.evals;
    if (p >= 2 && norm_of(est.value) <=
                      std::max(atol, 0.25 * rtol * norm_of(total)))
      return {total, err, evals};
    left += width;
    width *= 2.0;
  }
  throw QuadratureFailure("decaying_tail: integrand does not decay fast enough");
}

}  // namespace halfline::quad
