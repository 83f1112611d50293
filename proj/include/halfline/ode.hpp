#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "halfline/errors.hpp"
#include "halfline/types.hpp"

namespace halfline::ode {

struct Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h_max = std::numeric_limits<double>::infinity();
  double h_init = 0.0;  // 0 = auto
  long max_steps = 4'000'000;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double kA2[1] = {1.0 / 5};
inline constexpr double kA3[2] = {3.0 / 40, 9.0 / 40};
inline constexpr double kA4[3] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
inline constexpr double kA5[4] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                                  -212.0 / 729};
inline constexpr double kA6[5] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247,
                                  49.0 / 176, -5103.0 / 18656};
inline constexpr double kB[7] = {35.0 / 384,    0.0,        500.0 / 1113, 125.0 / 192,
                                 -2187.0 / 6784, 11.0 / 84, 0.0};
inline constexpr double kE[7] = {71.0 / 57600,      0.0,
                                 -71.0 / 16695,     71.0 / 1920,
                                 -17253.0 / 339200, 22.0 / 525,
                                 -1.0 / 40};

inline double error_norm(const Matrix& err, const Matrix& y0, const Matrix& y1,
                         double rtol, double atol) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < err.cols(); ++j)
    for (Eigen::Index i = 0; i < err.rows(); ++i) {
      const double sc =
          atol + rtol * std::max(std::abs(y0(i, j)), std::abs(y1(i, j)));
      worst = std::max(worst, std::abs(err(i, j)) / sc);
    }
  return worst;
}

}  // namespace detail

/// Adaptive Dormand-Prince 5(4) over a complex matrix state.
///
/// Integrates y' = f(x, y) through the `stations` abscissae (strictly
/// monotonic, increasing or decreasing); calls sink(x, y) at every station,
/// including the first. Step size never crosses a station.
template <class DerivFn, class SinkFn>
void integrate(DerivFn&& f, Matrix y, const std::vector<double>& stations,
               const Options& opt, SinkFn&& sink) {
  using detail::kA2;
  using detail::kA3;
  using detail::kA4;
  using detail::kA5;
  using detail::kA6;
  using detail::kB;
  using detail::kC;
  using detail::kE;

  if (stations.size() < 2) {
    if (!stations.empty()) sink(stations.front(), y);
    return;
  }
  const double dir = stations.back() > stations.front() ? 1.0 : -1.0;
  double x = stations.front();
  sink(x, y);

  Matrix k[7];
  k[0] = f(x, y);
  long steps = 0;
  const double span = std::fabs(stations.back() - stations.front());
  double h = opt.h_init > 0 ? opt.h_init : std::min(opt.h_max, span / 100.0);
  if (h <= 0) h = span / 100.0;

  for (std::size_t s = 1; s < stations.size(); ++s) {
    const double target = stations[s];
    bool k0_fresh = true;  // k[0] holds f(x, y)
    while (dir * (target - x) > 0) {
      if (++steps > opt.max_steps)
        throw IntegratorFailure("ode: step budget exhausted");
      double hstep = std::min({h, opt.h_max, std::fabs(target - x)});
      if (hstep < 1e-14 * std::max(1.0, std::fabs(x)))
        throw IntegratorFailure("ode: step size collapsed");
      const double hd = dir * hstep;
      if (!k0_fresh) {
        k[0] = f(x, y);
        k0_fresh = true;
      }
      k[1] = f(x + kC[1] * hd, y + hd * (kA2[0] * k[0]));
      k[2] = f(x + kC[2] * hd, y + hd * (kA3[0] * k[0] + kA3[1] * k[1]));
      k[3] = f(x + kC[3] * hd,
               y + hd * (kA4[0] * k[0] + kA4[1] * k[1] + kA4[2] * k[2]));
      k[4] = f(x + kC[4] * hd, y + hd * (kA5[0] * k[0] + kA5[1] * k[1] +
                                         kA5[2] * k[2] + kA5[3] * k[3]));
      k[5] = f(x + hd, y + hd * (kA6[0] * k[0] + kA6[1] * k[1] + kA6[2] * k[2] +
                                 kA6[3] * k[3] + kA6[4] * k[4]));
      Matrix ynew = y + hd * (kB[0] * k[0] + kB[2] * k[2] + kB[3] * k[3] +
                              kB[4] * k[4] + kB[5] * k[5]);
      k[6] = f(x + hd, ynew);
      Matrix err = hd * (kE[0] * k[0] + kE[2] * k[2] + kE[3] * k[3] +
                         kE[4] * k[4] + kE[5] * k[5] + kE[6] * k[6]);
      const double en = detail::error_norm(err, y, ynew, opt.rtol, opt.atol);
      if (en <= 1.0) {
        x += hd;
        if (std::fabs(target - x) <= 1e-14 * std::max(1.0, std::fabs(target)))
          x = target;
        y.swap(ynew);
        k[0] = k[6];  // FSAL
        const double grow =
            en > 0 ? std::min(5.0, 0.9 * std::pow(en, -0.2)) : 5.0;
        h = hstep * grow;
      } else {
        h = hstep * std::max(0.2, 0.9 * std::pow(en, -0.2));
        k0_fresh = true;  // k[0] still valid at (x, y)
      }
    }
    x = target;
    sink(x, y);
  }
}

}  // namespace halfline::ode
