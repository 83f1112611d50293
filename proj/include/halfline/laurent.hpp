#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "halfline/errors.hpp"
#include "halfline/types.hpp"

namespace halfline {

/// Truncated Laurent series in one formal variable. Coefficients cover the
/// powers [lo, hi()] exactly; everything below lo is zero by convention and
/// everything above hi() is unknown. Arithmetic propagates the reliable
/// truncation order through every operation.
template <class T>
struct LaurentSeries {
  int lo = 0;
  std::vector<T> coef;

  static constexpr int kUnbounded = std::numeric_limits<int>::max() / 4;

  int hi() const { return lo + static_cast<int>(coef.size()) - 1; }
  bool empty() const { return coef.empty(); }

  static LaurentSeries constant(T value, int hi_order = kUnbounded) {
    LaurentSeries s;
    s.lo = 0;
    if (hi_order >= kUnbounded) {
      s.unbounded = true;
      s.coef = {value};
    } else {
      s.coef.assign(static_cast<std::size_t>(hi_order + 1), value * 0.0);
      s.coef[0] = value;
    }
    return s;
  }

  bool unbounded = false;  // constants carry no truncation ceiling

  const T& at(int power) const {
    return coef.at(static_cast<std::size_t>(power - lo));
  }

  T at_or_zero(int power) const {
    if (power < lo || power > hi()) return coef.front() * 0.0;
    return coef[static_cast<std::size_t>(power - lo)];
  }

  LaurentSeries truncated(int new_hi) const {
    LaurentSeries s = *this;
    s.unbounded = false;
    if (new_hi < s.hi())
      s.coef.resize(static_cast<std::size_t>(new_hi - s.lo + 1));
    return s;
  }
};

template <class T>
LaurentSeries<T> operator+(const LaurentSeries<T>& a, const LaurentSeries<T>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  LaurentSeries<T> s;
  s.lo = std::min(a.lo, b.lo);
  const int hi = (a.unbounded && b.unbounded)
                     ? std::max(a.hi(), b.hi())
                     : std::min(a.unbounded ? LaurentSeries<T>::kUnbounded : a.hi(),
                                b.unbounded ? LaurentSeries<T>::kUnbounded : b.hi());
  s.unbounded = a.unbounded && b.unbounded;
  s.coef.assign(static_cast<std::size_t>(hi - s.lo + 1), a.coef.front() * 0.0);
  for (int p = s.lo; p <= hi; ++p)
    s.coef[std::size_t(p - s.lo)] = a.at_or_zero(p) + b.at_or_zero(p);
  return s;
}

template <class T>
LaurentSeries<T> operator-(const LaurentSeries<T>& a, const LaurentSeries<T>& b) {
  LaurentSeries<T> nb = b;
  for (auto& c : nb.coef) c = c * (-1.0);
  return a + nb;
}

template <class T, class S>
LaurentSeries<T> operator*(const S& scalar, const LaurentSeries<T>& a) {
  LaurentSeries<T> s = a;
  for (auto& c : s.coef) c = scalar * c;
  return s;
}

template <class T>
LaurentSeries<T> operator*(const LaurentSeries<T>& a, const LaurentSeries<T>& b) {
  if (a.empty() || b.empty()) throw Error("laurent: empty operand");
  LaurentSeries<T> s;
  s.lo = a.lo + b.lo;
  long hi;
  if (a.unbounded && b.unbounded) {
    hi = a.hi() + b.hi();
    s.unbounded = true;
  } else if (a.unbounded) {
    hi = long(a.lo) + b.hi();
  } else if (b.unbounded) {
    hi = long(b.lo) + a.hi();
  } else {
    hi = std::min(long(a.lo) + b.hi(), long(b.lo) + a.hi());
  }
  if (hi < s.lo) hi = s.lo;  // keep at least the leading coefficient slot
  s.coef.assign(static_cast<std::size_t>(hi - s.lo + 1), a.coef.front() * 0.0);
  for (int i = 0; i < static_cast<int>(a.coef.size()); ++i)
    for (int j = 0; j < static_cast<int>(b.coef.size()); ++j) {
      const int p = a.lo + i + b.lo + j;
      if (p > hi) break;
      s.coef[std::size_t(p - s.lo)] += a.coef[i] * b.coef[j];
    }
  return s;
}

/// Multiply by z^m.
template <class T>
LaurentSeries<T> shifted(const LaurentSeries<T>& a, int m) {
  LaurentSeries<T> s = a;
  s.lo += m;
  return s;
}

/// Determinant of an n x n matrix of scalar series, by Laplace expansion
/// with subset memoization (exact in the truncated-series ring; no division).
LaurentSeries<Complex> series_determinant(
    const std::vector<std::vector<LaurentSeries<Complex>>>& entries);

/// log of a series with constant term 1 (|s_0 - 1| <= tol), via the power
/// expansion of log(1 + u); truncation order carried through.
LaurentSeries<Complex> series_log(const LaurentSeries<Complex>& s,
                                  double tol = 1e-9);

/// Test/diagnostic helper: evaluate at a point.
inline Complex series_eval(const LaurentSeries<Complex>& s, Complex z) {
  Complex acc = 0.0;
  for (int i = static_cast<int>(s.coef.size()) - 1; i >= 0; --i)
    acc = acc * z + s.coef[i];
  return acc * ipow(z, s.lo);
}

}  // namespace halfline
