#include "halfline/laurent.hpp"

#include <bit>
#include <cmath>

namespace halfline {

LaurentSeries<Complex> series_determinant(
    const std::vector<std::vector<LaurentSeries<Complex>>>& entries) {
  const int n = static_cast<int>(entries.size());
  for (const auto& row : entries)
    if (static_cast<int>(row.size()) != n)
      throw ShapeMismatch("series_determinant: ragged matrix");
  if (n == 0) return LaurentSeries<Complex>::constant(1.0);

  // D[mask] = det of the submatrix with rows in `mask`, columns 0..|mask|-1.
  std::vector<LaurentSeries<Complex>> D(std::size_t(1) << n);
  D[0] = LaurentSeries<Complex>::constant(1.0);
  for (unsigned mask = 1; mask < D.size(); ++mask) {
    const int col = std::popcount(mask) - 1;
    LaurentSeries<Complex> acc;
    int pos = 0;
    for (int r = 0; r < n; ++r) {
      if (!(mask >> r & 1)) continue;
      const double sgn = ((pos + col) % 2 == 0) ? 1.0 : -1.0;
      LaurentSeries<Complex> term =
          sgn * (entries[r][col] * D[mask & ~(1u << r)]);
      acc = acc.empty() ? term : acc + term;
      ++pos;
    }
    D[mask] = std::move(acc);
  }
  return D.back();
}

LaurentSeries<Complex> series_log(const LaurentSeries<Complex>& s, double tol) {
  if (s.empty() || s.lo > 0 || s.at_or_zero(0) == Complex(0.0))
    throw Error("series_log: series must start at order 0");
  if (std::abs(s.at_or_zero(0) - 1.0) > tol)
    throw Error("series_log: constant term must be 1");
  for (int p = s.lo; p < 0; ++p)
    if (std::abs(s.at_or_zero(p)) > tol)
      throw Error("series_log: negative powers present");

  const int hi = s.unbounded ? 1 : s.hi();
  LaurentSeries<Complex> u;
  u.lo = 1;
  u.coef.assign(static_cast<std::size_t>(std::max(hi, 1)), Complex(0.0));
  for (int p = 1; p <= hi; ++p) u.coef[std::size_t(p - 1)] = s.at_or_zero(p);

  LaurentSeries<Complex> acc = u;
  LaurentSeries<Complex> power = u;
  for (int m = 2; m <= hi; ++m) {
    power = power * u;
    const double c = (m % 2 == 0 ? -1.0 : 1.0) / m;
    acc = acc + (c * power);
  }
  return acc.truncated(hi);
}

}  // namespace halfline
