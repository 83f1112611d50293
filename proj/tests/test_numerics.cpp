#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "halfline/chebpanel.hpp"
#include "halfline/laurent.hpp"
#include "halfline/ode.hpp"
#include "halfline/quadrature.hpp"
#include "helpers.hpp"

using namespace halfline;

TEST_CASE("gk15 integrates smooth functions") {
  auto est = quad::gk15([](double x) { return std::sin(x); }, 0.0, 3.14159265358979323846);
  CHECK(est.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("adaptive quadrature hits tight tolerances") {
  auto est = quad::adaptive([](double x) { return std::exp(-x) * std::cos(10 * x); },
                            0.0, 30.0, 1e-12, 1e-14);
  // int_0^inf e^-x cos(10 x) = 1/101
  CHECK(std::fabs(est.value - 1.0 / 101.0) < 1e-12);
}

TEST_CASE("tanh-sinh handles the log endpoint singularity") {
  // int_0^1 log(x) dx = -1
  auto est = quad::tanh_sinh([](double x) { return std::log(x); }, 0.0, 1.0, 1e-12);
  CHECK(std::fabs(est.value + 1.0) < 1e-11);
  // int_0^1 log(1 + c^2/x^2)-style integrand appears in the q = 1 identity
  const double c = 3.0;
  auto est2 = quad::tanh_sinh(
      [&](double x) { return 0.5 * std::log(1.0 + c * c / (x * x)); }, 0.0, 1.0,
      1e-12);
  // antiderivative: x/2 log(1+c^2/x^2) + c atan(x/c), evaluated on [0, 1]
  const double exact = 0.5 * std::log(1.0 + 9.0) + c * std::atan(1.0 / c);
  CHECK(std::fabs(est2.value - exact) < 1e-11);
}

TEST_CASE("decaying tail quadrature") {
  auto est = quad::decaying_tail([](double x) { return std::exp(-0.5 * x); }, 2.0,
                                 1e-12);
  CHECK(std::fabs(est.value - 2.0 * std::exp(-1.0)) < 1e-11);
}

TEST_CASE("chebyshev panel tail weights reproduce partial integrals") {
  auto g = cheb::make_panel_grid(8.0, 20);
  // f(x) = exp(-x): int_x^edge exp(-t) dt known per panel
  for (int p = 0; p < g.panel_count(); ++p) {
    const int npp = g.nodes_per_panel();
    const double hw = g.half_width(p);
    const double right = g.edges[p + 1];
    for (int i = 0; i < npp; ++i) {
      double acc = 0.0;
      for (int jj = 0; jj < npp; ++jj)
        acc += g.tail_weights(i, jj) * std::exp(-g.nodes[p * npp + jj]);
      acc *= hw;
      const double x = g.nodes[p * npp + i];
      const double exact = std::exp(-x) - std::exp(-right);
      CHECK(std::fabs(acc - exact) < 1e-13);
    }
  }
}

TEST_CASE("dormand-prince reproduces closed-form linear dynamics") {
  // y'' = -y, y(0) = 1, y'(0) = 0  ->  y = cos grid
  Matrix y0(2, 1);
  y0(0, 0) = 1.0;
  y0(1, 0) = 0.0;
  auto f = [](double, const Matrix& y) {
    Matrix d(2, 1);
    d(0, 0) = y(1, 0);
    d(1, 0) = -y(0, 0);
    return d;
  };
  std::vector<double> pts{0.0, 1.0, 5.0, 10.0};
  ode::Options opt;
  opt.rtol = opt.atol = 1e-12;
  ode::integrate(f, y0, pts, opt, [&](double x, const Matrix& y) {
    CHECK(std::abs(y(0, 0) - std::cos(x)) < 1e-10);
  });
}

TEST_CASE("ode integrator runs station grids in both directions") {
  auto f = [](double x, const Matrix& y) {
    Matrix d(1, 1);
    d(0, 0) = Complex(0.0, 1.0) * y(0, 0) * x;  // y = exp(i x^2 / 2)
    return d;
  };
  Matrix y0 = Matrix::Ones(1, 1);
  std::vector<double> back{6.0, 3.0, 0.0};
  ode::Options opt;
  opt.rtol = opt.atol = 1e-12;
  double seen = 0;
  ode::integrate(f, y0, back, opt, [&](double x, const Matrix& y) {
    const Complex exact = std::exp(Complex(0.0, 0.5) * (x * x - 36.0));
    CHECK(std::abs(y(0, 0) - exact) < 1e-9);
    ++seen;
  });
  CHECK(seen == 3);
}

TEST_CASE("laurent arithmetic tracks truncation") {
  LaurentSeries<Complex> a;  // z^-1 + 2 + 3z, reliable through z^1
  a.lo = -1;
  a.coef = {1.0, 2.0, 3.0};
  auto prod = a * a;
  CHECK(prod.lo == -2);
  CHECK(prod.hi() == 0);  // min(-1 + 1, -1 + 1)
  CHECK(prod.at_or_zero(-2) == Complex(1.0));
  CHECK(prod.at_or_zero(-1) == Complex(4.0));
  CHECK(prod.at_or_zero(0) == Complex(10.0));
}

TEST_CASE("series determinant equals the permutation expansion") {
  using testing::rng;
  std::normal_distribution<double> d(0.0, 1.0);
  for (int n : {2, 3, 4}) {
    const int N = 6;
    std::vector<std::vector<LaurentSeries<Complex>>> entries(
        static_cast<std::size_t>(n),
        std::vector<LaurentSeries<Complex>>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        LaurentSeries<Complex> s;
        s.lo = -1;
        for (int l = -1; l <= N; ++l)
          s.coef.push_back(Complex(d(rng()), d(rng())));
        entries[i][j] = s;
      }
    auto det = series_determinant(entries);

    // brute-force permutation sum with constrained index sums
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    const int lo = -n, hi = det.hi();
    std::vector<Complex> dref(std::size_t(hi - lo + 1), Complex(0.0));
    auto sign_of = [](std::vector<int> p) {
      int s = 1;
      for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
          if (p[i] > p[j]) s = -s;
      return s;
    };
    do {
      const int sgn = sign_of(perm);
      // enumerate l_i >= -1 with sum = l for every reachable l
      std::vector<int> li(std::size_t(n), -1);
      for (;;) {
        int sum = 0;
        for (int v : li) sum += v;
        if (sum >= lo && sum <= hi) {
          Complex prod = double(sgn);
          for (int i = 0; i < n; ++i)
            prod *= entries[i][std::size_t(perm[i])].at_or_zero(li[std::size_t(i)]);
          dref[std::size_t(sum - lo)] += prod;
        }
        int pos = 0;
        while (pos < n && li[std::size_t(pos)] == N) {
          li[std::size_t(pos)] = -1;
          ++pos;
        }
        if (pos == n) break;
        ++li[std::size_t(pos)];
      }
    } while (std::next_permutation(perm.begin(), perm.end()));

    for (int l = lo; l <= hi; ++l)
      CHECK(std::abs(det.at_or_zero(l) - dref[std::size_t(l - lo)]) < 1e-12 *
                (1.0 + std::abs(dref[std::size_t(l - lo)])));
  }
}

TEST_CASE("series log matches the closed form") {
  // s = 1 + 6z: log s has coefficients (-1)^(l+1) 6^l / l
  LaurentSeries<Complex> s;
  s.lo = 0;
  s.coef = {1.0, 6.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  auto lg = series_log(s);
  for (int l = 1; l <= 6; ++l) {
    const double expect = ((l % 2 == 1) ? 1.0 : -1.0) * std::pow(6.0, l) / l;
    CHECK(std::abs(lg.at_or_zero(l) - expect) <
          1e-12 * (1.0 + std::fabs(expect)));
  }
}
