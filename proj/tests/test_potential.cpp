#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "halfline/errors.hpp"
#include "halfline/potential.hpp"
#include "halfline/quadrature.hpp"
#include "helpers.hpp"

using namespace halfline;
using namespace halfline::testing;

TEST_CASE("zero-term model evaluates to zero") {
  PotentialModel v = zero_potential(2);
  for (double x : {0.0, 1.0, 7.5})
    for (int j : {0, 1, 3})
      CHECK(evaluate(v, x, j).norm() == 0.0);
}

TEST_CASE("exponential derivative at the origin") {
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = 1.0;
  h(1, 1) = 2.0;
  PotentialModel v =
      make_potential(2, 2.0, {{h, {ProfileKind::Exponential, 1.0, 1.0}}});
  Matrix d1 = evaluate(v, 0.0, 1);
  CHECK(std::abs(d1(0, 0) - Complex(-1.0)) < 1e-15);
  CHECK(std::abs(d1(1, 1) - Complex(-2.0)) < 1e-15);
}

TEST_CASE("power profile second derivative matches the closed form and FD") {
  Matrix h = Matrix::Identity(1, 1);
  PotentialModel v = make_potential(1, 2.0, {{h, {ProfileKind::Power, 1.0, 3.0}}});
  // (1+x)^-3: d2/dx2 = 12 (1+x)^-5; at x = 1: 12 / 32
  const double expect = 12.0 * std::pow(2.0, -5.0);
  CHECK(std::abs(evaluate(v, 1.0, 2)(0, 0) - expect) < 1e-14);
  const double fd = (evaluate(v, 1.0 + 1e-5, 1)(0, 0).real() -
                     evaluate(v, 1.0 - 1e-5, 1)(0, 0).real()) /
                    2e-5;
  CHECK(std::fabs(fd - expect) < 1e-8);
}

TEST_CASE("analytic derivatives agree with central differences across kinds") {
  std::vector<Profile> profs = {{ProfileKind::Exponential, -2.0, 1.3},
                                {ProfileKind::Power, 0.7, 4.0},
                                {ProfileKind::Gaussian, 1.5, 0.8}};
  for (const auto& p : profs)
    for (int j = 0; j <= 6; ++j)
      for (double x : {0.3, 1.0, 2.7}) {
        const double hstep = 1e-5;
        const double fd =
            (p.eval(x + hstep, j) - p.eval(x - hstep, j)) / (2 * hstep);
        const double an = p.eval(x, j + 1);
        CHECK(std::fabs(fd - an) <= 1e-7 * (1.0 + std::fabs(an)));
      }
}

TEST_CASE("well profile refuses derivatives") {
  Profile w{ProfileKind::Well, -5.0, 2.0};
  CHECK(w.eval(1.0) == -5.0);
  CHECK(w.eval(3.0) == 0.0);
  CHECK(w.max_derivative() == 0);
  CHECK_THROWS_AS(w.eval(1.0, 1), DerivativeUnavailable);
  Matrix h = Matrix::Identity(1, 1);
  PotentialModel v = make_potential(1, 2.0, {{h, w}});
  CHECK(v.max_derivative == 0);
}

TEST_CASE("decay report closed forms") {
  SUBCASE("zero potential") {
    DecayReport rep = decay_report(zero_potential(2));
    CHECK(rep.l1_norm == 0.0);
    CHECK(rep.faddeev_norm == 0.0);
  }
  SUBCASE("scalar exponential") {
    // V = e^-x: int ||V|| = 1, int (1+x)||V|| = 2
    DecayReport rep = decay_report(scalar_exp(1.0));
    CHECK(std::fabs(rep.l1_norm - 1.0) < 1e-10);
    CHECK(std::fabs(rep.faddeev_norm - 2.0) < 1e-10);
  }
  SUBCASE("borderline power decay is rejected") {
    Matrix h = Matrix::Identity(1, 1);
    PotentialModel v =
        make_potential(1, 2.0, {{h, {ProfileKind::Power, 1.0, 2.0}}});
    CHECK_THROWS_AS(decay_report(v), NotFaddeev);
  }
}

TEST_CASE("hermiticity holds at random sample points") {
  PotentialModel v = coupled_2x2_exp();
  std::uniform_real_distribution<double> ux(0.0, 20.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Matrix m = evaluate(v, ux(rng()), 0);
    worst = std::max(worst, (m - m.adjoint().eval()).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("non-hermitian coefficient matrices are rejected") {
  Matrix h(2, 2);
  h << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 2.0;  // H^dagger != H
  CHECK_THROWS_AS(
      make_potential(2, 2.0, {{h, {ProfileKind::Exponential, 1.0, 1.0}}}),
      Error);
}

TEST_CASE("tail bound is monotone and brackets the quadrature") {
  PotentialModel v = coupled_2x2_exp();
  DecayReport rep = decay_report(v);
  double prev = rep.tail(0.0);
  for (double x = 0.5; x < 30.0; x += 0.5) {
    const double t = rep.tail(x);
    CHECK(t <= prev * (1.0 + 1e-12));
    prev = t;
  }
  // upper-bound property against direct quadrature of ||V||
  auto exact = quad::decaying_tail(
      [&](double x) { return operator_norm(evaluate(v, x)); }, 3.0, 1e-11);
  CHECK(rep.tail(3.0) >= exact.value - 1e-12);
}

TEST_CASE("x_max selection meets the requested tail tolerance") {
  PotentialModel v = scalar_exp(2.0, 1.0);
  const double x = select_x_max(v, 1e-10);
  DecayReport rep = decay_report(v);
  CHECK(rep.tail_first_moment(x) <= 1e-10 * 1.0001);
  CHECK(rep.tail_first_moment(x * 0.9) > 1e-10);
  // unreachable tolerance under the cap
  Matrix h = Matrix::Identity(1, 1);
  PotentialModel slow =
      make_potential(1, 2.0, {{h, {ProfileKind::Power, 1.0, 3.0}}});
  CHECK_THROWS_AS(select_x_max(slow, 1e-10, 100.0), TailTooShort);
}

TEST_CASE("declared decay bound verification") {
  PotentialModel v = coupled_2x2_exp();
  CHECK(verify_decay_bound(v, 3) < 1e6);  // finite, no blowup
  CHECK(std::isfinite(verify_decay_bound(v, 3)));
}
