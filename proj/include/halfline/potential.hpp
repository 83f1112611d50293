#pragma once

#include <vector>

#include "halfline/types.hpp"

namespace halfline {

enum class ProfileKind { Exponential, Power, Gaussian, Well };

/// Scalar decay profile with closed-form derivatives and tail integrals.
/// Exponential: c*exp(-alpha*x); Power: c*(1+x)^(-p); Gaussian:
/// c*exp(-alpha*x^2); Well: c on [0, radius], 0 beyond (not differentiable).
struct Profile {
  ProfileKind kind = ProfileKind::Exponential;
  double c = 1.0;
  double param = 1.0;  // alpha, p, or radius

  double eval(double x, int j = 0) const;
  double tail_l1(double x) const;            // int_x^inf |profile|
  double tail_first_moment(double x) const;  // int_x^inf (1+y)|profile|
  int max_derivative() const;
  double sup_abs() const { return std::abs(c); }
};

struct PotentialTerm {
  Matrix H;
  Profile profile;
};

struct PotentialModel {
  int n = 1;
  double rho = 2.0;  // declared decay exponent, in (1, 2]
  std::vector<PotentialTerm> terms;
  int max_derivative = 0;
};

/// Validates shapes, Hermiticity of every coefficient matrix, and the
/// declared decay exponent.
PotentialModel make_potential(int n, double rho, std::vector<PotentialTerm> terms);

inline PotentialModel zero_potential(int n) { return make_potential(n, 2.0, {}); }

/// V^(j)(x) = sum_t H_t * profile_t^(j)(x).
Matrix evaluate(const PotentialModel& v, double x, int j = 0);

/// sup over x >= 0 of an upper bound on ||V(x)||.
double sup_norm_bound(const PotentialModel& v);

struct DecayReport {
  double faddeev_norm = 0.0;  // int (1+x)||V||
  double l1_norm = 0.0;       // int ||V||
  double error_estimate = 0.0;
  std::vector<std::pair<double, Profile>> term_bounds;  // (||H_t||, profile)

  /// Upper bound on int_x^inf ||V||; monotone nonincreasing in x.
  double tail(double x) const;
  double tail_first_moment(double x) const;
};

DecayReport decay_report(const PotentialModel& v, double rtol = 1e-11);

/// Smallest x with first-moment tail below tail_tol (capped); throws
/// TailTooShort when the cap cannot meet the tolerance.
double select_x_max(const PotentialModel& v, double tail_tol,
                    double x_cap = 2000.0);

/// Checks |profile^(j)| <= C_j (1+x)^(-rho-j) on a verification grid for
/// j = 0..j_max; returns the largest observed ratio against the j = 0
/// constant (finite and modest when the declared rho is honest).
double verify_decay_bound(const PotentialModel& v, int j_max = 4);

}  // namespace halfline
