#pragma once

#include <map>
#include <vector>

#include "halfline/bc.hpp"
#include "halfline/potential.hpp"
#include "halfline/series.hpp"
#include "halfline/solve.hpp"
#include "halfline/spectrum.hpp"
#include "halfline/types.hpp"

namespace halfline {

struct TraceOptions {
  double k_min = 0.0;  // 0 = auto: 1e-3 * problem scale
  double k_max = 0.0;  // 0 = auto: |e_2|/(2 k_max)^2 < 1e-8
  double quad_rtol = 1e-9;
  double branch_max_step = 1.5707963267948966;  // pi/2
  int q_max = 4;
  double residual_threshold_rel = 1e-6;
  double residual_threshold_abs = 1e-9;
};

/// Branch-continued logarithm of h on both real half axes. lnh_plus holds
/// ln h(+k), lnh_minus holds ln h(-k), each anchored to 0 at its own
/// infinity; k ascends.
struct LogHProfile {
  std::vector<double> k;
  std::vector<Complex> lnh_plus;
  std::vector<Complex> lnh_minus;
  double k_min = 0.0, k_max = 0.0;

  Complex even(std::size_t i) const {
    return 0.5 * (lnh_plus[i] + lnh_minus[i]);
  }
  Complex odd(std::size_t i) const {
    return 0.5 * (lnh_plus[i] - lnh_minus[i]);
  }
};

/// h(k) = det J(k) / (c2 k^p); direct evaluation, no branch bookkeeping.
Complex h_value(const PotentialModel& v, const BoundaryPair& bc,
                const CoeffTables& tables, double k,
                const SolveOptions& opt = {});

/// Shared evaluation context: profile construction, branch continuation at
/// arbitrary k, memoized Jost determinant evaluations, high-energy series
/// fallback, and the small-k extrapolation model.
class TraceSession {
 public:
  TraceSession(const PotentialModel& v, const BoundaryPair& bc,
               const CoeffTables& tables, const TraceOptions& topt = {},
               const SolveOptions& sopt = {});

  double k_min() const { return k_min_; }
  double k_max() const { return k_max_; }
  double k_hybrid() const { return k_hybrid_; }

  /// Branch-continued ln h at signed real k (k != 0).
  Complex lnh(double k);
  Complex ln_even(double k) { return 0.5 * (lnh(k) + lnh(-k)); }
  Complex ln_odd_negi(double k) {
    return -kImag * 0.5 * (lnh(k) - lnh(-k));
  }

  const LogHProfile& profile();
  const ETable& e() const { return tables_.e; }
  const CoeffTables& tables() const { return tables_; }
  const TraceOptions& options() const { return topt_; }

  /// Truncation value of the asymptotic expansion of ln h at k.
  Complex series_lnh(double k) const;
  /// Magnitude estimate of the first term beyond the available expansion.
  double series_omitted(double k) const;

  double noise_estimate() const { return noise_; }
  long odeevals() const { return evals_; }
  double conj_symmetry_defect();

 private:
  Complex raw_lnh_principal(double k);
  Complex eval_cached(double k);  // branch-continued against the profile
  void build_profile();

  const PotentialModel& v_;
  const BoundaryPair& bc_;
  CoeffTables tables_;
  TraceOptions topt_;
  SolveOptions sopt_;
  double k_min_ = 0.0, k_max_ = 0.0, k_hybrid_ = 0.0, k_low_ = 0.0;
  double noise_ = 1e-15;
  long evals_ = 0;
  bool profile_built_ = false;
  LogHProfile profile_;
  std::map<double, Complex> cache_plus_, cache_minus_;  // key |k|
  Complex model_c_plus_{}, model_c_minus_{};
  double model_s_plus_ = 0.0, model_s_minus_ = 0.0;
};

struct OrderDiagnostics {
  double k_cut = 0.0;
  double quad_error = 0.0;
  double tail_correction = 0.0;
  double tail_error = 0.0;
  double noise_error = 0.0;
  double imag_residual = 0.0;  // |Im| of the computed integral term
  long evals = 0;
  bool budget_ok = true;
};

struct OrderReport {
  int q = 0;
  double eigen_sum = 0.0;
  double integral = 0.0;  // (q/pi) * Re(regularized integral), unsigned
  double rhs = 0.0;
  double lhs = 0.0;
  double residual = 0.0;
  double rel_residual = 0.0;
  OrderDiagnostics diag;
};

OrderReport identity_residual(TraceSession& session,
                              const SpectrumResult& spectrum, int q);

struct TraceReport {
  std::vector<OrderReport> orders;
  ETable e;
  SpectrumResult spectrum;
  double k_min = 0.0, k_max = 0.0;
  double conj_symmetry_defect = 0.0;
  bool all_within_threshold = true;
  bool budget_ok = true;
};

/// Convenience wrapper matching the profile operation of the public surface.
LogHProfile log_h_profile(const PotentialModel& v, const BoundaryPair& bc,
                          const CoeffTables& tables, double k_min, double k_max,
                          const TraceOptions& topt = {},
                          const SolveOptions& sopt = {});

/// Runs spectrum, series and all identity orders q = 1..q_max.
TraceReport full_report(const PotentialModel& v, const BoundaryPair& bc,
                        int q_max, int n_series = 8,
                        const TraceOptions& topt = {},
                        const SolveOptions& sopt = {},
                        const SpectrumOptions& spopt = {});

}  // namespace halfline
