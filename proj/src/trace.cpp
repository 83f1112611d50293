#include "halfline/trace.hpp"

#include <algorithm>
#include <cmath>

#include "halfline/errors.hpp"
#include "halfline/quadrature.hpp"

namespace halfline {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

Complex h_value(const PotentialModel& v, const BoundaryPair& bc,
                const CoeffTables& tables, double k, const SolveOptions& opt) {
  if (k == 0.0) throw ZeroWavenumberOnAxis("h_value: k must be nonzero");
  const JostEval je = jost_matrix(v, bc, Complex(k, 0.0), opt);
  return je.detJ / (tables.e.c2 * ipow(Complex(k, 0.0), tables.e.p));
}

TraceSession::TraceSession(const PotentialModel& v, const BoundaryPair& bc,
                           const CoeffTables& tables, const TraceOptions& topt,
                           const SolveOptions& sopt)
    : v_(v), bc_(bc), tables_(tables), topt_(topt), sopt_(sopt) {
  const double scale = std::max(1.0, default_kappa_max(v, bc));
  k_min_ = topt.k_min > 0 ? topt.k_min : 1e-3 * scale;
  if (topt.k_max > 0) {
    k_max_ = topt.k_max;
  } else {
    double e2 = tables_.e.order() >= 2 ? std::abs(tables_.e.at(2)) : 1.0;
    k_max_ = std::max(50.0 * scale, 0.5 * std::sqrt(std::max(e2, 1e-8) * 1e8));
  }
  if (k_max_ <= 2.0 * k_min_)
    throw Error("trace: k_max must exceed k_min");
  k_low_ = k_min_ / 64.0;
  noise_ = v.terms.empty() ? 1e-15 : std::max(1e-14, 20.0 * sopt.rtol);

  // switch point above which the asymptotic expansion serves as the value
  double kh = k_max_;
  while (kh > 8.0 * k_min_) {
    const double next = 0.8 * kh;
    if (series_omitted(next) >
        1e-12 * std::max(1.0, std::abs(series_lnh(next))))
      break;
    kh = next;
  }
  k_hybrid_ = std::min(kh, k_max_);
}

Complex TraceSession::series_lnh(double k) const {
  const Complex z = 1.0 / (2.0 * kImag * k);
  Complex acc = 0.0;
  for (int l = tables_.e.order(); l >= 1; --l)
    acc = (acc + tables_.e.at(l)) * z;
  return acc;
}

double TraceSession::series_omitted(double k) const {
  const int ne = tables_.e.order();
  if (ne == 0) return 0.0;
  // geometric envelope |e_l| <= G^l of the available coefficients,
  // extrapolated one order past the truncation
  double g = 1.0;
  for (int l = 1; l <= ne; ++l) {
    const double a = std::abs(tables_.e.at(l));
    if (a > 0) g = std::max(g, std::pow(a, 1.0 / l));
  }
  return std::pow(g / (2.0 * std::abs(k)), ne + 1);
}

Complex TraceSession::raw_lnh_principal(double k) {
  ++evals_;
  const JostEval je = jost_matrix(v_, bc_, Complex(k, 0.0), sopt_);
  const double dabs = std::abs(je.detJ);
  if (dabs == 0.0)
    throw BranchAmbiguity("trace: det J vanishes on the real axis");
  const Complex c2 = tables_.e.c2;
  const int p = tables_.e.p;
  const double ln_abs = std::log(dabs) - std::log(std::abs(c2)) -
                        p * std::log(std::abs(k));
  const Complex unit = (je.detJ / dabs) / (c2 / std::abs(c2)) /
                       ipow(Complex(k < 0 ? -1.0 : 1.0, 0.0), p);
  return Complex(ln_abs, std::arg(unit));
}

Complex TraceSession::eval_cached(double k) {
  auto& cache = k > 0 ? cache_plus_ : cache_minus_;
  const double key = std::abs(k);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  if (key >= k_hybrid_) {
    const Complex val = series_lnh(k);
    cache.emplace(key, val);
    return val;
  }
  if (key < k_low_) {
    const Complex c = k > 0 ? model_c_plus_ : model_c_minus_;
    const Complex s = k > 0 ? Complex(model_s_plus_) : Complex(model_s_minus_);
    return c + s * std::log(key);
  }
  const Complex raw = raw_lnh_principal(k);
  // branch from the nearest profile/cache point (log distance)
  auto it = cache.lower_bound(key);
  const Complex* ref = nullptr;
  double best = 1e300;
  if (it != cache.end()) {
    best = std::log(it->first / key);
    ref = &it->second;
  }
  if (it != cache.begin()) {
    auto prev = std::prev(it);
    if (std::log(key / prev->first) < best) ref = &prev->second;
  }
  if (ref == nullptr)
    throw BranchAmbiguity("trace: no branch reference available");
  const double w = std::round((ref->imag() - raw.imag()) / kTwoPi);
  const Complex val = raw + Complex(0.0, kTwoPi * w);
  if (std::abs(val.imag() - ref->imag()) > 0.9 * kPi)
    throw BranchAmbiguity("trace: phase jump near k = " + std::to_string(k));
  cache.emplace(key, val);
  return val;
}

void TraceSession::build_profile() {
  if (profile_built_) return;
  for (const double sign : {1.0, -1.0}) {
    auto& cache = sign > 0 ? cache_plus_ : cache_minus_;
    // anchor: raw value unwrapped against the asymptotic expansion
    const double ka = k_hybrid_;
    const Complex raw = raw_lnh_principal(sign * ka);
    const Complex ser = series_lnh(sign * ka);
    const double w0 = std::round((ser.imag() - raw.imag()) / kTwoPi);
    Complex cur = raw + Complex(0.0, kTwoPi * w0);
    cache.emplace(ka, cur);
    double cur_k = ka;

    std::vector<double> st;  // pending targets, ascending (back = next)
    const double ratio = 0.85;
    for (double kt = k_low_; kt < ka * ratio; kt /= ratio) st.push_back(kt);
    std::sort(st.begin(), st.end());
    while (!st.empty()) {
      const double kt = st.back();
      st.pop_back();
      const Complex r = raw_lnh_principal(sign * kt);
      const double w = std::round((cur.imag() - r.imag()) / kTwoPi);
      const Complex cand = r + Complex(0.0, kTwoPi * w);
      const double jump = std::abs(cand.imag() - cur.imag());
      if (jump > topt_.branch_max_step) {
        if (cur_k / kt > 1.0 + 1e-9) {
          st.push_back(kt);
          st.push_back(std::sqrt(cur_k * kt));
          continue;
        }
        if (jump >= kPi)
          throw BranchAmbiguity(
              "trace: unresolved phase jump at the step floor near k = " +
              std::to_string(sign * kt));
      }
      cache.emplace(kt, cand);
      cur = cand;
      cur_k = kt;
    }

    // small-k extrapolation model  lnh ~ C + s log k
    auto i0 = cache.begin();
    auto i1 = std::next(i0);
    const Complex s =
        (i1->second - i0->second) / std::log(i1->first / i0->first);
    const Complex c = i0->second - s * std::log(i0->first);
    if (sign > 0) {
      model_s_plus_ = s.real();
      model_c_plus_ = Complex(c.real(), i0->second.imag());
    } else {
      model_s_minus_ = s.real();
      model_c_minus_ = Complex(c.real(), i0->second.imag());
    }
  }
  profile_built_ = true;

  // aligned output grid: union of both sides, plus coarse series coverage
  std::vector<double> ks;
  for (const auto& [k, v] : cache_plus_) ks.push_back(k);
  for (const auto& [k, v] : cache_minus_) ks.push_back(k);
  for (double k = k_hybrid_ * 1.25; k < k_max_; k *= 1.25) ks.push_back(k);
  ks.push_back(k_max_);
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  profile_.k = ks;
  profile_.k_min = k_min_;
  profile_.k_max = k_max_;
  profile_.lnh_plus.reserve(ks.size());
  profile_.lnh_minus.reserve(ks.size());
  for (double k : ks) {
    profile_.lnh_plus.push_back(eval_cached(k));
    profile_.lnh_minus.push_back(eval_cached(-k));
  }
}

Complex TraceSession::lnh(double k) {
  if (k == 0.0) throw ZeroWavenumberOnAxis("trace: ln h undefined at k = 0");
  build_profile();
  return eval_cached(k);
}

const LogHProfile& TraceSession::profile() {
  build_profile();
  return profile_;
}

double TraceSession::conj_symmetry_defect() {
  build_profile();
  double worst = 0.0;
  for (double k = k_min_; k < k_hybrid_; k *= 2.3) {
    const Complex d = lnh(-k) - std::conj(lnh(k));
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Identity residuals
// ---------------------------------------------------------------------------

namespace {

struct TailSum {
  Complex value{};
  double error = 0.0;
  int terms = 0;
};

// int_{kc}^inf of the post-subtraction asymptotic remainder, from the
// available e-coefficients; summation stops at the first magnitude growth
// (asymptotic series practice), the next term bounds the error.
TailSum tail_even(const ETable& e, int j, double kc) {
  TailSum t;
  double prev = -1.0;
  for (int l = j + 1; 2 * l <= e.order(); ++l) {
    const double sgn = (l % 2 == 0) ? 1.0 : -1.0;
    const Complex term = sgn * e.at(2 * l) * std::pow(2.0, -2 * l) *
                         std::pow(kc, 2 * j - 2 * l + 1) / double(2 * l - 2 * j - 1);
    const double mag = std::abs(term);
    if (prev >= 0 && mag >= prev) {
      t.error = mag;
      return t;
    }
    t.value += term;
    t.error = mag * (prev > 0 ? mag / prev : 1.0);
    prev = mag;
    ++t.terms;
  }
  return t;
}

TailSum tail_odd(const ETable& e, int j, double kc) {
  TailSum t;
  double prev = -1.0;
  for (int l = j; 2 * l + 1 <= e.order(); ++l) {
    const double sgn = (l % 2 == 0) ? -1.0 : 1.0;  // (-1)^(l+1)
    const Complex term = sgn * e.at(2 * l + 1) * std::pow(2.0, -2 * l - 1) *
                         std::pow(kc, 2 * j - 2 * l - 1) / double(2 * l + 1 - 2 * j);
    const double mag = std::abs(term);
    if (prev >= 0 && mag >= prev) {
      t.error = mag;
      return t;
    }
    t.value += term;
    t.error = mag * (prev > 0 ? mag / prev : 1.0);
    prev = mag;
    ++t.terms;
  }
  return t;
}

}  // namespace

OrderReport identity_residual(TraceSession& session,
                              const SpectrumResult& spectrum, int q) {
  if (q < 1) throw Error("identity_residual: q must be positive");
  const ETable& e = session.e();
  const bool odd = (q % 2 == 1);
  const int j = odd ? (q - 1) / 2 : q / 2;
  if (q > e.order())
    throw InsufficientEOrder("identity_residual: e_" + std::to_string(q) +
                             " not available");

  OrderReport rep;
  rep.q = q;
  for (const auto& hit : spectrum.eigen)
    rep.eigen_sum += hit.multiplicity * std::pow(hit.kappa, q);

  const int w = odd ? 2 * j : 2 * j - 1;  // k-power in the integrand
  auto integrand = [&](double k) -> Complex {
    Complex base;
    if (odd) {
      base = session.ln_even(k);
      for (int l = 1; l <= j; ++l)
        base -= ((l % 2 == 0) ? 1.0 : -1.0) * e.at(2 * l) *
                std::pow(2.0 * k, -2 * l);
    } else {
      base = session.ln_odd_negi(k);
      for (int l = 0; l <= j - 1; ++l)
        base -= ((l % 2 == 0) ? -1.0 : 1.0) * e.at(2 * l + 1) *
                std::pow(2.0 * k, -2 * l - 1);
    }
    return base * std::pow(k, w);
  };

  // cutoff: balance the e-series truncation against noise amplification
  const double noise = session.noise_estimate();
  auto estimate_at = [&](double kc) {
    TailSum t = odd ? tail_even(e, j, kc) : tail_odd(e, j, kc);
    if (t.terms == 0 && t.error == 0.0)
      t.error = std::abs(integrand(kc)) * kc;  // scale of the missing tail
    const double amplified = noise * std::pow(kc, w + 1) / (w + 1);
    return std::pair<double, TailSum>(t.error + amplified, t);
  };
  double kc = std::min(std::max(2.0, 4.0 * session.k_min()), session.k_max());
  TailSum tail;
  {
    double best = 1e300;
    for (double cand = kc;; cand *= 1.22) {
      const double c = std::min(cand, session.k_max());
      auto [err, ts] = estimate_at(c);
      if (err < best) {
        best = err;
        kc = c;
        tail = ts;
      }
      if (c >= session.k_max()) break;
    }
  }

  quad::Estimate<Complex> low, mid;
  try {
    low = quad::tanh_sinh([&](double k) { return integrand(k); }, 0.0,
                          session.k_min(), 1e-11);
    const double atol =
        std::max(1e-14, 0.05 * noise * std::pow(kc, w + 1) / (w + 1));
    mid = quad::adaptive([&](double k) { return integrand(k); },
                         session.k_min(), kc, 1e-10, atol, 6000);
  } catch (const QuadratureFailure& ex) {
    throw QuadratureBudgetExceeded(std::string("identity_residual q=") +
                                   std::to_string(q) + ": " + ex.what());
  }

  const Complex integral_c = low.value + mid.value + tail.value;
  const double pref = double(q) / kPi;
  const double sign = odd ? ((j % 2 == 0) ? -1.0 : 1.0)    // (-1)^(j+1)
                          : ((j % 2 == 0) ? 1.0 : -1.0);   // (-1)^j
  const Complex lhs_c = rep.eigen_sum + sign * pref * integral_c;
  const Complex rhs_c =
      odd ? Complex(2 * j + 1) * e.at(2 * j + 1) / std::pow(2.0, 2 * j + 2)
          : Complex(-j) * e.at(2 * j) / std::pow(2.0, 2 * j);

  rep.integral = pref * integral_c.real();
  rep.lhs = lhs_c.real();
  rep.rhs = rhs_c.real();
  rep.residual = std::abs(lhs_c - rhs_c);
  rep.rel_residual =
      std::abs(rhs_c) > 1e-300 ? rep.residual / std::abs(rhs_c) : rep.residual;

  rep.diag.k_cut = kc;
  rep.diag.quad_error = pref * (low.error + mid.error);
  rep.diag.tail_correction = pref * std::abs(tail.value);
  rep.diag.tail_error = pref * tail.error;
  rep.diag.noise_error = pref * noise * std::pow(kc, w + 1) / (w + 1);
  rep.diag.imag_residual = std::abs(sign * pref * integral_c.imag());
  rep.diag.evals = low.evals + mid.evals;
  const double budget =
      rep.diag.quad_error + rep.diag.tail_error + rep.diag.noise_error;
  const auto& thr = session.options();
  rep.diag.budget_ok =
      budget <= 10.0 * std::max(thr.residual_threshold_abs,
                                thr.residual_threshold_rel *
                                    std::max(1.0, std::abs(rep.rhs)));
  return rep;
}

LogHProfile log_h_profile(const PotentialModel& v, const BoundaryPair& bc,
                          const CoeffTables& tables, double k_min, double k_max,
                          const TraceOptions& topt, const SolveOptions& sopt) {
  TraceOptions t = topt;
  t.k_min = k_min;
  t.k_max = k_max;
  TraceSession session(v, bc, tables, t, sopt);
  return session.profile();
}

TraceReport full_report(const PotentialModel& v, const BoundaryPair& bc,
                        int q_max, int n_series, const TraceOptions& topt,
                        const SolveOptions& sopt, const SpectrumOptions& spopt) {
  TraceReport rep;
  CoeffTables tables = build_coeff_tables(v, bc, n_series);
  rep.spectrum = find_eigenvalues(v, bc, spopt, sopt);
  TraceSession session(v, bc, tables, topt, sopt);
  rep.e = tables.e;
  rep.k_min = session.k_min();
  rep.k_max = session.k_max();
  for (int q = 1; q <= q_max; ++q) {
    OrderReport r = identity_residual(session, rep.spectrum, q);
    const double thr = std::max(topt.residual_threshold_abs,
                                topt.residual_threshold_rel * std::abs(r.rhs));
    if (r.residual > thr) rep.all_within_threshold = false;
    if (!r.diag.budget_ok) rep.budget_ok = false;
    rep.orders.push_back(std::move(r));
  }
  rep.conj_symmetry_defect = session.conj_symmetry_defect();
  return rep;
}

}  // namespace halfline
