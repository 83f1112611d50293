#include "halfline/commands.hpp"

#include <filesystem>
#include <fstream>

#include "halfline/errors.hpp"
#include "halfline/jsonout.hpp"

namespace halfline {

namespace {

void spectrum_into(JsonWriter& w, const SpectrumResult& s) {
  w.begin_object();
  w.key("eigen").begin_array();
  for (const auto& hit : s.eigen) {
    w.begin_object();
    w.key("kappa").value(hit.kappa);
    w.key("mult").value(hit.multiplicity);
    w.end_object();
  }
  w.end_array();
  w.key("mu").value(s.mu);
  w.key("N").value(s.total);
  w.end_object();
}

void coeffs_into(JsonWriter& w, const ETable& e) {
  w.begin_object();
  w.key("e").begin_array();
  for (const auto& el : e.e) {
    w.begin_array();
    w.value(el.real());
    w.value(el.imag());
    w.end_array();
  }
  w.end_array();
  w.key("c2").begin_array();
  w.value(e.c2.real());
  w.value(e.c2.imag());
  w.end_array();
  w.key("p").value(e.p);
  w.end_object();
}

}  // namespace

std::string spectrum_json(const SpectrumResult& s) {
  JsonWriter w;
  spectrum_into(w, s);
  return w.take();
}

std::string coeffs_json(const ETable& e) {
  JsonWriter w;
  coeffs_into(w, e);
  return w.take();
}

std::string trace_report_json(const TraceReport& rep) {
  JsonWriter w;
  w.begin_object();
  w.key("orders").begin_array();
  for (const auto& o : rep.orders) {
    w.begin_object();
    w.key("q").value(o.q);
    w.key("eigen_sum").value(o.eigen_sum);
    w.key("integral").value(o.integral);
    w.key("rhs").value(o.rhs);
    w.key("residual").value(o.residual);
    w.key("rel_residual").value(o.rel_residual);
    w.key("diagnostics").begin_object();
    w.key("lhs").value(o.lhs);
    w.key("k_cut").value(o.diag.k_cut);
    w.key("quad_error").value(o.diag.quad_error);
    w.key("tail_correction").value(o.diag.tail_correction);
    w.key("tail_error").value(o.diag.tail_error);
    w.key("noise_error").value(o.diag.noise_error);
    w.key("imag_residual").value(o.diag.imag_residual);
    w.key("evals").value(o.diag.evals);
    w.key("budget_ok").value(o.diag.budget_ok);
    w.end_object();
    w.end_object();
  }
  w.end_array();
  w.key("e").begin_array();
  for (const auto& el : rep.e.e) {
    w.begin_array();
    w.value(el.real());
    w.value(el.imag());
    w.end_array();
  }
  w.end_array();
  w.key("spectrum");
  spectrum_into(w, rep.spectrum);
  w.key("k_min").value(rep.k_min);
  w.key("k_max").value(rep.k_max);
  w.key("conj_symmetry_defect").value(rep.conj_symmetry_defect);
  w.end_object();
  return w.take();
}

int cmd_validate_bc(const RunConfig& cfg, std::ostream& out) {
  JsonWriter w;
  try {
    DiagonalBC d = reduce_to_diagonal(cfg.boundary);
    w.begin_object();
    w.key("n").value(cfg.boundary.n);
    w.key("theta").begin_array();
    for (int j = 0; j < cfg.boundary.n; ++j) w.value(d.theta(j));
    w.end_array();
    w.key("n_D").value(d.n_dirichlet);
    w.key("n_M").value(d.n_mixed);
    w.key("n_N").value(d.n_neumann);
    w.key("threshold_distance").begin_array();
    for (double dist : d.threshold_distance) w.value(dist);
    w.end_array();
    w.end_object();
    out << w.take() << "\n";
    return kExitOk;
  } catch (const Error& ex) {
    w.begin_object();
    w.key("error").value(std::string(ex.what()));
    w.end_object();
    out << w.take() << "\n";
    return kExitInvalid;
  }
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  SpectrumResult s =
      find_eigenvalues(cfg.potential, cfg.boundary, cfg.spectrum, cfg.solve);
  out << spectrum_json(s) << "\n";
  return kExitOk;
}

int cmd_coeffs(const RunConfig& cfg, std::ostream& out) {
  CoeffTables tables = build_coeff_tables(cfg.potential, cfg.boundary,
                                          cfg.n_series, cfg.solve.x_max);
  out << coeffs_json(tables.e) << "\n";
  return kExitOk;
}

int cmd_trace_check(const RunConfig& cfg, std::ostream& out) {
  TraceReport rep =
      full_report(cfg.potential, cfg.boundary, cfg.trace.q_max, cfg.n_series,
                  cfg.trace, cfg.solve, cfg.spectrum);
  out << trace_report_json(rep) << "\n";
  if (!rep.budget_ok || !rep.all_within_threshold) return kExitBudget;
  return kExitOk;
}

int cmd_plot_data(const RunConfig& cfg, const std::string& out_dir) {
  if (out_dir.empty())
    throw ConfigError("plot-data: an output directory is required");
  if (cfg.trace.k_min > 0 && cfg.trace.k_max > 0 &&
      cfg.trace.k_min >= cfg.trace.k_max)
    throw ConfigError("plot-data: empty k range");

  CoeffTables tables = build_coeff_tables(cfg.potential, cfg.boundary,
                                          cfg.n_series, cfg.solve.x_max);
  TraceSession session(cfg.potential, cfg.boundary, tables, cfg.trace,
                       cfg.solve);
  const LogHProfile& prof = session.profile();

  std::filesystem::create_directories(out_dir);

  {
    std::ofstream f(out_dir + "/profile.csv");
    f << "k,re_lnh,im_lnh,ln_e,minus_i_ln_o\n";
    for (std::size_t i = 0; i < prof.k.size(); ++i) {
      const Complex lnh = prof.lnh_plus[i];
      const Complex ev = prof.even(i);
      const Complex od = -kImag * prof.odd(i);
      f << csv_row({prof.k[i], lnh.real(), lnh.imag(), ev.real(), od.real()});
    }
  }
  {
    std::ofstream f(out_dir + "/detj_imag.csv");
    f << "kappa,re_det,im_det\n";
    const double kmax = default_kappa_max(cfg.potential, cfg.boundary);
    std::vector<double> kappas;
    for (int i = 0; i <= 160; ++i)
      kappas.push_back(1e-3 + (kmax - 1e-3) * i / 160.0);
    for (const auto& [kap, det] :
         det_on_imaginary_axis(cfg.potential, cfg.boundary, kappas, cfg.solve))
      f << csv_row({kap, det.real(), det.imag()});
  }
  {
    SpectrumResult spec = find_eigenvalues(cfg.potential, cfg.boundary,
                                           cfg.spectrum, cfg.solve);
    for (int q = 1; q <= cfg.trace.q_max; ++q) {
      OrderReport rep = identity_residual(session, spec, q);
      (void)rep;
      std::ofstream f(out_dir + "/integrand_q" + std::to_string(q) + ".csv");
      f << "k,integrand\n";
      const ETable& e = session.e();
      const bool odd = (q % 2 == 1);
      const int j = odd ? (q - 1) / 2 : q / 2;
      for (double k = session.k_min(); k <= rep.diag.k_cut; k *= 1.08) {
        Complex base;
        if (odd) {
          base = session.ln_even(k);
          for (int l = 1; l <= j; ++l)
            base -= ((l % 2 == 0) ? 1.0 : -1.0) * e.at(2 * l) *
                    std::pow(2.0 * k, -2 * l);
          base *= std::pow(k, 2 * j);
        } else {
          base = session.ln_odd_negi(k);
          for (int l = 0; l <= j - 1; ++l)
            base -= ((l % 2 == 0) ? -1.0 : 1.0) * e.at(2 * l + 1) *
                    std::pow(2.0 * k, -2 * l - 1);
          base *= std::pow(k, 2 * j - 1);
        }
        f << csv_row({k, base.real()});
      }
    }
  }
  return kExitOk;
}

}  // namespace halfline
