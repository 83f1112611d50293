// halfline-jost: spectral and scattering data for matrix Schrodinger
// operators on the half line, and numerical verification of the
// Buslaev-Faddeev sum rules.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "halfline/commands.hpp"
#include "halfline/errors.hpp"

namespace {

int run_with_output(const halfline::RunConfig& cfg, const std::string& out_path,
                    int (*cmd)(const halfline::RunConfig&, std::ostream&)) {
  const std::string path = out_path.empty() ? cfg.output_path : out_path;
  if (path.empty()) return cmd(cfg, std::cout);
  std::ofstream f(path);
  if (!f) {
    std::cerr << "cannot open output path " << path << "\n";
    return halfline::kExitInvalid;
  }
  return cmd(cfg, f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jost matrices, bound states and trace-identity checks for "
               "matrix Schrodinger operators on the half line"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  int q_max_override = 0, order_override = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required();
    sub->add_option("--out", out_path, "output path (default stdout)");
  };

  CLI::App* validate = app.add_subcommand("validate-bc",
                                          "check and reduce the boundary pair");
  add_common(validate);
  CLI::App* spectrum = app.add_subcommand("spectrum", "locate eigenvalues");
  add_common(spectrum);
  CLI::App* coeffs =
      app.add_subcommand("coeffs", "high-energy expansion coefficients");
  add_common(coeffs);
  coeffs->add_option("--order", order_override, "series truncation order");
  CLI::App* trace =
      app.add_subcommand("trace-check", "verify the trace identities");
  add_common(trace);
  trace->add_option("--q-max", q_max_override, "highest identity order");
  trace->add_option("--order", order_override, "series truncation order");
  CLI::App* plot = app.add_subcommand("plot-data", "emit CSV plot data");
  add_common(plot);
  plot->add_option("--q-max", q_max_override, "highest identity order");

  CLI11_PARSE(app, argc, argv);

  try {
    halfline::RunConfig cfg = halfline::load_config(config_path);
    if (q_max_override > 0) cfg.trace.q_max = q_max_override;
    if (order_override > 0) cfg.n_series = order_override;

    if (validate->parsed())
      return run_with_output(cfg, out_path, halfline::cmd_validate_bc);
    if (spectrum->parsed())
      return run_with_output(cfg, out_path, halfline::cmd_spectrum);
    if (coeffs->parsed())
      return run_with_output(cfg, out_path, halfline::cmd_coeffs);
    if (trace->parsed())
      return run_with_output(cfg, out_path, halfline::cmd_trace_check);
    if (plot->parsed()) return halfline::cmd_plot_data(cfg, out_path);
  } catch (const halfline::ConfigError& ex) {
    std::cerr << ex.what() << "\n";
    return halfline::kExitInvalid;
  } catch (const halfline::QuadratureBudgetExceeded& ex) {
    std::cerr << ex.what() << "\n";
    return halfline::kExitBudget;
  } catch (const halfline::MeshTooCoarse& ex) {
    std::cerr << ex.what() << "\n";
    return halfline::kExitBudget;
  } catch (const halfline::Error& ex) {
    std::cerr << ex.what() << "\n";
    return halfline::kExitInvalid;
  }
  return halfline::kExitOk;
}
