#include "halfline/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "halfline/errors.hpp"

namespace halfline {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
}

Matrix parse_matrix(const json& arr, int n, const std::string& where) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != n * n)
    throw ConfigError("config: " + where + " must list " + std::to_string(n * n) +
                      " [re, im] pairs, row-major");
  Matrix m(n, n);
  for (int i = 0; i < n * n; ++i) {
    const auto& pair = arr[std::size_t(i)];
    if (!pair.is_array() || pair.size() != 2)
      throw ConfigError("config: " + where + " entries must be [re, im]");
    m(i / n, i % n) = Complex(pair[0].get<double>(), pair[1].get<double>());
  }
  return m;
}

Profile parse_profile(const json& p) {
  reject_unknown(p, {"kind", "c", "alpha", "p"}, "profile");
  Profile prof;
  const std::string kind = p.at("kind").get<std::string>();
  prof.c = p.at("c").get<double>();
  if (kind == "exp") {
    prof.kind = ProfileKind::Exponential;
    prof.param = p.at("alpha").get<double>();
  } else if (kind == "power") {
    prof.kind = ProfileKind::Power;
    prof.param = p.at("p").get<double>();
  } else if (kind == "gauss") {
    prof.kind = ProfileKind::Gaussian;
    prof.param = p.at("alpha").get<double>();
  } else {
    throw ConfigError("config: profile kind must be exp, power or gauss");
  }
  return prof;
}

PotentialModel parse_potential(const json& pot) {
  reject_unknown(pot, {"n", "rho", "terms"}, "potential");
  const int n = pot.at("n").get<int>();
  const double rho = pot.value("rho", 2.0);
  std::vector<PotentialTerm> terms;
  if (pot.contains("terms"))
    for (const auto& t : pot.at("terms")) {
      reject_unknown(t, {"H", "profile"}, "potential term");
      terms.push_back(
          {parse_matrix(t.at("H"), n, "H"), parse_profile(t.at("profile"))});
    }
  return make_potential(n, rho, std::move(terms));
}

BoundaryPair parse_boundary(const json& b, int n) {
  reject_unknown(b, {"preset", "a", "A", "B"}, "boundary");
  if (b.contains("preset")) {
    const std::string preset = b.at("preset").get<std::string>();
    if (preset == "dirichlet") return dirichlet_pair(n);
    if (preset == "neumann") return neumann_pair(n);
    if (preset == "delta-prime") {
      if (n != 3)
        throw ConfigError("config: delta-prime preset requires n = 3");
      if (!b.contains("a"))
        throw ConfigError("config: delta-prime preset requires parameter a");
      return delta_prime_pair(b.at("a").get<double>());
    }
    throw ConfigError("config: unknown boundary preset '" + preset + "'");
  }
  if (!b.contains("A") || !b.contains("B"))
    throw ConfigError("config: boundary needs a preset or matrices A, B");
  return validate_boundary(parse_matrix(b.at("A"), n, "A"),
                           parse_matrix(b.at("B"), n, "B"));
}

void require_positive(double x, const std::string& what) {
  if (!(x > 0)) throw ConfigError("config: " + what + " must be positive");
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("config: JSON parse failure: ") + ex.what());
  }
  reject_unknown(root,
                 {"potential", "boundary", "tolerances", "ranges", "orders",
                  "output"},
                 "top level");
  if (!root.contains("potential") || !root.contains("boundary"))
    throw ConfigError("config: potential and boundary sections are required");

  RunConfig cfg;
  cfg.potential = parse_potential(root.at("potential"));
  cfg.boundary = parse_boundary(root.at("boundary"), cfg.potential.n);

  if (root.contains("tolerances")) {
    const auto& t = root.at("tolerances");
    reject_unknown(t, {"ode", "quad", "nullity", "branch"}, "tolerances");
    if (t.contains("ode")) {
      const double ode = t.at("ode").get<double>();
      require_positive(ode, "tolerances.ode");
      cfg.solve.rtol = cfg.solve.atol = ode;
    }
    if (t.contains("quad")) {
      const double q = t.at("quad").get<double>();
      require_positive(q, "tolerances.quad");
      cfg.trace.quad_rtol = q;
    }
    if (t.contains("nullity")) {
      const double nu = t.at("nullity").get<double>();
      require_positive(nu, "tolerances.nullity");
      cfg.spectrum.nullity_ratio = nu;
    }
    if (t.contains("branch")) {
      const double br = t.at("branch").get<double>();
      require_positive(br, "tolerances.branch");
      cfg.trace.branch_max_step = br;
    }
  }
  if (root.contains("ranges")) {
    const auto& r = root.at("ranges");
    reject_unknown(r, {"kappa_max", "k_min", "k_max", "x_max"}, "ranges");
    if (r.contains("kappa_max")) {
      cfg.spectrum.kappa_max = r.at("kappa_max").get<double>();
      require_positive(cfg.spectrum.kappa_max, "ranges.kappa_max");
    }
    if (r.contains("k_min")) {
      cfg.trace.k_min = r.at("k_min").get<double>();
      require_positive(cfg.trace.k_min, "ranges.k_min");
    }
    if (r.contains("k_max")) {
      cfg.trace.k_max = r.at("k_max").get<double>();
      require_positive(cfg.trace.k_max, "ranges.k_max");
    }
    if (cfg.trace.k_min > 0 && cfg.trace.k_max > 0 &&
        cfg.trace.k_min >= cfg.trace.k_max)
      throw ConfigError("config: ranges must satisfy k_min < k_max");
    if (r.contains("x_max")) {
      cfg.solve.x_max = r.at("x_max").get<double>();
      require_positive(cfg.solve.x_max, "ranges.x_max");
    }
  }
  if (root.contains("orders")) {
    const auto& o = root.at("orders");
    reject_unknown(o, {"N_series", "q_max"}, "orders");
    if (o.contains("N_series")) cfg.n_series = o.at("N_series").get<int>();
    if (o.contains("q_max")) cfg.trace.q_max = o.at("q_max").get<int>();
    if (cfg.n_series < 1 || cfg.n_series > 16)
      throw ConfigError("config: orders.N_series must lie in [1, 16]");
    if (cfg.trace.q_max < 1)
      throw ConfigError("config: orders.q_max must be positive");
  }
  if (root.contains("output")) {
    const auto& o = root.at("output");
    reject_unknown(o, {"format", "path"}, "output");
    if (o.contains("format")) {
      cfg.output_format = o.at("format").get<std::string>();
      if (cfg.output_format != "json" && cfg.output_format != "csv")
        throw ConfigError("config: output.format must be json or csv");
    }
    if (o.contains("path")) cfg.output_path = o.at("path").get<std::string>();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace halfline
