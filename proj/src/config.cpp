#include "bloch/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace bloch {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + key + "': " + v);
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x))
    throw ConfigError("config: expected integer for '" + key + "': " + v);
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: expected boolean for '" + key + "': " + v);
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    cfg.raw.emplace_back(key, val);

    if (key == "model") cfg.model = val;
    else if (key == "eps_re") cfg.eps.real(to_double(key, val));
    else if (key == "eps_im") cfg.eps.imag(to_double(key, val));
    else if (key == "rod_eps_re") cfg.rod_eps.real(to_double(key, val));
    else if (key == "rod_eps_im") cfg.rod_eps.imag(to_double(key, val));
    else if (key == "rod_width") cfg.rod_width = to_double(key, val);
    else if (key == "rod_air_fill") cfg.rod_air_fill = to_double(key, val);
    else if (key == "fcc_delta") cfg.fcc_delta = to_double(key, val);
    else if (key == "fcc_eps_core_re") cfg.fcc_eps_core.real(to_double(key, val));
    else if (key == "fcc_eps_core_im") cfg.fcc_eps_core.imag(to_double(key, val));
    else if (key == "fcc_eps_background_re")
      cfg.fcc_eps_background.real(to_double(key, val));
    else if (key == "fcc_eps_background_im")
      cfg.fcc_eps_background.imag(to_double(key, val));
    else if (key == "fcc_coating_eps1") cfg.fcc_coating.eps1 = to_double(key, val);
    else if (key == "fcc_coating_omega0")
      cfg.fcc_coating.omega0 = to_double(key, val);
    else if (key == "fcc_coating_gamma0")
      cfg.fcc_coating.gamma0 = to_double(key, val);
    else if (key == "fcc_coating_lambda_sq")
      cfg.fcc_coating.lambda = std::sqrt(to_double(key, val));
    else if (key == "fcc_coating_mode") cfg.fcc_coating_mode = val;
    else if (key == "fcc_coating_value_re")
      cfg.fcc_coating_value.real(to_double(key, val));
    else if (key == "fcc_coating_value_im")
      cfg.fcc_coating_value.imag(to_double(key, val));
    else if (key == "freeze_omega_over_2pi") cfg.freeze_nu = to_double(key, val);
    else if (key == "order") cfg.order = to_int(key, val);
    else if (key == "grid") cfg.grid = to_int(key, val);
    else if (key == "samples_per_segment")
      cfg.samples_per_segment = to_int(key, val);
    else if (key == "segment")
      cfg.segment = (val == "all") ? -1 : to_int(key, val);
    else if (key == "omega_over_2pi_min") cfg.nu_min = to_double(key, val);
    else if (key == "omega_over_2pi_max") cfg.nu_max = to_double(key, val);
    else if (key == "omega_count") cfg.nu_count = to_int(key, val);
    else if (key == "omega_list") cfg.nu_list = to_list(key, val);
    else if (key == "nbands") cfg.nbands = to_int(key, val);
    else if (key == "nev") cfg.nev = to_int(key, val);
    else if (key == "method") cfg.method = val;
    else if (key == "shift_re") cfg.shift.real(to_double(key, val));
    else if (key == "shift_im") cfg.shift.imag(to_double(key, val));
    else if (key == "M") cfg.M = to_double(key, val);
    else if (key == "tau_policy") cfg.tau_policy = val;
    else if (key == "tau") cfg.tau = to_double(key, val);
    else if (key == "accept_tol") cfg.accept_tol = to_double(key, val);
    else if (key == "diag_tol") cfg.diag_tol = to_double(key, val);
    else if (key == "im_tol") cfg.im_tol = to_double(key, val);
    else if (key == "path_margin") cfg.path_margin = to_double(key, val);
    else if (key == "arnoldi_tol") cfg.arnoldi_tol = to_double(key, val);
    else if (key == "subspace") cfg.subspace = to_int(key, val);
    else if (key == "max_restarts") cfg.max_restarts = to_int(key, val);
    else if (key == "dense_dim_limit") cfg.dense_dim_limit = to_int(key, val);
    else if (key == "strict_admissibility")
      cfg.strict_admissibility = to_bool(key, val);
    else if (key == "converge_orders") {
      cfg.converge_orders.clear();
      for (double x : to_list(key, val))
        cfg.converge_orders.push_back(static_cast<int>(x));
    } else if (key == "k_ref") {
      const auto xs = to_list(key, val);
      if (xs.size() != 3) throw ConfigError("config: k_ref needs 3 components");
      cfg.k_ref = Vec3(xs[0], xs[1], xs[2]);
    } else if (key == "omega_ref_over_2pi")
      cfg.omega_ref_nu = to_double(key, val);
    else if (key == "out_dir") cfg.out_dir = val;
    else
      throw ConfigError("config: unknown key '" + key + "'");
  }

  if (cfg.model != "homogeneous" && cfg.model != "rods" && cfg.model != "fcc")
    throw ConfigError("config: model must be homogeneous, rods or fcc");
  if (cfg.order < 0) throw ConfigError("config: order must be >= 0");
  if (cfg.grid < 2) throw ConfigError("config: grid must be >= 2");
  if (cfg.method != "auto" && cfg.method != "dense" && cfg.method != "arnoldi")
    throw ConfigError("config: method must be auto, dense or arnoldi");
  if (cfg.tau_policy != "auto" && cfg.tau_policy != "fixed")
    throw ConfigError("config: tau_policy must be auto or fixed");
  if (cfg.fcc_coating_mode != "lorentz" && cfg.fcc_coating_mode != "core" &&
      cfg.fcc_coating_mode != "frozen")
    throw ConfigError("config: fcc_coating_mode must be lorentz, core or frozen");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

PermittivityModel build_model(const RunConfig& cfg) {
  PermittivityModel model;
  if (cfg.model == "homogeneous") {
    model.variant = Homogeneous{cfg.eps};
    model.id = "homogeneous";
  } else if (cfg.model == "rods") {
    RodScaffold rods;
    rods.eps_rod = cfg.rod_eps;
    rods.rod_width =
        cfg.rod_width > 0.0 ? cfg.rod_width : rod_width_for_fill(cfg.rod_air_fill);
    model.variant = rods;
    model.id = "rods";
  } else {
    FccCoatedSpheres fcc;
    fcc.delta = cfg.fcc_delta;
    fcc.eps_core = cfg.fcc_eps_core;
    fcc.eps_background = cfg.fcc_eps_background;
    fcc.coating = cfg.fcc_coating;
    if (cfg.fcc_coating_mode == "core")
      fcc.coating_frozen = cfg.fcc_eps_core;
    else if (cfg.fcc_coating_mode == "frozen")
      fcc.coating_frozen = cfg.fcc_coating_value;
    model.variant = fcc;
    model.id = "fcc";
    if (cfg.freeze_nu >= 0.0) model = freeze(model, kTwoPi * cfg.freeze_nu);
  }
  return model;
}

SweepOptions sweep_options(const RunConfig& cfg) {
  SweepOptions o;
  o.grid = cfg.grid;
  o.method = parse_method(cfg.method);
  o.shift = cfg.shift;
  o.M = cfg.M;
  o.accept_tol = cfg.accept_tol;
  o.diag_tol = cfg.diag_tol;
  o.im_tol = cfg.im_tol;
  o.path_margin = cfg.path_margin;
  o.arnoldi_tol = cfg.arnoldi_tol;
  o.subspace = cfg.subspace;
  o.max_restarts = cfg.max_restarts;
  o.dense_dim_limit = cfg.dense_dim_limit;
  return o;
}

SolveMethod parse_method(const std::string& name) {
  if (name == "dense") return SolveMethod::Dense;
  if (name == "arnoldi") return SolveMethod::Arnoldi;
  return SolveMethod::Auto;
}

std::vector<double> omega_grid_angular(const RunConfig& cfg) {
  std::vector<double> grid;
  if (!cfg.nu_list.empty()) {
    for (double nu : cfg.nu_list) grid.push_back(kTwoPi * nu);
    return grid;
  }
  if (cfg.nu_count < 1) throw ConfigError("config: omega_count must be >= 1");
  if (cfg.nu_count == 1) return {kTwoPi * cfg.nu_min};
  for (int i = 0; i < cfg.nu_count; ++i)
    grid.push_back(kTwoPi * (cfg.nu_min + (cfg.nu_max - cfg.nu_min) * i /
                                              (cfg.nu_count - 1)));
  return grid;
}

}  // namespace bloch
