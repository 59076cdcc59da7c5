#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bloch/sweep.hpp"

namespace bloch {

/// Run configuration parsed from a flat `key = value` text file.
/// Unknown keys are rejected. See the README for the schema.
struct RunConfig {
  // model
  std::string model = "homogeneous";  // homogeneous | rods | fcc
  Complex eps{1.0, 0.0};
  Complex rod_eps{13.0, 0.0};
  double rod_width = -1.0;     // <0: derive from rod_air_fill
  double rod_air_fill = 0.82;
  double fcc_delta = 0.9;
  Complex fcc_eps_core{2.534464, 0.0};
  Complex fcc_eps_background{1.0, 0.0};
  LorentzParams fcc_coating{};
  std::string fcc_coating_mode = "lorentz";  // lorentz | core | frozen
  Complex fcc_coating_value{7.0, 0.0};       // used when mode = frozen
  double freeze_nu = -1.0;  // >=0: freeze dispersive coating at omega/2pi

  // discretization
  int order = 2;
  int grid = 64;

  // path and frequency grids
  int samples_per_segment = 20;
  int segment = -1;  // -1 = all
  double nu_min = 0.02, nu_max = 0.6;
  int nu_count = 60;
  std::vector<double> nu_list;  // overrides min/max/count when nonempty

  // solver
  int nbands = 5;
  int nev = 10;
  std::string method = "auto";  // auto | dense | arnoldi
  Complex shift{0.0, 0.0};
  double M = 1.0;
  std::string tau_policy = "auto";  // auto | fixed
  double tau = 0.0;
  double accept_tol = 1e-8;
  double diag_tol = 1e-8;
  double im_tol = 1e-6;
  double path_margin = 0.25;
  double arnoldi_tol = 1e-10;
  int subspace = 0;
  int max_restarts = 60;
  int dense_dim_limit = 2500;
  bool strict_admissibility = false;

  // convergence study
  std::vector<int> converge_orders = {1, 2, 3};
  Vec3 k_ref{kTwoPi / 4.0, 0.0, 0.0};
  double omega_ref_nu = 0.14492297;

  // output
  std::string out_dir = "out";

  /// Raw key/value pairs in file order, echoed into the run manifest.
  std::vector<std::pair<std::string, std::string>> raw;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

PermittivityModel build_model(const RunConfig& cfg);
SweepOptions sweep_options(const RunConfig& cfg);
SolveMethod parse_method(const std::string& name);
std::vector<double> omega_grid_angular(const RunConfig& cfg);

}  // namespace bloch
