#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "bloch/oracles.hpp"
#include "bloch/output.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace bloch;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitAdmissibility = 4;

struct Common {
  std::string config_path;
  std::string out_override;
};

RunConfig load_config(const Common& common) {
  RunConfig cfg = parse_config_file(common.config_path);
  if (!common.out_override.empty()) cfg.out_dir = common.out_override;
  return cfg;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  return dir;
}

int run_bands_standard(const Common& common) {
  const RunConfig cfg = load_config(common);
  PermittivityModel model = build_model(cfg);
  if (frequency_dependent(model)) {
    std::cerr << "bands-standard: model is frequency dependent; set "
                 "freeze_omega_over_2pi or a frozen coating\n";
    return kExitConfig;
  }
  const PlaneWaveSet basis(cfg.order);
  const PathSpec path = PathSpec::cubic_gamma_x_m_r(cfg.samples_per_segment);
  const SweepResult res =
      sweep_standard(model, basis, path, cfg.nbands, sweep_options(cfg));

  const fs::path dir = prepare_out_dir(cfg);
  write_band_csv((dir / "bands_standard.csv").string(), res.points);
  write_manifest((dir / "manifest.json").string(), cfg, &res, "bands-standard");
  write_plot_script((dir / "plot_bands.py").string());
  std::cout << "bands-standard: " << res.points.size() << " points, "
            << res.skipped_alphas.size() << " skipped samples -> "
            << (dir / "bands_standard.csv").string() << "\n";
  return kExitOk;
}

int run_bands_quadratic(const Common& common) {
  const RunConfig cfg = load_config(common);
  const PermittivityModel model = build_model(cfg);
  const PlaneWaveSet basis(cfg.order);
  const PathSpec path = PathSpec::cubic_gamma_x_m_r(cfg.samples_per_segment);
  const std::vector<double> omegas = omega_grid_angular(cfg);

  TauPolicy policy;
  policy.fixed = cfg.tau_policy == "fixed";
  policy.tau = cfg.tau;

  std::vector<int> segments;
  if (cfg.segment < 0)
    for (std::size_t i = 0; i < path.segments.size(); ++i)
      segments.push_back(static_cast<int>(i));
  else
    segments.push_back(cfg.segment);

  SweepResult all;
  for (int seg : segments) {
    SweepResult res = sweep_quadratic(model, basis, path, seg, omegas, policy,
                                      cfg.nev, sweep_options(cfg));
    all.points.insert(all.points.end(), res.points.begin(), res.points.end());
    all.failures.insert(all.failures.end(), res.failures.begin(),
                        res.failures.end());
  }

  if (cfg.strict_admissibility) {
    for (const auto& pt : all.points)
      if (pt.flag.find("inadmissible") != std::string::npos) {
        std::cerr << "bands-quadratic: inadmissible point at omega/2pi = "
                  << pt.omega / kTwoPi << " (strict_admissibility)\n";
        return kExitAdmissibility;
      }
  }
  if (all.points.empty() && !all.failures.empty()) {
    std::cerr << "bands-quadratic: every frequency failed; first error: "
              << all.failures.front().second << "\n";
    return kExitSolver;
  }

  const fs::path dir = prepare_out_dir(cfg);
  write_band_csv((dir / "bands_quadratic.csv").string(), all.points);
  write_manifest((dir / "manifest.json").string(), cfg, &all, "bands-quadratic");
  write_plot_script((dir / "plot_bands.py").string());
  std::cout << "bands-quadratic: " << all.points.size() << " points, "
            << all.failures.size() << " failed frequencies -> "
            << (dir / "bands_quadratic.csv").string() << "\n";
  return kExitOk;
}

int run_converge(const Common& common) {
  const RunConfig cfg = load_config(common);
  const PermittivityModel model = build_model(cfg);
  const auto rows = convergence_study(model, cfg.k_ref, kTwoPi * cfg.omega_ref_nu,
                                      cfg.converge_orders, sweep_options(cfg));
  const fs::path dir = prepare_out_dir(cfg);
  write_converge_csv((dir / "converge.csv").string(), rows);
  write_manifest((dir / "manifest.json").string(), cfg, nullptr, "converge");
  std::cout << "order  dofs      rel_err\n";
  for (const auto& r : rows)
    std::printf("%5d  %8d  %.6e\n", r.order, r.dofs, r.rel_err);
  return kExitOk;
}

int run_admissible(const Common& common) {
  const RunConfig cfg = load_config(common);
  const PermittivityModel model = build_model(cfg);
  const PathSpec path = PathSpec::cubic_gamma_x_m_r();
  const std::vector<double> omegas = omega_grid_angular(cfg);

  bool all_ok = true;
  std::printf("%8s %12s %6s %6s %14s %4s\n", "segment", "omega/2pi", "case",
              "tau", "margin", "ok");
  for (std::size_t seg = 0; seg < path.segments.size(); ++seg) {
    for (double omega : omegas) {
      const auto choice = tau_select_lenient(path.segments[seg].start,
                                             path.segments[seg].direction,
                                             omega, model);
      all_ok = all_ok && choice.report.ok;
      std::printf("%8zu %12.6f %6c %6.3f %14.6e %4s\n", seg, omega / kTwoPi,
                  choice.report.case_label, choice.tau, choice.report.margin,
                  choice.report.ok ? "yes" : "NO");
    }
  }
  return all_ok ? kExitOk : kExitAdmissibility;
}

int run_validate(const std::string& out_dir) {
  const auto results = oracles::run_validation_suite();
  bool all = true;
  std::printf("%-36s %-6s %s\n", "check", "result", "detail");
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    std::printf("%-36s %-6s %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                r.detail.c_str());
    j.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  }
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "validate.json");
    out << nlohmann::json{{"all_pass", all}, {"checks", j}}.dump(2) << "\n";
  }
  std::printf("validate: %s\n", all ? "all checks passed" : "FAILURES present");
  return all ? kExitOk : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bloch-variety solver for 3D periodic media: standard fixed-k "
               "sweeps and fixed-frequency wave-vector eigenvalue sweeps"};
  app.require_subcommand(1);

  Common common;
  std::string validate_out;

  auto add_common = [&](CLI::App* sub, bool needs_config = true) {
    auto* opt = sub->add_option("-c,--config", common.config_path,
                                "run configuration file (key = value lines)");
    if (needs_config) opt->required();
    sub->add_option("-o,--out", common.out_override,
                    "override the configured output directory");
  };

  auto* std_cmd = app.add_subcommand(
      "bands-standard", "fixed-k band sweep along Gamma-X-M-R");
  add_common(std_cmd);
  auto* quad_cmd = app.add_subcommand(
      "bands-quadratic", "fixed-frequency wave-vector sweep (eta eigenvalues)");
  add_common(quad_cmd);
  auto* conv_cmd = app.add_subcommand(
      "converge", "wave-vector error vs basis order at a reference point");
  add_common(conv_cmd);
  auto* adm_cmd = app.add_subcommand(
      "admissible", "coercivity pre-flight over the configured frequency grid");
  add_common(adm_cmd);
  auto* val_cmd = app.add_subcommand(
      "validate", "run the built-in oracle cross-check suite");
  val_cmd->add_option("-o,--out", validate_out,
                      "directory for the JSON verdict");

  CLI11_PARSE(app, argc, argv);

  try {
    if (std_cmd->parsed()) return run_bands_standard(common);
    if (quad_cmd->parsed()) return run_bands_quadratic(common);
    if (conv_cmd->parsed()) return run_converge(common);
    if (adm_cmd->parsed()) return run_admissible(common);
    if (val_cmd->parsed()) return run_validate(validate_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NoAdmissibleTau& e) {
    std::cerr << "admissibility failure: " << e.what() << "\n";
    return kExitAdmissibility;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitOk;
}
