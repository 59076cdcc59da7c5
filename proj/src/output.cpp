#include "bloch/output.hpp"

#include <omp.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bloch {

const char* kBandCsvHeader =
    "alpha,kx,ky,kz,omega_over_2pi,eta_re,eta_im,residual,p_norm,s_abs,flag";

std::string fmt_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string band_csv(const std::vector<BandPoint>& points) {
  std::ostringstream out;
  out << kBandCsvHeader << "\n";
  for (const auto& p : points) {
    out << fmt_g17(p.alpha) << ',' << fmt_g17(p.k[0]) << ',' << fmt_g17(p.k[1])
        << ',' << fmt_g17(p.k[2]) << ',' << fmt_g17(p.omega / kTwoPi) << ',';
    if (p.has_eta) {
      out << fmt_g17(p.eta.real()) << ',' << fmt_g17(p.eta.imag()) << ','
          << fmt_g17(p.residual) << ',' << fmt_g17(p.p_norm) << ','
          << fmt_g17(p.s_abs) << ',';
    } else {
      out << ",,,,,";
    }
    out << p.flag << "\n";
  }
  return out.str();
}

void write_band_csv(const std::string& path,
                    const std::vector<BandPoint>& points) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << band_csv(points);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

}  // namespace

std::vector<BandPoint> parse_band_csv_text(const std::string& text) {
  std::vector<BandPoint> points;
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line) || line != kBandCsvHeader)
    throw std::runtime_error("band CSV: bad header");
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 11) throw std::runtime_error("band CSV: bad row");
    BandPoint p;
    p.alpha = std::stod(cells[0]);
    p.k = Vec3(std::stod(cells[1]), std::stod(cells[2]), std::stod(cells[3]));
    p.omega = std::stod(cells[4]) * kTwoPi;
    p.has_eta = !cells[5].empty();
    if (p.has_eta) {
      p.eta = Complex(std::stod(cells[5]), std::stod(cells[6]));
      p.residual = std::stod(cells[7]);
      p.p_norm = std::stod(cells[8]);
      p.s_abs = std::stod(cells[9]);
      p.source = BandPoint::Source::Quadratic;
    } else {
      p.source = BandPoint::Source::Standard;
    }
    p.flag = cells[10];
    points.push_back(p);
  }
  return points;
}

std::vector<BandPoint> read_band_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_band_csv_text(ss.str());
}

void write_converge_csv(const std::string& path,
                        const std::vector<ConvergenceRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "order,dofs,rel_err,kx,ky,kz\n";
  for (const auto& r : rows)
    out << r.order << ',' << r.dofs << ',' << fmt_g17(r.rel_err) << ','
        << fmt_g17(r.k_computed[0]) << ',' << fmt_g17(r.k_computed[1]) << ','
        << fmt_g17(r.k_computed[2]) << "\n";
}

void write_manifest(const std::string& path, const RunConfig& cfg,
                    const SweepResult* result, const std::string& command) {
  nlohmann::json j;
  j["command"] = command;
  nlohmann::json echo = nlohmann::json::object();
  for (const auto& [k, v] : cfg.raw) echo[k] = v;
  j["config"] = echo;
  j["versions"] = {{"blochband", "0.1.0"},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)}};
  j["seeds"] = {{"air_fraction", 0x426c6f63u}, {"arnoldi_start", 0x41726e6full}};
  j["omp_max_threads"] = omp_get_max_threads();
  if (result) {
    j["skipped_alphas"] = result->skipped_alphas;
    nlohmann::json fails = nlohmann::json::array();
    for (const auto& [omega, what] : result->failures)
      fails.push_back({{"omega_over_2pi", omega / kTwoPi}, {"error", what}});
    j["failures"] = fails;
    j["points"] = result->points.size();
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

void write_plot_script(const std::string& path) {
  static const char* script = R"PY(#!/usr/bin/env python3
"""Render band diagrams from the CSV tables written next to this script."""
import csv
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))

def load(name):
    rows = []
    p = os.path.join(here, name)
    if not os.path.exists(p):
        return rows
    with open(p) as f:
        for row in csv.DictReader(f):
            rows.append(row)
    return rows

fig, ax = plt.subplots(figsize=(7, 5))
std = load("bands_standard.csv")
quad = load("bands_quadratic.csv")
if std:
    ax.plot([float(r["alpha"]) for r in std],
            [float(r["omega_over_2pi"]) for r in std],
            "k*", ms=4, label="standard (fixed k)")
ok = [r for r in quad if r["flag"].startswith("ok")]
if ok:
    ax.plot([float(r["alpha"]) for r in ok],
            [float(r["omega_over_2pi"]) for r in ok],
            "o", mfc="none", mec="red", ms=5, label="quadratic (fixed omega)")
ax.set_xlabel(r"$\alpha$")
ax.set_ylabel(r"$\omega/2\pi$")
ax.legend(loc="best")
out = os.path.join(here, "bands.png")
fig.savefig(out, dpi=150, bbox_inches="tight")
print("wrote", out)
)PY";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << script;
}

}  // namespace bloch
