#include "bloch/sweep.hpp"

#include <omp.h>

#include <cmath>

namespace bloch {

namespace {

constexpr double kPi = kTwoPi / 2.0;

QuadraticOptions to_quadratic_options(const SweepOptions& o) {
  QuadraticOptions q;
  q.method = o.method;
  q.shift = o.shift;
  q.M = o.M;
  q.grid = o.grid;
  q.accept_tol = o.accept_tol;
  q.diag_tol = o.diag_tol;
  q.im_tol = o.im_tol;
  q.path_margin = o.path_margin;
  q.arnoldi_tol = o.arnoldi_tol;
  q.subspace = o.subspace;
  q.max_restarts = o.max_restarts;
  q.dense_dim_limit = o.dense_dim_limit;
  return q;
}

bool on_reciprocal_lattice(const Vec3& k, const PlaneWaveSet& basis) {
  for (int i = 0; i < basis.size(); ++i)
    if ((k + basis.mode(i)).norm() <= 1e-12) return true;
  return false;
}

}  // namespace

SweepResult sweep_standard(const PermittivityModel& model,
                           const PlaneWaveSet& basis, const PathSpec& path,
                           int nbands, const SweepOptions& opts) {
  if (frequency_dependent(model))
    throw NotFrequencyIndependent("sweep_standard: freeze the model first");

  const InvEpsilonTable table =
      inv_epsilon_fourier(model, 0.0, basis.order(), opts.grid);

  struct Sample {
    double alpha;
    Vec3 k;
  };
  std::vector<Sample> samples;
  double offset = 0.0;
  for (const auto& seg : path.segments) {
    const int n = std::max(2, path.samples_per_segment);
    for (int j = 0; j < n; ++j) {
      const double local = seg.length * j / (n - 1);
      samples.push_back({offset + local, seg.start + local * seg.direction});
    }
    offset += seg.length;
  }

  SweepResult out;
  std::vector<std::vector<BandPoint>> slots(samples.size());
  std::vector<char> skipped(samples.size(), 0);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (on_reciprocal_lattice(samples[i].k, basis)) {
      skipped[i] = 1;
      continue;
    }
    StandardOptions so;
    so.grid = opts.grid;
    so.table = &table;
    const auto modes = solve_standard(samples[i].k, model, basis, nbands, so);
    for (const auto& m : modes) {
      BandPoint pt;
      pt.alpha = samples[i].alpha;
      pt.k = samples[i].k;
      pt.omega = m.omega;
      pt.source = BandPoint::Source::Standard;
      slots[i].push_back(pt);
    }
  }

  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (skipped[i]) out.skipped_alphas.push_back(samples[i].alpha);
    for (auto& pt : slots[i]) out.points.push_back(std::move(pt));
  }
  return out;
}

SweepResult sweep_quadratic(const PermittivityModel& model,
                            const PlaneWaveSet& basis, const PathSpec& path,
                            int segment_index,
                            const std::vector<double>& omega_grid,
                            const TauPolicy& tau_policy, int nev,
                            const SweepOptions& opts) {
  if (segment_index < 0 ||
      segment_index >= static_cast<int>(path.segments.size()))
    throw OutOfRange("sweep_quadratic: segment index out of range");
  const PathSegment& seg = path.segments[segment_index];
  double seg_offset = 0.0;
  for (int i = 0; i < segment_index; ++i) seg_offset += path.segments[i].length;

  // A frequency-independent model shares one convolution table.
  std::optional<InvEpsilonTable> shared;
  if (!frequency_dependent(model))
    shared.emplace(inv_epsilon_fourier(model, 0.0, basis.order(), opts.grid));

  SweepResult out;
  std::vector<std::vector<BandPoint>> slots(omega_grid.size());
  std::vector<std::pair<double, std::string>> failures;

#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    const double omega = omega_grid[i];
    try {
      double tau;
      if (tau_policy.fixed) {
        tau = tau_policy.tau;
      } else {
        tau = tau_select_lenient(seg.start, seg.direction, omega, model).tau;
      }
      const WaveVectorSplit split(seg.start, seg.direction, tau);
      QuadraticOptions qo = to_quadratic_options(opts);
      if (shared) qo.table = &*shared;
      const auto res = solve_quadratic_eta(omega, split, model, basis, nev, qo);
      for (const auto& pr : res.pairs) {
        BandPoint pt;
        pt.alpha = seg_offset + pr.lambda.real();
        pt.k = pr.k.real();
        pt.omega = omega;
        pt.has_eta = true;
        pt.eta = pr.eta;
        pt.source = BandPoint::Source::Quadratic;
        pt.residual = pr.residual;
        pt.p_norm = pr.p_norm;
        pt.s_abs = pr.s_abs;
        pt.flag = pr.flag;
        slots[i].push_back(pt);
      }
    } catch (const std::exception& e) {
#pragma omp critical
      failures.emplace_back(omega, e.what());
    }
  }

  // Deterministic merge in grid order regardless of completion order.
  for (std::size_t i = 0; i < omega_grid.size(); ++i)
    for (auto& pt : slots[i]) out.points.push_back(std::move(pt));
  std::sort(failures.begin(), failures.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  out.failures = std::move(failures);
  return out;
}

std::vector<ConvergenceRow> convergence_study(const PermittivityModel& model,
                                              const Vec3& k_ref,
                                              double omega_ref,
                                              const std::vector<int>& orders,
                                              const SweepOptions& opts) {
  // Locate the path segment carrying k_ref.
  const PathSpec path = PathSpec::cubic_gamma_x_m_r();
  int seg_index = -1;
  double lambda_ref = 0.0;
  for (std::size_t i = 0; i < path.segments.size(); ++i) {
    const auto& seg = path.segments[i];
    const double lam = (k_ref - seg.start).dot(seg.direction);
    if (lam >= -1e-9 && lam <= seg.length + 1e-9 &&
        (k_ref - seg.start - lam * seg.direction).norm() <= 1e-9) {
      seg_index = static_cast<int>(i);
      lambda_ref = lam;
      break;
    }
  }
  if (seg_index < 0)
    throw OutOfRange("convergence_study: k_ref is not on the built-in path");
  const PathSegment& seg = path.segments[seg_index];

  std::vector<ConvergenceRow> rows;
  for (int order : orders) {
    const PlaneWaveSet basis(order);
    const double tau =
        tau_select_lenient(seg.start, seg.direction, omega_ref, model).tau;
    const WaveVectorSplit split(seg.start, seg.direction, tau);

    QuadraticOptions qo = to_quadratic_options(opts);
    // Aim the spectral transformation near the expected eta, slightly
    // off-center so an exact eigenvalue cannot make the factor singular.
    qo.shift = Complex(lambda_ref - tau + 0.0171, 0.0);
    const int nev = 8;
    const auto res = solve_quadratic_eta(omega_ref, split, model, basis, nev, qo);

    double best = 1e300;
    Vec3 best_k = Vec3::Zero();
    for (const auto& pr : res.pairs) {
      if (std::abs(pr.lambda.imag()) > qo.im_tol) continue;
      const Vec3 kc = seg.start + pr.lambda.real() * seg.direction;
      const double err = (kc - k_ref).norm();
      if (err < best) {
        best = err;
        best_k = kc;
      }
    }
    if (best >= 1e300)
      throw EigenFailure("convergence_study: no real-lambda pair found");
    rows.push_back({order, 7 * basis.size() + 1, best / k_ref.norm(), best_k});
  }
  return rows;
}

}  // namespace bloch
