#include "bloch/arnoldi.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace bloch {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Complex = std::complex<double>;

VectorXcd seeded_vector(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(uni(rng), uni(rng));
  return v;
}

/// MGS projection of w against the columns of Q (first k) and V (first j),
/// with one re-pass; coefficients against V are accumulated into h.
void orthogonalize(VectorXcd& w, const MatrixXcd& q, int nq, const MatrixXcd& v,
                   int nv, VectorXcd& h) {
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i < nq; ++i) w -= (q.col(i).dot(w)) * q.col(i);
    for (int i = 0; i < nv; ++i) {
      const Complex c = v.col(i).dot(w);
      h(i) += c;
      w -= c * v.col(i);
    }
  }
}

}  // namespace

ArnoldiResult arnoldi(const ApplyFn& apply, int dim, int subspace, int nev,
                      double tol, int max_restarts) {
  if (nev < 1 || subspace <= nev)
    throw std::invalid_argument("arnoldi: need subspace > nev >= 1");
  subspace = std::min(subspace, dim);

  ArnoldiResult result;
  MatrixXcd locked(dim, nev);  // converged, orthonormal
  std::vector<Complex> locked_values;
  double theta_scale = 0.0;  // magnitude of the largest eigenvalue seen

  auto nlocked = [&] { return static_cast<int>(locked_values.size()); };

  auto finish = [&]() -> ArnoldiResult& {
    std::sort(result.pairs.begin(), result.pairs.end(),
              [](const RitzPair& a, const RitzPair& b) {
                return std::abs(a.value) > std::abs(b.value);
              });
    return result;
  };

  auto try_lock = [&](Complex theta, VectorXcd x) -> bool {
    // Re-orthogonalize against already locked vectors and verify the
    // true residual before accepting.
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < nlocked(); ++i)
        x -= (locked.col(i).dot(x)) * locked.col(i);
    const double nx = x.norm();
    if (nx < 1e-12) return false;
    x /= nx;
    const VectorXcd ax = apply(x);
    const double res = (ax - theta * x).norm() / std::max(1.0, std::abs(theta));
    if (res > 50.0 * tol * std::max(1.0, std::abs(theta)) && res > 1e-8)
      return false;
    locked.col(nlocked()) = x;
    locked_values.push_back(theta);
    result.pairs.push_back(RitzPair{theta, x, res});
    return true;
  };

  std::uint64_t seed = 0x41726e6full;  // fixed start-vector seed
  VectorXcd start = seeded_vector(dim, seed);
  int stagnant_breakdowns = 0;

  for (int restart = 0; restart <= max_restarts; ++restart) {
    result.restarts_used = restart;
    if (nlocked() >= nev) return finish();

    const int m = std::min(subspace, dim - nlocked());
    if (m < 1) {
      result.exhausted_subspace = true;
      return finish();
    }

    // Make the start vector orthogonal to the locked set.
    VectorXcd v0 = start;
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < nlocked(); ++i)
        v0 -= (locked.col(i).dot(v0)) * locked.col(i);
    if (v0.norm() < 1e-14) v0 = seeded_vector(dim, ++seed);
    for (int i = 0; i < nlocked(); ++i)
      v0 -= (locked.col(i).dot(v0)) * locked.col(i);
    v0.normalize();

    MatrixXcd v(dim, m + 1);
    MatrixXcd h = MatrixXcd::Zero(m + 1, m);
    v.col(0) = v0;

    int steps = m;
    bool breakdown = false;
    double hmax = 0.0;
    for (int j = 0; j < m; ++j) {
      VectorXcd w = apply(v.col(j));
      VectorXcd hj = VectorXcd::Zero(j + 1);
      orthogonalize(w, locked, nlocked(), v, j + 1, hj);
      h.block(0, j, j + 1, 1) = hj;
      hmax = std::max(hmax, hj.cwiseAbs().maxCoeff());
      const double hn = w.norm();
      if (hn <= 1e-13 * std::max(hmax, 1e-30)) {
        steps = j + 1;
        breakdown = true;
        break;
      }
      h(j + 1, j) = hn;
      v.col(j + 1) = w / hn;
    }

    const MatrixXcd hm = h.topLeftCorner(steps, steps);
    Eigen::ComplexEigenSolver<MatrixXcd> ces(hm);
    if (ces.info() != Eigen::Success)
      throw EigenFailure("arnoldi: Hessenberg eigensolve failed");

    std::vector<int> order(steps);
    for (int i = 0; i < steps; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(ces.eigenvalues()(a)) > std::abs(ces.eigenvalues()(b));
    });

    const double beta = breakdown ? 0.0 : std::abs(h(steps, steps - 1));
    theta_scale = std::max(theta_scale, std::abs(ces.eigenvalues()(order[0])));
    const double theta_drop = 1e-12 * std::max(theta_scale, 1e-300);

    const int before = nlocked();
    std::vector<int> unconverged;
    for (int oi = 0; oi < steps && nlocked() < nev; ++oi) {
      const int i = order[oi];
      const Complex theta = ces.eigenvalues()(i);
      if (std::abs(theta) <= theta_drop) continue;
      const VectorXcd y = ces.eigenvectors().col(i);
      const double est = beta * std::abs(y(steps - 1));
      if (est <= tol * std::max(std::abs(theta), theta_drop)) {
        if (!try_lock(theta, v.leftCols(steps) * y)) unconverged.push_back(i);
      } else {
        unconverged.push_back(i);
      }
    }
    if (nlocked() >= nev) {
      result.restarts_used = restart;
      return finish();
    }

    if (breakdown) {
      // The Krylov space was invariant. If no new nonzero pair was found
      // twice in a row with fresh starts, the spectrum is exhausted.
      if (nlocked() == before && ++stagnant_breakdowns >= 2) {
        result.exhausted_subspace = true;
        return finish();
      }
      start = seeded_vector(dim, ++seed);
    } else {
      stagnant_breakdowns = 0;
      // Restart towards the still-wanted directions.
      const int want = std::min<int>(nev - nlocked(),
                                     static_cast<int>(unconverged.size()));
      if (want == 0) {
        start = seeded_vector(dim, ++seed);
      } else {
        VectorXcd mix = VectorXcd::Zero(dim);
        for (int w = 0; w < want; ++w)
          mix += v.leftCols(steps) * ces.eigenvectors().col(unconverged[w]);
        start = mix;
      }
    }
  }
  throw ArnoldiNoConvergence(nlocked());
}

}  // namespace bloch
