// Timing comparison of the OpenMP kernels against their serial reference
// implementations: the 1/eps quadrature and the coupled-block assembly.
#include <omp.h>

#include <chrono>
#include <cstdio>

#include "bloch/assembly.hpp"

using namespace bloch;

namespace {

double seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

template <typename Fn>
double time_best_of(int reps, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, seconds(t0));
  }
  return best;
}

}  // namespace

int main() {
  std::printf("threads: %d\n\n", omp_get_max_threads());
  std::printf("%-34s %10s %10s %8s\n", "kernel", "serial[s]", "omp[s]",
              "speedup");

  PermittivityModel rods{RodScaffold{Complex(13.0, 0.0), 0.27057}, "rods"};
  PermittivityModel fcc{FccCoatedSpheres{}, "fcc"};

  struct QuadCase {
    const char* name;
    const PermittivityModel* model;
    int order, grid;
  };
  const QuadCase quads[] = {
      {"inv_eps rods  order=1 grid=24", &rods, 1, 24},
      {"inv_eps fcc   order=1 grid=24", &fcc, 1, 24},
      {"inv_eps rods  order=2 grid=32", &rods, 2, 32},
  };
  for (const auto& q : quads) {
    const double ts = time_best_of(2, [&] {
      inv_epsilon_fourier_serial(*q.model, 0.5, q.order, q.grid);
    });
    const double tp = time_best_of(
        2, [&] { inv_epsilon_fourier(*q.model, 0.5, q.order, q.grid); });
    std::printf("%-34s %10.4f %10.4f %8.2f\n", q.name, ts, tp, ts / tp);
  }

  {
    const PlaneWaveSet basis(2);
    const WaveVectorSplit split(Vec3(0, 0, 0), Vec3(1, 0, 0),
                                kTwoPi / 2.0);
    const auto table = inv_epsilon_fourier(rods, 0.5, 2, 24);
    const double ts = time_best_of(
        3, [&] { assemble_coupling_blocks_serial(basis, split, table); });
    const double tp = time_best_of(
        3, [&] { assemble_coupling_blocks(basis, split, table); });
    std::printf("%-34s %10.4f %10.4f %8.2f\n", "assembly order=2 (125 modes)",
                ts, tp, ts / tp);
  }
  return 0;
}
