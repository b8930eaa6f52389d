// Timing comparison of the stepping kernel and the reference curvature path,
// serial vs OpenMP. Not part of the test suite; run manually:
//   ./bench_kernels [n_theta] [n_phi] [reps]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "icf/geometry.hpp"

using namespace icf;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

SurfaceState perturbed_sphere(int nt, int np) {
  auto grid = std::make_shared<SphericalGrid>(nt, np);
  SurfaceState s;
  s.u.resize(grid->size());
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < np; ++j) {
      const double c = std::cos(grid->theta(i));
      s.u[grid->index(i, j)] = 1.0 + 0.1 * c * c;
    }
  s.grid = std::move(grid);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  const int nt = argc > 1 ? std::atoi(argv[1]) : 64;
  const int np = argc > 2 ? std::atoi(argv[2]) : 128;
  const int reps = argc > 3 ? std::atoi(argv[3]) : 400;

  const SpaceForm sf(0);
  const SpeedFunction& f = speed_by_name("mean_curvature");
  const SurfaceState state = perturbed_sphere(nt, np);
  const double nodes = static_cast<double>(state.u.size());

#ifdef _OPENMP
  std::printf("grid %dx%d, %d reps, OpenMP max threads %d\n", nt, np, reps,
              omp_get_max_threads());
#else
  std::printf("grid %dx%d, %d reps, OpenMP unavailable\n", nt, np, reps);
#endif

  std::vector<double> rhs;
  volatile double sink = 0.0;

  for (Backend backend : {Backend::serial, Backend::openmp}) {
    const char* label = backend == Backend::serial ? "serial" : "openmp";
    flow_rhs(sf, f, 1.0, state, rhs, backend);  // warm up
    auto t0 = clock_type::now();
    for (int r = 0; r < reps; ++r) {
      flow_rhs(sf, f, 1.0, state, rhs, backend);
      sink = sink + rhs[0];
    }
    const double dt = seconds_since(t0);
    std::printf("flow_rhs  %-7s %8.3f ms/call  %7.1f ns/node\n", label, 1e3 * dt / reps,
                1e9 * dt / reps / nodes);
  }

  for (Backend backend : {Backend::serial, Backend::openmp}) {
    const char* label = backend == Backend::serial ? "serial" : "openmp";
    auto t0 = clock_type::now();
    const int creps = std::max(reps / 10, 1);
    for (int r = 0; r < creps; ++r) {
      const CurvatureField c = compute_curvature(sf, f, state, backend);
      sink = sink + c.lambda1[0];
    }
    const double dt = seconds_since(t0);
    std::printf("curvature %-7s %8.3f ms/call  %7.1f ns/node\n", label, 1e3 * dt / creps,
                1e9 * dt / creps / nodes);
  }
  (void)sink;
  return 0;
}
