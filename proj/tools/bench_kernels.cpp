// Compares the OpenMP kernels against their serial reference implementations:
// same results bit for bit, wall-clock side by side.
//
//   bench_kernels [--samples N] [--directions K] [--lattice N] [--steps K]

#include <chrono>
#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <omp.h>

#include "qmbench/linalg.hpp"
#include "qmbench/path_lab.hpp"
#include "qmbench/spin_sphere.hpp"

namespace {

double seconds(std::chrono::steady_clock::time_point a,
               std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <typename F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return seconds(t0, std::chrono::steady_clock::now());
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t n_samples = 2000000;
  int n_directions = 32;
  int lattice_n = 192;
  int n_steps = 64;

  CLI::App app{"serial vs OpenMP kernel comparison"};
  app.add_option("--samples", n_samples, "Monte Carlo samples for the sphere kernel");
  app.add_option("--directions", n_directions, "Test directions for the sphere kernel");
  app.add_option("--lattice", lattice_n, "Lattice sites for the Heisenberg kernel");
  app.add_option("--steps", n_steps, "Time-grid steps for the Heisenberg kernel");
  CLI11_PARSE(app, argc, argv);

  std::printf("threads available: %d\n\n", omp_get_max_threads());

  using namespace qmbench;
  {
    SphereModelConfig cfg;
    cfg.conditioning_direction = unit_vector(0, 0, 1);
    cfg.n_samples = n_samples;
    cfg.seed = 20240816;
    const auto dirs = fibonacci_sphere_grid(n_directions);

    std::vector<std::uint64_t> serial, parallel;
    const double ts = timed([&] { serial = sphere_counts_serial(cfg, dirs); });
    const double tp = timed([&] { parallel = sphere_counts(cfg, dirs); });
    const bool same = serial == parallel;
    std::printf("sphere counts   %llu samples x %d directions\n",
                static_cast<unsigned long long>(n_samples), n_directions);
    std::printf("  serial   %8.3f s\n  parallel %8.3f s   speedup %.2fx   %s\n\n", ts, tp,
                ts / tp, same ? "identical counts" : "COUNTS DIFFER");
    if (!same) return 1;
  }
  {
    const Lattice1D lat = Lattice1D::centered(lattice_n, 1.0);
    const LatticeSystem sys(lat, build_hamiltonian(lat, {}, 1.0));
    const TimeGrid grid(0.0, 50.0, n_steps);

    std::vector<Mat> serial, parallel;
    const double ts = timed([&] { serial = heisenberg_positions_serial(sys, grid); });
    const double tp = timed([&] { parallel = heisenberg_positions(sys, grid); });
    double diff = 0.0;
    for (std::size_t k = 0; k < serial.size(); ++k)
      diff = std::max(diff, max_abs_norm(serial[k] - parallel[k]));
    std::printf("heisenberg x(t) %d sites x %d times\n", lattice_n, n_steps);
    std::printf("  serial   %8.3f s\n  parallel %8.3f s   speedup %.2fx   max diff %g\n",
                ts, tp, ts / tp, diff);
    if (diff != 0.0) return 1;
  }
  return 0;
}
