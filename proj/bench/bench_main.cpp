// Timing harness comparing the serial reference kernels against the
// OpenMP-parallel ones.  Prints one table row per workload with both wall
// times and the speedup; exits non-zero if the two policies ever disagree
// on the result, so the benchmark doubles as a consistency check.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "agfit/models.hpp"
#include "agfit/rng.hpp"
#include "agfit/sim.hpp"

using namespace agfit;

namespace {

template <typename F>
double time_seconds(F&& work) {
  const auto start = std::chrono::steady_clock::now();
  work();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

bool same_rows(const std::vector<LandscapeRow>& a,
               const std::vector<LandscapeRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool nan_match = std::isnan(a[i].phi) && std::isnan(b[i].phi);
    if (a[i].m11 != b[i].m11 || a[i].m01 != b[i].m01 ||
        a[i].feasible != b[i].feasible ||
        (!nan_match && a[i].phi != b[i].phi) ||
        a[i].sampling_probability != b[i].sampling_probability)
      return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  long long trials = 4000;
  int n = 300;
  if (argc > 1) trials = std::atoll(argv[1]);
  if (argc > 2) n = std::atoi(argv[2]);

#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; parallel policy runs serially\n");
#endif
  std::printf("%-28s %10s %10s %8s\n", "workload", "serial[s]",
              "parallel[s]", "speedup");

  bool consistent = true;

  {
    const EdgeProbabilityModel model = er_model(n, 0.3);
    SimulationConfig config;
    config.trials = trials;
    config.seed = 7;
    RhoDistribution serial, parallel;
    const double ts = time_seconds([&] {
      serial = rho_out_distribution(model, config, RunPolicy::Serial);
    });
    const double tp = time_seconds([&] {
      parallel = rho_out_distribution(model, config, RunPolicy::Parallel);
    });
    consistent = consistent && serial.rho == parallel.rho;
    std::printf("%-28s %10.3f %10.3f %7.2fx\n",
                ("rho sampling n=" + std::to_string(n)).c_str(), ts, tp,
                ts / tp);
  }

  {
    const int big = 4 * n;
    const EdgeProbabilityModel model = er_model(big, 0.5);
    std::vector<std::uint8_t> attrs(static_cast<std::size_t>(big), 0);
    for (int i = big / 2; i < big; ++i)
      attrs[static_cast<std::size_t>(i)] = 1;
    LandscapeGrid grid;
    grid.m11_steps = 61;
    grid.m01_steps = 61;
    std::vector<LandscapeRow> serial, parallel;
    const double ts = time_seconds([&] {
      serial = landscape(model, attrs, grid, 0.02, 0.02, DeltaForm::Plus,
                         RunPolicy::Serial);
    });
    const double tp = time_seconds([&] {
      parallel = landscape(model, attrs, grid, 0.02, 0.02, DeltaForm::Plus,
                           RunPolicy::Parallel);
    });
    consistent = consistent && same_rows(serial, parallel);
    std::printf("%-28s %10.3f %10.3f %7.2fx\n",
                ("landscape 61x61 n=" + std::to_string(big)).c_str(), ts, tp,
                ts / tp);
  }

  {
    const EdgeProbabilityModel model = er_model(n, 0.3);
    SimulationConfig config;
    config.trials = trials;
    config.seed = 11;
    Rng rng(3);
    const AttributedGraph reference =
        sample_graph(model, sample_attributes(n, 0.5, rng), rng);
    CoverageReport serial, parallel;
    const double ts = time_seconds([&] {
      serial = verify_bound(reference, model, config, DeltaForm::Plus,
                            RunPolicy::Serial);
    });
    const double tp = time_seconds([&] {
      parallel = verify_bound(reference, model, config, DeltaForm::Plus,
                              RunPolicy::Parallel);
    });
    consistent = consistent && serial.hits == parallel.hits &&
                 serial.empirical_freq == parallel.empirical_freq;
    std::printf("%-28s %10.3f %10.3f %7.2fx\n",
                ("bound coverage n=" + std::to_string(n)).c_str(), ts, tp,
                ts / tp);
  }

  if (!consistent) {
    std::printf("policy mismatch: serial and parallel results differ\n");
    return 1;
  }
  std::printf("serial and parallel results identical\n");
  return 0;
}
