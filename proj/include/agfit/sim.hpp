#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "agfit/bounds.hpp"
#include "agfit/graph.hpp"
#include "agfit/models.hpp"
#include "agfit/rng.hpp"

namespace agfit {

// Serial is the reference implementation; Parallel runs the same per-task
// kernels under OpenMP.  Both produce identical results because every task
// owns an engine seeded from (seed, task index).
enum class RunPolicy { Serial, Parallel };

struct SimulationConfig {
  long long trials = 1000;
  std::uint64_t seed = 1;
  // Attribute source: resample Bernoulli(p_x) per trial unless fixed
  // attributes are supplied.
  double p_x = 0.5;
  std::optional<std::vector<std::uint8_t>> fixed_attributes;
  double eps1 = 0.05;
  double eps3 = 0.05;
};

std::vector<std::uint8_t> sample_attributes(int n, double p_x, Rng& rng);

// Independent Bernoulli edge per node pair.
std::vector<std::pair<int, int>> sample_edges(const EdgeProbabilityModel& model,
                                              Rng& rng);
AttributedGraph sample_graph(const EdgeProbabilityModel& model,
                             const std::vector<std::uint8_t>& attributes,
                             Rng& rng);

struct RhoSummary {
  long long defined = 0;
  long long undefined = 0;
  double mean = 0.0;
  double minimum = 0.0;
  double maximum = 0.0;
  double q05 = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, q95 = 0.0;
};

struct RhoDistribution {
  std::vector<double> rho;  // one entry per trial; NaN marks degenerate
  RhoSummary summary;
};

// Sample `trials` graphs from the model and record each sample's phi.
RhoDistribution rho_out_distribution(const EdgeProbabilityModel& model,
                                     const SimulationConfig& config,
                                     RunPolicy policy = RunPolicy::Parallel);

struct CoverageReport {
  RepresentationReport bound;
  double rho_in = 0.0;
  long long defined_trials = 0;
  long long undefined_trials = 0;
  long long hits = 0;          // trials with |rho_in - rho_out| < epsilon
  double empirical_freq = 0.0;
  double std_error = 0.0;      // sqrt(f (1-f) / defined)
  bool vacuous = false;        // lower bound <= 0
  bool pass = false;           // freq >= (1 - delta) - 3 std_error, or vacuous
};

// Check the representation bound against Monte-Carlo frequency.  The
// sampled graphs reuse the reference graph's attributes, matching the
// constant-rho regime the bound is derived for.
CoverageReport verify_bound(const AttributedGraph& g,
                            const EdgeProbabilityModel& model,
                            const SimulationConfig& config,
                            DeltaForm form = DeltaForm::Plus,
                            RunPolicy policy = RunPolicy::Parallel);

struct LandscapeRow {
  long long m11 = 0;
  long long m01 = 0;
  double phi = 0.0;  // NaN when the configuration has degenerate margins
  double sampling_probability = 0.0;
  bool feasible = true;
};

struct LandscapeGrid {
  long long m11_max = -1;  // -1: use full availability
  long long m01_max = -1;
  int m11_steps = 41;
  int m01_steps = 41;
  long long m11_min = 0;
  long long m01_min = 0;
};

// Sweep target label configurations (m11, m01); m00 tops the configuration
// up to the expected edge total, clipped to availability.  phi comes from
// the configuration fractions, the sampling probability from compute_delta
// with the configuration's label totals.
std::vector<LandscapeRow> landscape(const EdgeProbabilityModel& model,
                                    const std::vector<std::uint8_t>& attributes,
                                    const LandscapeGrid& grid, double eps1,
                                    double eps3,
                                    DeltaForm form = DeltaForm::Plus,
                                    RunPolicy policy = RunPolicy::Parallel);

// Largest phi among feasible rows whose sampling probability clears the
// threshold; empty when no row qualifies.
std::optional<double> max_correlation(const std::vector<LandscapeRow>& rows,
                                      double probability_threshold = 0.95);

}  // namespace agfit
