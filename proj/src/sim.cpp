#include "agfit/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agfit/rng.hpp"

namespace agfit {

std::vector<std::uint8_t> sample_attributes(int n, double p_x, Rng& rng) {
  if (!(p_x >= 0.0 && p_x <= 1.0))
    throw DomainError("attribute marginal out of [0,1]");
  std::vector<std::uint8_t> attrs(n);
  for (int i = 0; i < n; ++i) attrs[i] = rng.bernoulli(p_x) ? 1 : 0;
  return attrs;
}

std::vector<std::pair<int, int>> sample_edges(const EdgeProbabilityModel& model,
                                              Rng& rng) {
  const int n = model.node_count;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double p = model.p(i, j);
      if (p <= 0.0) continue;
      if (p >= 1.0 || rng.bernoulli(p)) edges.emplace_back(i, j);
    }
  return edges;
}

AttributedGraph sample_graph(const EdgeProbabilityModel& model,
                             const std::vector<std::uint8_t>& attributes,
                             Rng& rng) {
  return AttributedGraph(model.node_count, sample_edges(model, rng),
                         attributes);
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// One Monte-Carlo trial, fully determined by (config.seed, trial index).
double run_trial(const EdgeProbabilityModel& model,
                 const SimulationConfig& config, long long trial) {
  Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(trial)));
  std::vector<std::uint8_t> attrs =
      config.fixed_attributes
          ? *config.fixed_attributes
          : sample_attributes(model.node_count, config.p_x, rng);
  AttributedGraph g = sample_graph(model, attrs, rng);
  const std::optional<double> phi = try_phi_of_graph(g);
  return phi ? *phi : kNan;
}

RhoSummary summarize(const std::vector<double>& rho) {
  RhoSummary s;
  std::vector<double> defined;
  defined.reserve(rho.size());
  for (double r : rho) {
    if (std::isnan(r)) {
      ++s.undefined;
    } else {
      defined.push_back(r);
    }
  }
  s.defined = static_cast<long long>(defined.size());
  if (defined.empty()) return s;
  std::sort(defined.begin(), defined.end());
  double sum = 0.0;
  for (double r : defined) sum += r;
  s.mean = sum / static_cast<double>(defined.size());
  s.minimum = defined.front();
  s.maximum = defined.back();
  auto quantile = [&defined](double q) {
    const double pos = q * static_cast<double>(defined.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, defined.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return defined[lo] + frac * (defined[hi] - defined[lo]);
  };
  s.q05 = quantile(0.05);
  s.q25 = quantile(0.25);
  s.median = quantile(0.50);
  s.q75 = quantile(0.75);
  s.q95 = quantile(0.95);
  return s;
}

}  // namespace

RhoDistribution rho_out_distribution(const EdgeProbabilityModel& model,
                                     const SimulationConfig& config,
                                     RunPolicy policy) {
  if (config.trials < 1) throw DomainError("need at least one trial");
  if (config.fixed_attributes &&
      static_cast<int>(config.fixed_attributes->size()) != model.node_count)
    throw DomainError("fixed attributes do not match model size");

  RhoDistribution dist;
  dist.rho.assign(static_cast<std::size_t>(config.trials), 0.0);
  if (policy == RunPolicy::Serial) {
    for (long long t = 0; t < config.trials; ++t)
      dist.rho[static_cast<std::size_t>(t)] = run_trial(model, config, t);
  } else {
#pragma omp parallel for schedule(static)
    for (long long t = 0; t < config.trials; ++t)
      dist.rho[static_cast<std::size_t>(t)] = run_trial(model, config, t);
  }
  dist.summary = summarize(dist.rho);
  return dist;
}

CoverageReport verify_bound(const AttributedGraph& g,
                            const EdgeProbabilityModel& model,
                            const SimulationConfig& config, DeltaForm form,
                            RunPolicy policy) {
  CoverageReport report;
  report.bound =
      representation_probability(g, model, config.eps1, config.eps3, form);
  report.rho_in = phi_of_graph(g);

  SimulationConfig sim = config;
  sim.fixed_attributes = g.attributes;  // constant-rho regime
  const RhoDistribution dist = rho_out_distribution(model, sim, policy);

  report.defined_trials = dist.summary.defined;
  report.undefined_trials = dist.summary.undefined;
  for (double r : dist.rho)
    if (!std::isnan(r) && std::fabs(report.rho_in - r) < report.bound.epsilon)
      ++report.hits;
  report.empirical_freq =
      report.defined_trials > 0
          ? static_cast<double>(report.hits) /
                static_cast<double>(report.defined_trials)
          : 0.0;
  report.std_error =
      report.defined_trials > 0
          ? std::sqrt(report.empirical_freq * (1.0 - report.empirical_freq) /
                      static_cast<double>(report.defined_trials))
          : 0.0;
  report.vacuous = report.bound.probability_lower_bound <= 0.0;
  report.pass = report.vacuous ||
                (report.defined_trials > 0 &&
                 report.empirical_freq >= report.bound.probability_lower_bound -
                                              3.0 * report.std_error);
  return report;
}

namespace {

LandscapeRow landscape_row(long long m11, long long m01, double mu,
                           long long avail00, long long avail01,
                           long long avail11, double eps1, double eps3,
                           DeltaForm form) {
  LandscapeRow row;
  row.m11 = m11;
  row.m01 = m01;
  row.phi = kNan;
  row.sampling_probability = 0.0;

  if (m11 > avail11 || m01 > avail01) {
    row.feasible = false;
    return row;
  }
  const long long target = static_cast<long long>(std::llround(mu));
  const long long m00 =
      std::clamp(target - m11 - m01, static_cast<long long>(0), avail00);
  const long long total = m00 + m01 + m11;
  if (total <= 0) {
    row.feasible = false;
    return row;
  }
  const double beta1 = static_cast<double>(m00) / static_cast<double>(total);
  const double beta3 = static_cast<double>(m11) / static_cast<double>(total);
  const double p = beta3 + (1.0 - beta1 - beta3) / 2.0;
  if (p <= 0.0 || p >= 1.0) {
    row.feasible = false;
    return row;
  }
  // Pure-label configurations evaluate to exactly +/-1 up to rounding;
  // clamp so the emitted landscape stays inside the documented range.
  row.phi = std::clamp(rho_from_beta(beta1, beta3), -1.0, 1.0);
  if (beta1 - eps1 > 0.0 && beta3 - eps3 > 0.0) {
    const DeltaResult d =
        compute_delta(mu, static_cast<double>(m00), static_cast<double>(m11),
                      beta1, beta3, eps1, eps3, form);
    row.sampling_probability = std::clamp(1.0 - d.delta, 0.0, 1.0);
  }
  return row;
}

}  // namespace

std::vector<LandscapeRow> landscape(const EdgeProbabilityModel& model,
                                    const std::vector<std::uint8_t>& attributes,
                                    const LandscapeGrid& grid, double eps1,
                                    double eps3, DeltaForm form,
                                    RunPolicy policy) {
  if (grid.m11_steps < 1 || grid.m01_steps < 1)
    throw DomainError("grid needs at least one step per axis");
  const Factorization f =
      factorize(model, attributes, FactorizeOptions{.with_positions = false});
  if (f.kappa() == 0)
    throw DegenerateMarginError("model assigns zero probability everywhere");

  long long avail00 = 0, avail01 = 0, avail11 = 0;
  for (const FactorCell& cell : f.cells) {
    if (cell.label == EdgeLabel::L00) avail00 += cell.count;
    if (cell.label == EdgeLabel::L01) avail01 += cell.count;
    if (cell.label == EdgeLabel::L11) avail11 += cell.count;
  }
  const double mu = f.expected_edge_total();

  const long long m11_hi = grid.m11_max >= 0 ? grid.m11_max : avail11;
  const long long m01_hi = grid.m01_max >= 0 ? grid.m01_max : avail01;
  auto axis = [](long long lo, long long hi, int steps) {
    std::vector<long long> values;
    if (steps == 1 || hi <= lo) {
      values.push_back(lo);
      return values;
    }
    for (int s = 0; s < steps; ++s) {
      const long long v =
          lo + static_cast<long long>(std::llround(
                   static_cast<double>(hi - lo) * s / (steps - 1)));
      if (values.empty() || v != values.back()) values.push_back(v);
    }
    return values;
  };
  const std::vector<long long> m11_axis =
      axis(grid.m11_min, m11_hi, grid.m11_steps);
  const std::vector<long long> m01_axis =
      axis(grid.m01_min, m01_hi, grid.m01_steps);

  std::vector<LandscapeRow> rows(m11_axis.size() * m01_axis.size());
  const long long total_rows = static_cast<long long>(rows.size());
  if (policy == RunPolicy::Serial) {
    for (long long idx = 0; idx < total_rows; ++idx) {
      const long long a = idx / static_cast<long long>(m01_axis.size());
      const long long b = idx % static_cast<long long>(m01_axis.size());
      rows[static_cast<std::size_t>(idx)] =
          landscape_row(m11_axis[a], m01_axis[b], mu, avail00, avail01,
                        avail11, eps1, eps3, form);
    }
  } else {
#pragma omp parallel for schedule(static)
    for (long long idx = 0; idx < total_rows; ++idx) {
      const long long a = idx / static_cast<long long>(m01_axis.size());
      const long long b = idx % static_cast<long long>(m01_axis.size());
      rows[static_cast<std::size_t>(idx)] =
          landscape_row(m11_axis[a], m01_axis[b], mu, avail00, avail01,
                        avail11, eps1, eps3, form);
    }
  }
  return rows;
}

std::optional<double> max_correlation(const std::vector<LandscapeRow>& rows,
                                      double probability_threshold) {
  std::optional<double> best;
  for (const LandscapeRow& row : rows) {
    if (!row.feasible || std::isnan(row.phi)) continue;
    if (row.sampling_probability < probability_threshold) continue;
    if (!best || row.phi > *best) best = row.phi;
  }
  return best;
}

}  // namespace agfit
