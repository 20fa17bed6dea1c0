#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "agfit/bounds.hpp"
#include "agfit/graph.hpp"
#include "agfit/models.hpp"
#include "agfit/rng.hpp"
#include "agfit/sim.hpp"
#include "test_util.hpp"

using namespace agfit;

namespace {

bool same_values(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool nan_a = std::isnan(a[i]);
    const bool nan_b = std::isnan(b[i]);
    if (nan_a != nan_b) return false;
    if (!nan_a && a[i] != b[i]) return false;
  }
  return true;
}

// Half-and-half attribute vector: first half 0, second half 1.
std::vector<std::uint8_t> split_attributes(int n) {
  std::vector<std::uint8_t> attrs(n, 0);
  for (int i = n / 2; i < n; ++i) attrs[i] = 1;
  return attrs;
}

}  // namespace

TEST_CASE("attribute sampling") {
  Rng rng(1);
  SUBCASE("degenerate marginals") {
    const auto zeros = sample_attributes(50, 0.0, rng);
    const auto ones = sample_attributes(50, 1.0, rng);
    for (int i = 0; i < 50; ++i) {
      CHECK(zeros[i] == 0);
      CHECK(ones[i] == 1);
    }
  }
  SUBCASE("law of large numbers at 0.5") {
    const auto attrs = sample_attributes(100000, 0.5, rng);
    long long sum = 0;
    for (auto a : attrs) sum += a;
    CHECK(std::fabs(sum / 100000.0 - 0.5) < 0.01);
  }
  SUBCASE("marginal out of range") {
    CHECK_THROWS_AS(sample_attributes(10, 1.5, rng), DomainError);
  }
}

TEST_CASE("edge sampling") {
  SUBCASE("all-zero and all-one probabilities") {
    Rng rng(2);
    CHECK(sample_edges(er_model(20, 0.0), rng).empty());
    CHECK(sample_edges(er_model(20, 1.0), rng).size() == 190);
  }
  SUBCASE("mean edge count matches binomial moments") {
    // ER(100, 0.3): mean over 300 draws within 3 standard errors of 1485.
    Rng rng(3);
    const EdgeProbabilityModel model = er_model(100, 0.3);
    double total = 0.0;
    const int trials = 300;
    for (int t = 0; t < trials; ++t)
      total += static_cast<double>(sample_edges(model, rng).size());
    const double expected = 4950.0 * 0.3;
    const double sigma_mean =
        std::sqrt(4950.0 * 0.3 * 0.7) / std::sqrt(static_cast<double>(trials));
    CHECK(std::fabs(total / trials - expected) < 3.0 * sigma_mean);
  }
  SUBCASE("per-pair inclusion frequencies match the matrix") {
    const int n = 6;
    std::vector<double> prob(n * n, 0.0);
    EdgeProbabilityModel model = custom_model(n, prob);
    model.set_p(0, 1, 0.15);
    model.set_p(0, 2, 0.5);
    model.set_p(3, 4, 0.85);
    model.set_p(2, 5, 1.0);
    Rng rng(4);
    const int trials = 2000;
    std::map<std::pair<int, int>, int> counts;
    for (int t = 0; t < trials; ++t)
      for (const auto& e : sample_edges(model, rng)) ++counts[e];
    CHECK(counts[{2, 5}] == trials);
    for (const auto& [pair, p] : std::vector<std::pair<std::pair<int, int>, double>>{
             {{0, 1}, 0.15}, {{0, 2}, 0.5}, {{3, 4}, 0.85}}) {
      const double freq = static_cast<double>(counts[pair]) / trials;
      CHECK(std::fabs(freq - p) < 4.0 * std::sqrt(p * (1.0 - p) / trials));
    }
  }
}

TEST_CASE("sampled correlation distribution") {
  SUBCASE("same-label-only mass leaves every trial undefined") {
    const int n = 10;
    const auto attrs = split_attributes(n);
    std::vector<double> prob(n * n, 0.0);
    EdgeProbabilityModel model = custom_model(n, prob);
    for (int i = n / 2; i < n; ++i)
      for (int j = i + 1; j < n; ++j) model.set_p(i, j, 1.0);

    SimulationConfig config;
    config.trials = 50;
    config.fixed_attributes = attrs;
    const RhoDistribution dist = rho_out_distribution(model, config);
    CHECK(dist.summary.undefined == 50);
    CHECK(dist.summary.defined == 0);
    for (double r : dist.rho) CHECK(std::isnan(r));
  }
  SUBCASE("independent attributes center the correlation at zero") {
    SimulationConfig config;
    config.trials = 400;
    config.seed = 77;
    config.p_x = 0.5;
    const RhoDistribution dist =
        rho_out_distribution(er_model(100, 0.3), config);
    CHECK(dist.summary.defined == 400);
    CHECK(std::fabs(dist.summary.mean) < 0.02);
  }
  SUBCASE("summary quantiles are ordered") {
    SimulationConfig config;
    config.trials = 200;
    config.seed = 9;
    const RhoDistribution dist =
        rho_out_distribution(er_model(40, 0.4), config);
    const RhoSummary& s = dist.summary;
    CHECK(s.defined + s.undefined == 200);
    CHECK(s.minimum <= s.q05);
    CHECK(s.q05 <= s.q25);
    CHECK(s.q25 <= s.median);
    CHECK(s.median <= s.q75);
    CHECK(s.q75 <= s.q95);
    CHECK(s.q95 <= s.maximum);
  }
  SUBCASE("fixed seed reproduces the sequence; policies agree bitwise") {
    SimulationConfig config;
    config.trials = 64;
    config.seed = 123;
    const EdgeProbabilityModel model = er_model(30, 0.4);
    const RhoDistribution a =
        rho_out_distribution(model, config, RunPolicy::Parallel);
    const RhoDistribution b =
        rho_out_distribution(model, config, RunPolicy::Parallel);
    const RhoDistribution serial =
        rho_out_distribution(model, config, RunPolicy::Serial);
    CHECK(same_values(a.rho, b.rho));
    CHECK(same_values(a.rho, serial.rho));
  }
  SUBCASE("config validation") {
    SimulationConfig config;
    config.trials = 0;
    CHECK_THROWS_AS(rho_out_distribution(er_model(10, 0.5), config),
                    DomainError);
    config.trials = 1;
    config.fixed_attributes = std::vector<std::uint8_t>(3, 0);
    CHECK_THROWS_AS(rho_out_distribution(er_model(10, 0.5), config),
                    DomainError);
  }
}

TEST_CASE("bound verification against Monte-Carlo coverage") {
  SUBCASE("self-fitted constant model passes") {
    Rng rng(515151);
    const AttributedGraph g = testutil::random_graph(60, 0.4, 0.5, rng);
    const EdgeProbabilityModel model = fit_er(g);
    SimulationConfig config;
    config.trials = 500;
    config.seed = 1001;
    const CoverageReport report = verify_bound(g, model, config);
    CHECK(report.bound.probability_lower_bound > 0.9);
    CHECK_FALSE(report.vacuous);
    CHECK(report.defined_trials == 500);
    CHECK(report.pass);
    CHECK(report.empirical_freq >=
          report.bound.probability_lower_bound - 3.0 * report.std_error);
  }
  SUBCASE("capped adversarial instance is vacuous but honest") {
    const int n = 30;
    const auto attrs = split_attributes(n);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 15; ++i)
      for (int j = i + 1; j < 15; ++j) edges.emplace_back(i, j);
    for (int i = 15; i < n; ++i)
      for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    for (int i = 0; i < 4; ++i) edges.emplace_back(i, 15 + i);
    const AttributedGraph g(n, std::move(edges), attrs);

    SimulationConfig config;
    config.trials = 400;
    config.seed = 31;
    config.eps1 = 0.005;
    config.eps3 = 0.005;
    const CoverageReport report = verify_bound(g, er_model(n, 0.9), config);
    CHECK(report.vacuous);
    CHECK(report.pass);
    CHECK(report.bound.probability_lower_bound == 0.0);
    CHECK(report.bound.rho_ceiling() == kRhoCeiling);
    CHECK(report.empirical_freq < 0.1);
  }
}

TEST_CASE("correlation landscape") {
  // ER(40, 0.3) with balanced fixed attributes: availabilities 190/400/190,
  // expected total 234.  The grid keeps p = beta3 + beta2/2 below 1/2,
  // where phi grows along the ++ axis.
  const int n = 40;
  const auto attrs = split_attributes(n);
  const EdgeProbabilityModel model = er_model(n, 0.3);
  LandscapeGrid grid;
  grid.m11_max = 80;
  grid.m01_max = 60;
  grid.m11_steps = 21;
  grid.m01_steps = 16;

  const auto rows = landscape(model, attrs, grid, 0.05, 0.05);

  SUBCASE("grid covers the requested rectangle") {
    CHECK(rows.size() == 21 * 16);
    CHECK(rows.front().m11 == 0);
    CHECK(rows.front().m01 == 0);
    CHECK(rows.back().m11 == 80);
    CHECK(rows.back().m01 == 60);
  }
  SUBCASE("pure same-label rows have maximal phi") {
    for (const auto& row : rows) {
      if (!row.feasible || std::isnan(row.phi)) continue;
      CHECK(row.phi <= 1.0 + 1e-12);
      CHECK(row.phi >= -1.0 - 1e-12);
      if (row.m01 == 0 && row.m11 > 0)
        CHECK(row.phi == doctest::Approx(1.0));
    }
  }
  SUBCASE("phi is non-decreasing along the ++ axis") {
    std::map<long long, std::vector<std::pair<long long, double>>> by_m01;
    for (const auto& row : rows)
      if (row.feasible && !std::isnan(row.phi))
        by_m01[row.m01].emplace_back(row.m11, row.phi);
    CHECK(by_m01.size() > 1);
    for (auto& [m01, column] : by_m01) {
      std::sort(column.begin(), column.end());
      for (std::size_t i = 1; i < column.size(); ++i)
        CHECK(column[i].second >= column[i - 1].second - 1e-12);
    }
  }
  SUBCASE("requests beyond availability are infeasible") {
    LandscapeGrid wide;
    wide.m11_max = 400;  // only 190 same-label-1 pairs exist
    wide.m11_steps = 5;
    wide.m01_steps = 3;
    const auto stretched = landscape(model, attrs, wide, 0.05, 0.05);
    bool saw_infeasible = false;
    for (const auto& row : stretched)
      if (row.m11 > 190) {
        CHECK_FALSE(row.feasible);
        saw_infeasible = true;
      }
    CHECK(saw_infeasible);
  }
  SUBCASE("policies agree on every row") {
    const auto serial =
        landscape(model, attrs, grid, 0.05, 0.05, DeltaForm::Plus,
                  RunPolicy::Serial);
    REQUIRE(serial.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(serial[i].m11 == rows[i].m11);
      CHECK(serial[i].m01 == rows[i].m01);
      CHECK(serial[i].feasible == rows[i].feasible);
      const bool nan_a = std::isnan(serial[i].phi);
      const bool nan_b = std::isnan(rows[i].phi);
      CHECK(nan_a == nan_b);
      if (!nan_a) CHECK(serial[i].phi == rows[i].phi);
      CHECK(serial[i].sampling_probability == rows[i].sampling_probability);
    }
  }
}

TEST_CASE("maximum modellable correlation") {
  SUBCASE("same-label-saturated model reaches 1") {
    // Nearly deterministic same-label edges, almost no mixed mass: the row
    // (m11 = all 11 pairs, m01 = 0) is reachable with high probability and
    // carries phi = 1.
    const int n = 90;
    const auto attrs = split_attributes(n);
    std::vector<double> prob(n * n, 0.0);
    EdgeProbabilityModel model = custom_model(n, prob);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const bool same = attrs[i] == attrs[j];
        model.set_p(i, j, same ? 0.999 : 0.0001);
      }
    LandscapeGrid grid;
    grid.m11_steps = 41;
    grid.m01_steps = 41;
    const auto rows = landscape(model, attrs, grid, 0.05, 0.05);
    const auto best = max_correlation(rows);
    REQUIRE(best.has_value());
    CHECK(*best == doctest::Approx(1.0));
  }
  SUBCASE("capped model stays strictly below 1") {
    // ER(0.9) on split attributes: the mean edge total forces many mixed
    // edges into every high-probability configuration, consistent with the
    // triggered ceiling verdict.
    const int n = 30;
    const auto attrs = split_attributes(n);
    const EdgeProbabilityModel model = er_model(n, 0.9);
    LandscapeGrid grid;
    grid.m11_steps = 41;
    grid.m01_steps = 41;
    const auto rows = landscape(model, attrs, grid, 0.05, 0.05);
    const auto best = max_correlation(rows);
    REQUIRE(best.has_value());

    const Factorization f = factorize(model, attrs,
                                      FactorizeOptions{.with_positions = false});
    const auto verdicts = boundedness_check(f);
    REQUIRE(verdicts.size() == 1);
    CHECK(verdicts[0].triggered);
    CHECK(verdicts[0].regime == BoundRegime::Below);
    CHECK(*best < verdicts[0].ceiling);
    CHECK(*best < 0.5);
  }
  SUBCASE("empty when nothing clears the threshold") {
    std::vector<LandscapeRow> rows(3);
    rows[0].feasible = false;
    rows[1].sampling_probability = 0.5;
    rows[1].phi = 0.9;
    rows[2].sampling_probability = 0.2;
    rows[2].phi = 0.1;
    CHECK_FALSE(max_correlation(rows).has_value());
    CHECK(max_correlation(rows, 0.4).has_value());
    CHECK(*max_correlation(rows, 0.4) == doctest::Approx(0.9));
  }
}
