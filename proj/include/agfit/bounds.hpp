#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "agfit/graph.hpp"
#include "agfit/models.hpp"

namespace agfit {

// Triggering threshold for the tail-mass ceiling test (exp(-23.03) < 1e-10)
// and the ceiling applied when an over-demanding cell is detected.
inline constexpr double kBoundednessThreshold = 23.03;
inline constexpr double kRhoCeiling = 1.0 - 1e-10;

// Bernoulli Kullback-Leibler divergence D(a || b); a in [0,1], b in (0,1).
double kl_bernoulli(double a, double b);

enum class BoundRegime { Below, Above, None };

// Per-parameter verdict: whether the same-label demand r_j is so far from
// pi_j that samples of that cell pin the correlation away from +/-1.
struct BoundednessVerdict {
  int param_index = 0;
  double pi = 0.0;
  double same_label_rate = 0.0;  // r_j
  long long n = 0;               // n_j
  double kl = 0.0;
  bool triggered = false;
  BoundRegime regime = BoundRegime::None;
  double ceiling = 1.0;  // kRhoCeiling when triggered below, else 1
};

// Verdicts for all parameters with pi in (0,1); pi = 1 cells are exempt.
std::vector<BoundednessVerdict> boundedness_check(const Factorization& f);

// Largest change of rho over the window [beta1 +- eps1] x [beta3 +- eps3],
// evaluated at the monotone corners:
//   max(rho(b1+e1, b3+e3) - rho(b1, b3), rho(b1, b3) - rho(b1-e1, b3-e3)).
// Throws DomainError when a corner leaves the admissible region or hits a
// degenerate margin.
double max_epsilon(double beta1, double beta3, double eps1, double eps3);

enum class DeltaForm { Plus, Minus };
enum class ChiMode { Expected, Observed };

struct RepresentationReport {
  double rho_in = 0.0;
  double epsilon = 0.0;    // rho-scale tolerance from max_epsilon
  double delta = 1.0;
  double probability_lower_bound = 0.0;  // clamp(1 - delta, 0, 1)
  double tau1 = 1.0;
  double tau3 = 1.0;
  double mu = 0.0;          // expected sampled-edge total
  bool vacuous = true;      // true when delta reached 1
  bool limited_range_valid = true;  // delta_random expectation range check
  std::vector<BoundednessVerdict> verdicts;

  // min over verdicts; 1 when nothing triggered.
  double rho_ceiling() const;
};

// Tail weight for label counts S1 (00 edges) and S3 (11 edges) against the
// window (beta_i - eps_i, beta_i + eps_i):
//   A_i = S_i/(beta_i - eps_i), B_i = S_i/(beta_i + eps_i),
//   tau_i = [A_i > mu] exp(-(A_i-mu)^2 / 3mu) + [B_i < mu] exp(-(mu-B_i)^2 / 2mu)
// with vacuous guards contributing 1.  delta is tau1 + tau3 + tau1*tau3
// (Plus form) or tau1 + tau3 - tau1*tau3 (Minus form), clamped to [0, 1].
struct DeltaResult {
  double tau1 = 1.0;
  double tau3 = 1.0;
  double delta = 1.0;
  bool vacuous = true;
};
DeltaResult compute_delta(double mu, double s1, double s3, double beta1,
                          double beta3, double eps1, double eps3,
                          DeltaForm form);

// Representation bound with deterministic per-cell counts chi (3 x kappa,
// row per label).  Requires beta_i - eps_i > 0 and chi within cell counts.
RepresentationReport delta_constant(const Factorization& f,
                                    const BetaSummary& beta, double eps1,
                                    double eps3,
                                    const std::vector<std::array<double, 3>>& chi,
                                    DeltaForm form = DeltaForm::Plus);

// Same bound with chi replaced by Monte-Carlo expectations of per-cell
// binomial draws chi_ij ~ Bin(N_ij, pi_j).  Sets limited_range_valid to
// false when an estimated expectation falls outside mu +- sqrt(mu).
RepresentationReport delta_random(const Factorization& f,
                                  const BetaSummary& beta, double eps1,
                                  double eps3, int mc_samples,
                                  std::uint64_t seed,
                                  DeltaForm form = DeltaForm::Plus);

// End-to-end bound for how well `model` represents `g`: factorizes the
// model against the graph's attributes, uses expected counts
// chi_ij = N_ij pi_j, and attaches boundedness verdicts.
RepresentationReport representation_probability(const AttributedGraph& g,
                                                const EdgeProbabilityModel& model,
                                                double eps1, double eps3,
                                                DeltaForm form = DeltaForm::Plus);

}  // namespace agfit
