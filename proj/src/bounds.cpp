#include "agfit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "agfit/rng.hpp"

namespace agfit {

double kl_bernoulli(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0))
    throw DomainError("KL reference a must lie in [0,1]");
  if (!(b > 0.0 && b < 1.0))
    throw DomainError("KL target b must lie in (0,1)");
  double kl = 0.0;
  if (a > 0.0) kl += a * std::log(a / b);
  if (a < 1.0) kl += (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
  return kl;
}

std::vector<BoundednessVerdict> boundedness_check(const Factorization& f) {
  std::vector<BoundednessVerdict> verdicts;
  for (int j = 0; j < f.kappa(); ++j) {
    const double pi = f.pi[j];
    if (pi <= 0.0 || pi >= 1.0) continue;  // pi = 1 cells are exempt
    BoundednessVerdict v;
    v.param_index = j;
    v.pi = pi;
    v.same_label_rate = f.same_label_rate[j];
    v.n = f.n_per_param[j];
    v.kl = kl_bernoulli(v.same_label_rate, pi);
    if (v.same_label_rate > 0.0 && v.same_label_rate < pi)
      v.regime = BoundRegime::Below;
    else if (v.same_label_rate > pi && v.same_label_rate < 1.0)
      v.regime = BoundRegime::Above;
    else
      v.regime = BoundRegime::None;
    v.triggered = v.regime != BoundRegime::None &&
                  static_cast<double>(v.n) * v.kl >= kBoundednessThreshold;
    v.ceiling = (v.triggered && v.regime == BoundRegime::Below) ? kRhoCeiling
                                                                : 1.0;
    verdicts.push_back(v);
  }
  return verdicts;
}

double max_epsilon(double beta1, double beta3, double eps1, double eps3) {
  if (eps1 < 0.0 || eps3 < 0.0)
    throw DomainError("window half-widths must be non-negative");
  const double center = rho_from_beta(beta1, beta3);
  if (eps1 == 0.0 && eps3 == 0.0) return 0.0;
  const double up = rho_from_beta(beta1 + eps1, beta3 + eps3);
  const double down = rho_from_beta(beta1 - eps1, beta3 - eps3);
  return std::max(up - center, center - down);
}

double RepresentationReport::rho_ceiling() const {
  double ceiling = 1.0;
  for (const BoundednessVerdict& v : verdicts)
    ceiling = std::min(ceiling, v.ceiling);
  return ceiling;
}

namespace {

// One tail weight: probability mass that the sampled edge total escapes
// (B, A) around its mean mu, by a multiplicative Chernoff pair.  Windows
// that cannot bracket mu contribute a vacuous 1.
double tau_term(double mu, double s, double beta, double eps) {
  const double a = s / (beta - eps);
  const double b = s / (beta + eps);
  const double upper =
      a > mu ? std::exp(-(a - mu) * (a - mu) / (3.0 * mu)) : 1.0;
  const double lower =
      b < mu ? std::exp(-(mu - b) * (mu - b) / (2.0 * mu)) : 1.0;
  return upper + lower;
}

}  // namespace

DeltaResult compute_delta(double mu, double s1, double s3, double beta1,
                          double beta3, double eps1, double eps3,
                          DeltaForm form) {
  if (!(mu > 0.0)) throw DegenerateMarginError("expected edge total is zero");
  if (beta1 - eps1 <= 0.0 || beta3 - eps3 <= 0.0)
    throw DomainError("window must stay inside positive label fractions");
  DeltaResult r;
  r.tau1 = tau_term(mu, s1, beta1, eps1);
  r.tau3 = tau_term(mu, s3, beta3, eps3);
  const double cross = r.tau1 * r.tau3;
  double delta = form == DeltaForm::Plus ? r.tau1 + r.tau3 + cross
                                         : r.tau1 + r.tau3 - cross;
  r.delta = std::clamp(delta, 0.0, 1.0);
  r.vacuous = r.delta >= 1.0;
  return r;
}

RepresentationReport delta_constant(const Factorization& f,
                                    const BetaSummary& beta, double eps1,
                                    double eps3,
                                    const std::vector<std::array<double, 3>>& chi,
                                    DeltaForm form) {
  const int kappa = f.kappa();
  if (static_cast<int>(chi.size()) != kappa)
    throw DomainError("chi must have one row per parameter");
  double s1 = 0.0, s3 = 0.0;
  for (int j = 0; j < kappa; ++j) {
    for (int label = 0; label < 3; ++label) {
      const double c = chi[j][label];
      const long long avail = f.cell_count(static_cast<EdgeLabel>(label), j);
      if (c < 0.0 || c > static_cast<double>(avail) + 1e-9)
        throw DomainError("chi exceeds cell availability at parameter " +
                          std::to_string(j));
    }
    s1 += chi[j][static_cast<int>(EdgeLabel::L00)];
    s3 += chi[j][static_cast<int>(EdgeLabel::L11)];
  }

  const double mu = f.expected_edge_total();
  const DeltaResult d =
      compute_delta(mu, s1, s3, beta.beta1, beta.beta3, eps1, eps3, form);

  RepresentationReport report;
  report.rho_in = rho_from_beta(beta.beta1, beta.beta3);
  report.epsilon = max_epsilon(beta.beta1, beta.beta3, eps1, eps3);
  report.delta = d.delta;
  report.probability_lower_bound = std::clamp(1.0 - d.delta, 0.0, 1.0);
  report.tau1 = d.tau1;
  report.tau3 = d.tau3;
  report.mu = mu;
  report.vacuous = d.vacuous;
  return report;
}

RepresentationReport delta_random(const Factorization& f,
                                  const BetaSummary& beta, double eps1,
                                  double eps3, int mc_samples,
                                  std::uint64_t seed, DeltaForm form) {
  if (mc_samples < 1) throw DomainError("need at least one Monte-Carlo sample");
  if (beta.beta1 - eps1 <= 0.0 || beta.beta3 - eps3 <= 0.0)
    throw DomainError("window must stay inside positive label fractions");

  const double denom1_lo = beta.beta1 - eps1, denom1_hi = beta.beta1 + eps1;
  const double denom3_lo = beta.beta3 - eps3, denom3_hi = beta.beta3 + eps3;

  // Per-sample label totals; accumulation order is fixed by sample index.
  std::vector<double> s1(mc_samples), s3(mc_samples);
#pragma omp parallel for schedule(static)
  for (int s = 0; s < mc_samples; ++s) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    double t1 = 0.0, t3 = 0.0;
    for (const FactorCell& cell : f.cells) {
      const double pi = f.pi[cell.param_index];
      const long long draw = rng.binomial(cell.count, pi);
      if (cell.label == EdgeLabel::L00) t1 += static_cast<double>(draw);
      if (cell.label == EdgeLabel::L11) t3 += static_cast<double>(draw);
    }
    s1[s] = t1;
    s3[s] = t3;
  }

  double ea1 = 0.0, eb1 = 0.0, ea3 = 0.0, eb3 = 0.0;
  for (int s = 0; s < mc_samples; ++s) {
    ea1 += s1[s] / denom1_lo;
    eb1 += s1[s] / denom1_hi;
    ea3 += s3[s] / denom3_lo;
    eb3 += s3[s] / denom3_hi;
  }
  ea1 /= mc_samples;
  eb1 /= mc_samples;
  ea3 /= mc_samples;
  eb3 /= mc_samples;

  const double mu = f.expected_edge_total();
  if (!(mu > 0.0)) throw DegenerateMarginError("expected edge total is zero");

  auto tau_of = [mu](double ea, double eb) {
    const double upper =
        ea > mu ? std::exp(-(ea - mu) * (ea - mu) / (3.0 * mu)) : 1.0;
    const double lower =
        eb < mu ? std::exp(-(mu - eb) * (mu - eb) / (2.0 * mu)) : 1.0;
    return upper + lower;
  };

  RepresentationReport report;
  report.tau1 = tau_of(ea1, eb1);
  report.tau3 = tau_of(ea3, eb3);
  const double cross = report.tau1 * report.tau3;
  const double delta = form == DeltaForm::Plus
                           ? report.tau1 + report.tau3 + cross
                           : report.tau1 + report.tau3 - cross;
  report.delta = std::clamp(delta, 0.0, 1.0);
  report.probability_lower_bound = std::clamp(1.0 - report.delta, 0.0, 1.0);
  report.vacuous = report.delta >= 1.0;
  report.mu = mu;
  report.rho_in = rho_from_beta(beta.beta1, beta.beta3);
  report.epsilon = max_epsilon(beta.beta1, beta.beta3, eps1, eps3);

  const double width = std::sqrt(mu);
  report.limited_range_valid = true;
  for (double e : {ea1, eb1, ea3, eb3})
    if (std::fabs(e - mu) > width) report.limited_range_valid = false;
  return report;
}

RepresentationReport representation_probability(const AttributedGraph& g,
                                                const EdgeProbabilityModel& model,
                                                double eps1, double eps3,
                                                DeltaForm form) {
  if (g.node_count != model.node_count)
    throw DomainError("graph and model disagree on node count");
  const BetaSummary beta = beta_summary(g);
  const Factorization f =
      factorize(model, g.attributes, FactorizeOptions{.with_positions = false});
  if (f.kappa() == 0)
    throw DegenerateMarginError("model assigns zero probability everywhere");

  std::vector<std::array<double, 3>> chi(
      f.kappa(), std::array<double, 3>{0.0, 0.0, 0.0});
  for (const FactorCell& cell : f.cells)
    chi[cell.param_index][static_cast<int>(cell.label)] =
        static_cast<double>(cell.count) * f.pi[cell.param_index];

  RepresentationReport report = delta_constant(f, beta, eps1, eps3, chi, form);
  report.verdicts = boundedness_check(f);
  return report;
}

}  // namespace agfit
