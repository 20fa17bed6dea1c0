#include "agfit/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "agfit/rng.hpp"

namespace agfit {

void EdgeProbabilityModel::validate() const {
  if (node_count < 0 || prob.size() !=
      static_cast<std::size_t>(node_count) * node_count)
    throw DomainError("probability matrix size does not match node count");
  for (int i = 0; i < node_count; ++i) {
    if (p(i, i) != 0.0)
      throw DomainError("probability matrix must have a zero diagonal");
    for (int j = i + 1; j < node_count; ++j) {
      const double v = p(i, j);
      if (!(v >= 0.0 && v <= 1.0))
        throw DomainError("edge probability out of [0,1] at (" +
                          std::to_string(i) + ", " + std::to_string(j) + ")");
      if (v != p(j, i))
        throw DomainError("probability matrix is not symmetric");
    }
  }
}

double quantize_probability(double v) {
  if (v == 0.0) return 0.0;
  const double exponent = std::floor(std::log10(std::fabs(v)));
  const double scale = std::pow(10.0, 11.0 - exponent);
  return std::round(v * scale) / scale;
}

long long Factorization::cell_count(EdgeLabel label, int param_index) const {
  for (const FactorCell& c : cells)
    if (c.label == label && c.param_index == param_index) return c.count;
  return 0;
}

double Factorization::expected_edge_total() const {
  double mu = 0.0;
  for (std::size_t j = 0; j < pi.size(); ++j)
    mu += static_cast<double>(n_per_param[j]) * pi[j];
  return mu;
}

double Factorization::expected_label_total(EdgeLabel label) const {
  double s = 0.0;
  for (const FactorCell& c : cells)
    if (c.label == label) s += static_cast<double>(c.count) * pi[c.param_index];
  return s;
}

Factorization factorize(const EdgeProbabilityModel& model,
                        const std::vector<std::uint8_t>& attributes,
                        const FactorizeOptions& opts) {
  const int n = model.node_count;
  if (static_cast<int>(attributes.size()) != n)
    throw DomainError("attribute vector does not match model size");

  // First pass: collect distinct quantized probabilities.
  std::map<double, int> param_of;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = model.p(i, j);
      if (v > 0.0) param_of.emplace(quantize_probability(v), 0);
    }

  Factorization f;
  f.pi.reserve(param_of.size());
  for (auto& [value, index] : param_of) {
    index = static_cast<int>(f.pi.size());
    f.pi.push_back(value);
  }
  const int kappa = f.kappa();
  f.n_per_param.assign(kappa, 0);
  f.same_label_rate.assign(kappa, 0.0);

  std::vector<std::array<long long, 3>> counts(
      kappa, std::array<long long, 3>{0, 0, 0});
  std::vector<std::array<std::vector<std::pair<int, int>>, 3>> positions;
  if (opts.with_positions) positions.resize(kappa);

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = model.p(i, j);
      if (v <= 0.0) continue;
      const int param = param_of.at(quantize_probability(v));
      const int label = static_cast<int>(edge_label(attributes[i], attributes[j]));
      ++counts[param][label];
      ++f.n_per_param[param];
      if (opts.with_positions) positions[param][label].emplace_back(i, j);
    }

  for (int j = 0; j < kappa; ++j) {
    for (int label = 0; label < 3; ++label) {
      if (counts[j][label] == 0) continue;
      FactorCell cell;
      cell.label = static_cast<EdgeLabel>(label);
      cell.param_index = j;
      cell.count = counts[j][label];
      if (opts.with_positions) cell.positions = std::move(positions[j][label]);
      f.cells.push_back(std::move(cell));
    }
    const long long same =
        counts[j][static_cast<int>(EdgeLabel::L00)] +
        counts[j][static_cast<int>(EdgeLabel::L11)];
    f.same_label_rate[j] =
        static_cast<double>(same) / static_cast<double>(f.n_per_param[j]);
  }
  return f;
}

EdgeProbabilityModel er_model(int n, double p) {
  if (n < 0) throw DomainError("node count must be non-negative");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("edge probability out of [0,1]");
  EdgeProbabilityModel m;
  m.node_count = n;
  m.kind = ModelKind::Er;
  m.params = ErParams{p};
  m.prob.assign(static_cast<std::size_t>(n) * n, p);
  for (int i = 0; i < n; ++i) m.prob[static_cast<std::size_t>(i) * n + i] = 0.0;
  return m;
}

EdgeProbabilityModel fit_er(const AttributedGraph& g) {
  if (g.node_count < 2) throw DomainError("need at least two nodes to fit");
  const double p = static_cast<double>(g.edge_count()) /
                   static_cast<double>(g.pair_count());
  return er_model(g.node_count, p);
}

EdgeProbabilityModel fit_sbm(const AttributedGraph& g,
                             const std::vector<int>& assignment, int k) {
  const int n = g.node_count;
  if (k < 1) throw DomainError("block count must be at least 1");
  if (k > n) throw DomainError("more blocks than nodes");
  if (static_cast<int>(assignment.size()) != n)
    throw DomainError("assignment size does not match node count");
  for (int b : assignment)
    if (b < 0 || b >= k) throw DomainError("block id out of range");

  std::vector<long long> size(k, 0);
  for (int b : assignment) ++size[b];

  std::vector<long long> edge_count(static_cast<std::size_t>(k) * k, 0);
  for (const auto& [u, v] : g.edges) {
    int a = assignment[u], b = assignment[v];
    if (a > b) std::swap(a, b);
    ++edge_count[static_cast<std::size_t>(a) * k + b];
  }

  std::vector<double> theta(static_cast<std::size_t>(k) * k, 0.0);
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      const long long pairs = (a == b) ? size[a] * (size[a] - 1) / 2
                                       : size[a] * size[b];
      const double density =
          pairs > 0 ? static_cast<double>(edge_count[static_cast<std::size_t>(a) * k + b]) /
                          static_cast<double>(pairs)
                    : 0.0;
      theta[static_cast<std::size_t>(a) * k + b] = density;
      theta[static_cast<std::size_t>(b) * k + a] = density;
    }

  EdgeProbabilityModel m;
  m.node_count = n;
  m.kind = ModelKind::Sbm;
  m.params = SbmParams{k, assignment, theta};
  m.prob.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      m.set_p(i, j, theta[static_cast<std::size_t>(assignment[i]) * k + assignment[j]]);
  return m;
}

EdgeProbabilityModel custom_model(int n, std::vector<double> prob) {
  EdgeProbabilityModel m;
  m.node_count = n;
  m.kind = ModelKind::Custom;
  m.prob = std::move(prob);
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------
// Three-parameter beta-process edge frequencies.
//
// Atom rates follow the Levy intensity
//   nu(dw) = gamma * C * w^(-1-alpha) * (1-w)^(beta+alpha-1) dw,  w in (0,1),
//   C = Gamma(1+beta) / (Gamma(1-alpha) Gamma(beta+alpha)).
// The tail mass L(x) = nu([x,1)) is tabulated on a log grid; atoms come out
// in decreasing order as w_k = L^{-1}(G_k) with G_k the arrival times of a
// unit-rate Poisson process (inverse-tail-mass construction).
// ---------------------------------------------------------------------------

namespace {

struct TailMassTable {
  std::vector<double> log_w;
  std::vector<double> tail;  // tail[i] = nu([w_i, 1))

  // Inverse of the tail mass; target must be positive.
  double invert(double target) const {
    if (target >= tail.front()) return std::exp(log_w.front());
    // tail is decreasing in w; find bracketing grid cells.
    auto it = std::lower_bound(tail.rbegin(), tail.rend(), target);
    std::size_t hi = tail.size() - 1 - (it - tail.rbegin());  // tail[hi] >= target
    if (hi + 1 >= tail.size()) return std::exp(log_w.back());
    const std::size_t lo = hi + 1;  // tail[lo] < target
    const double t0 = std::log(tail[hi]), t1 = std::log(std::max(tail[lo], 1e-300));
    const double u = (std::log(target) - t0) / (t1 - t0);
    return std::exp(log_w[hi] + u * (log_w[lo] - log_w[hi]));
  }
};

TailMassTable tabulate_tail_mass(double alpha, double beta, double gamma) {
  const double log_c = std::lgamma(1.0 + beta) - std::lgamma(1.0 - alpha) -
                       std::lgamma(beta + alpha);
  const double scale = gamma * std::exp(log_c);

  const int grid = 6000;
  const double lo = std::log(1e-18), hi = std::log(1.0 - 1e-9);
  TailMassTable table;
  table.log_w.resize(grid);
  table.tail.resize(grid);
  std::vector<double> integrand(grid);
  for (int i = 0; i < grid; ++i) {
    const double t = lo + (hi - lo) * i / (grid - 1);
    const double w = std::exp(t);
    table.log_w[i] = t;
    // nu(w) * w converts the integral to d(log w).
    integrand[i] = scale * std::pow(w, -alpha) *
                   std::pow(1.0 - w, beta + alpha - 1.0);
  }
  table.tail[grid - 1] = 0.0;
  for (int i = grid - 2; i >= 0; --i) {
    const double dt = table.log_w[i + 1] - table.log_w[i];
    table.tail[i] = table.tail[i + 1] +
                    0.5 * (integrand[i] + integrand[i + 1]) * dt;
  }
  return table;
}

}  // namespace

EdgeProbabilityModel gf_model(const GfParams& params, int n) {
  if (n < 2) throw DomainError("beta-process model needs at least two nodes");
  if (!(params.alpha >= 0.0 && params.alpha < 1.0))
    throw DomainError("discount must lie in [0, 1)");
  if (!(params.beta + params.alpha > 0.0))
    throw DomainError("concentration + discount must be positive");
  if (!(params.gamma > 0.0)) throw DomainError("mass must be positive");
  if (params.iterations < 1) throw DomainError("iterations must be at least 1");
  if (params.truncation < 1) throw DomainError("truncation must be at least 1");

  const TailMassTable table =
      tabulate_tail_mass(params.alpha, params.beta, params.gamma);

  Rng rng(derive_seed(params.seed, 0x67660000ULL));
  const long long total_pairs = static_cast<long long>(n) * (n - 1) / 2;
  std::map<long long, double> rate_of_pair;
  double arrival = 0.0;
  for (int k = 0; k < params.truncation; ++k) {
    arrival += rng.exponential();
    if (arrival >= table.tail.front()) break;  // below the tabulated range
    const double w = table.invert(arrival);
    const long long pair = static_cast<long long>(
        rng.uniform_below(static_cast<std::uint64_t>(total_pairs)));
    rate_of_pair[pair] += w;
  }

  EdgeProbabilityModel m;
  m.node_count = n;
  m.kind = ModelKind::Gf;
  m.params = params;
  m.prob.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (const auto& [pair, rate] : rate_of_pair) {
    // Invert the row-major triangular index.
    long long rem = pair;
    int i = 0;
    long long row_len = n - 1;
    while (rem >= row_len) {
      rem -= row_len;
      --row_len;
      ++i;
    }
    const int j = i + 1 + static_cast<int>(rem);
    const double p =
        1.0 - std::exp(-static_cast<double>(params.iterations) * rate);
    m.set_p(i, j, p);
  }
  return m;
}

}  // namespace agfit
