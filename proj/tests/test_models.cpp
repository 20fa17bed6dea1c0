#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "agfit/models.hpp"
#include "agfit/rng.hpp"
#include "test_util.hpp"

using namespace agfit;

namespace {

// Union-find component labels, as an independent clustering oracle.
std::vector<int> components(const AttributedGraph& g) {
  std::vector<int> parent(g.node_count);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [u, v] : g.edges) parent[find(u)] = find(v);
  std::vector<int> label(g.node_count);
  std::map<int, int> remap;
  for (int i = 0; i < g.node_count; ++i) {
    const int root = find(i);
    if (!remap.count(root)) remap[root] = static_cast<int>(remap.size());
    label[i] = remap[root];
  }
  return label;
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<int, int> fwd, rev;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (fwd.count(a[i]) && fwd[a[i]] != b[i]) return false;
    if (rev.count(b[i]) && rev[b[i]] != a[i]) return false;
    fwd[a[i]] = b[i];
    rev[b[i]] = a[i];
  }
  return true;
}

}  // namespace

TEST_SUITE_BEGIN("models");

TEST_CASE("constant model fills off-diagonal probabilities") {
  const EdgeProbabilityModel m = er_model(4, 0.3);
  m.validate();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(m.p(i, j) == (i == j ? 0.0 : 0.3));
  CHECK_THROWS_AS(er_model(4, 1.5), DomainError);
}

TEST_CASE("probability quantization groups at 12 significant digits") {
  CHECK(quantize_probability(0.0) == 0.0);
  CHECK(quantize_probability(0.5) == 0.5);
  CHECK(quantize_probability(0.1234567890123456) ==
        quantize_probability(0.1234567890123999));
  CHECK(quantize_probability(0.123456789012) !=
        quantize_probability(0.123456789013));
}

TEST_CASE("factorize groups pairs by label and parameter") {
  const EdgeProbabilityModel m = er_model(4, 0.5);
  const Factorization f = factorize(m, {1, 1, 0, 0});
  REQUIRE(f.kappa() == 1);
  CHECK(f.pi[0] == 0.5);
  CHECK(f.cell_count(EdgeLabel::L00, 0) == 1);
  CHECK(f.cell_count(EdgeLabel::L01, 0) == 4);
  CHECK(f.cell_count(EdgeLabel::L11, 0) == 1);
  CHECK(f.n_per_param[0] == 6);
  CHECK(f.same_label_rate[0] == doctest::Approx(2.0 / 6.0));
  CHECK(f.expected_edge_total() == doctest::Approx(3.0));
  CHECK(f.expected_label_total(EdgeLabel::L11) == doctest::Approx(0.5));

  SUBCASE("positions cover each pair exactly once") {
    long long total = 0;
    std::set<std::pair<int, int>> seen;
    for (const FactorCell& cell : f.cells) {
      CHECK(cell.count == static_cast<long long>(cell.positions.size()));
      total += cell.count;
      for (const auto& pos : cell.positions) CHECK(seen.insert(pos).second);
    }
    CHECK(total == 6);
  }

  SUBCASE("all-zero model factorizes to nothing") {
    const Factorization z = factorize(er_model(4, 0.0), {1, 1, 0, 0});
    CHECK(z.kappa() == 0);
    CHECK(z.cells.empty());
  }

  SUBCASE("two-parameter model splits cells") {
    EdgeProbabilityModel two = er_model(4, 0.2);
    two.kind = ModelKind::Custom;
    two.params = CustomParams{};
    two.set_p(0, 1, 0.8);
    const Factorization g = factorize(two, {1, 1, 0, 0});
    REQUIRE(g.kappa() == 2);
    CHECK(g.pi[0] == 0.2);
    CHECK(g.pi[1] == 0.8);
    CHECK(g.cell_count(EdgeLabel::L11, 1) == 1);
    CHECK(g.cell_count(EdgeLabel::L11, 0) == 0);
    CHECK(g.n_per_param[0] == 5);
    CHECK(g.n_per_param[1] == 1);
  }
}

TEST_CASE("factorization reconstructs the quantized model") {
  Rng rng(99);
  EdgeProbabilityModel m = er_model(8, 0.0);
  m.kind = ModelKind::Custom;
  m.params = CustomParams{};
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j)
      m.set_p(i, j, rng.uniform_below(4) == 0 ? 0.0 : rng.uniform01());
  std::vector<std::uint8_t> attrs(8);
  for (auto& a : attrs) a = rng.bernoulli(0.5) ? 1 : 0;

  const Factorization f = factorize(m, attrs);
  EdgeProbabilityModel rebuilt = er_model(8, 0.0);
  for (const FactorCell& cell : f.cells)
    for (const auto& [u, v] : cell.positions) {
      rebuilt.set_p(u, v, f.pi[cell.param_index]);
      // The cell label must match the pair's endpoint attributes.
      CHECK(edge_label(attrs[u], attrs[v]) == cell.label);
    }
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j)
      CHECK(rebuilt.p(i, j) == quantize_probability(m.p(i, j)));
}

TEST_CASE("fit_er recovers edge density") {
  const AttributedGraph g(4, {{0, 1}, {1, 2}, {2, 3}}, {0, 1, 0, 1});
  const EdgeProbabilityModel m = fit_er(g);
  CHECK(std::get<ErParams>(m.params).p == doctest::Approx(0.5));
  const AttributedGraph full(3, {{0, 1}, {0, 2}, {1, 2}}, {0, 0, 1});
  CHECK(std::get<ErParams>(fit_er(full).params).p == doctest::Approx(1.0));
  const AttributedGraph empty(3, {}, {0, 0, 1});
  CHECK(std::get<ErParams>(fit_er(empty).params).p == doctest::Approx(0.0));
}

TEST_CASE("fit_sbm computes block-pair densities") {
  const AttributedGraph g(4, {{0, 1}, {2, 3}, {0, 2}}, {0, 0, 1, 1});
  const EdgeProbabilityModel m = fit_sbm(g, {0, 0, 1, 1}, 2);
  const auto& sbm = std::get<SbmParams>(m.params);
  CHECK(sbm.theta[0] == doctest::Approx(1.0));   // within block 0
  CHECK(sbm.theta[3] == doctest::Approx(1.0));   // within block 1
  CHECK(sbm.theta[1] == doctest::Approx(0.25));  // cross
  CHECK(m.p(0, 1) == doctest::Approx(1.0));
  CHECK(m.p(1, 2) == doctest::Approx(0.25));

  SUBCASE("k = 1 reduces to the constant fit") {
    const EdgeProbabilityModel one = fit_sbm(g, {0, 0, 0, 0}, 1);
    const EdgeProbabilityModel er = fit_er(g);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(one.p(i, j) == er.p(i, j));
  }
  SUBCASE("invalid assignments are rejected") {
    CHECK_THROWS_AS(fit_sbm(g, {0, 0, 1, 1}, 5), DomainError);
    CHECK_THROWS_AS(fit_sbm(g, {0, 0, 3, 1}, 2), DomainError);
    CHECK_THROWS_AS(fit_sbm(g, {0, 0, 1}, 2), DomainError);
  }
}

TEST_CASE("fit_sbm density is a local likelihood optimum") {
  // Perturbing any single theta entry cannot raise the Bernoulli
  // log-likelihood of the observed adjacency.
  Rng rng(41);
  const AttributedGraph g = testutil::random_graph(12, 0.35, 0.5, rng);
  const std::vector<int> assign = {0, 0, 0, 1, 1, 1, 2, 2, 2, 2, 0, 1};
  const EdgeProbabilityModel m = fit_sbm(g, assign, 3);
  const auto& sbm = std::get<SbmParams>(m.params);

  std::set<std::pair<int, int>> edge_set(g.edges.begin(), g.edges.end());
  auto log_lik = [&](const std::vector<double>& theta) {
    double ll = 0.0;
    for (int i = 0; i < g.node_count; ++i)
      for (int j = i + 1; j < g.node_count; ++j) {
        int a = assign[i], b = assign[j];
        const double p =
            std::clamp(theta[static_cast<std::size_t>(a) * 3 + b], 1e-12,
                       1.0 - 1e-12);
        ll += edge_set.count({i, j}) ? std::log(p) : std::log1p(-p);
      }
    return ll;
  };

  const double base = log_lik(sbm.theta);
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b)
      for (double step : {-0.05, 0.05}) {
        std::vector<double> theta = sbm.theta;
        const double v = theta[static_cast<std::size_t>(a) * 3 + b] + step;
        if (v < 0.0 || v > 1.0) continue;
        theta[static_cast<std::size_t>(a) * 3 + b] = v;
        theta[static_cast<std::size_t>(b) * 3 + a] = v;
        CHECK(log_lik(theta) <= base + 1e-9);
      }
}

TEST_CASE("cluster_blocks basics") {
  Rng rng(5);
  const AttributedGraph g = testutil::random_graph(10, 0.4, 0.5, rng);
  SUBCASE("k = 1 puts everything in one block") {
    const std::vector<int> a = cluster_blocks(g, 1, 3);
    CHECK(std::all_of(a.begin(), a.end(), [](int b) { return b == 0; }));
  }
  SUBCASE("two disjoint cliques separate") {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) edges.emplace_back(i, j);
    for (int i = 4; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j) edges.emplace_back(i, j);
    const AttributedGraph cliques(8, std::move(edges),
                                  std::vector<std::uint8_t>(8, 0));
    const std::vector<int> a = cluster_blocks(cliques, 2, 17);
    CHECK(same_partition(a, components(cliques)));
  }
  SUBCASE("deterministic for a fixed seed") {
    CHECK(cluster_blocks(g, 3, 11) == cluster_blocks(g, 3, 11));
  }
  SUBCASE("requested block count is honored") {
    for (int k = 2; k <= 5; ++k) {
      const std::vector<int> a = cluster_blocks(g, k, 1);
      std::set<int> used(a.begin(), a.end());
      CHECK(static_cast<int>(used.size()) == k);
    }
  }
  SUBCASE("more blocks than nodes is an error") {
    CHECK_THROWS_AS(cluster_blocks(g, 11, 0), DomainError);
  }
}

namespace {

// Brute-force clustering oracle: spectral embedding plus enumeration of
// every partition into exactly k blocks.  Reports the two best objective
// values over *distinct* partitions, so callers can tell whether the
// optimum is unique with a real margin.
struct OracleResult {
  std::vector<int> best;
  double best_obj = 0.0;
  double second_obj = 0.0;
};

OracleResult cluster_oracle(const AttributedGraph& g, int k) {
  const int n = g.node_count;
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [u, v] : g.edges) adj(u, v) = adj(v, u) = 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adj);
  const Eigen::MatrixXd pts = solver.eigenvectors().rightCols(k);

  OracleResult out;
  out.best_obj = out.second_obj = std::numeric_limits<double>::infinity();
  std::vector<int> assign(n, 0);
  const long long total = [&] {
    long long t = 1;
    for (int i = 0; i < n; ++i) t *= k;
    return t;
  }();
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    for (int i = 0; i < n; ++i) {
      assign[i] = static_cast<int>(c % k);
      c /= k;
    }
    // Count each partition once: block labels must appear in first-use
    // order (0 first, then 1, ...) and all k must occur.
    int seen = 0;
    bool canonical = true;
    for (int i = 0; i < n && canonical; ++i) {
      if (assign[i] > seen) canonical = false;
      if (assign[i] == seen) ++seen;
    }
    if (!canonical || seen != k) continue;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, k);
    std::vector<int> cnt(k, 0);
    for (int i = 0; i < n; ++i) {
      sums.row(assign[i]) += pts.row(i);
      ++cnt[assign[i]];
    }
    double obj = 0.0;
    for (int i = 0; i < n; ++i)
      obj += (pts.row(i) - sums.row(assign[i]) / cnt[assign[i]]).squaredNorm();
    if (obj < out.best_obj) {
      out.second_obj = out.best_obj;
      out.best_obj = obj;
      out.best = assign;
    } else if (obj < out.second_obj) {
      out.second_obj = obj;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("cluster_blocks matches a brute-force oracle and is equivariant") {
  // Equivariance up to block relabeling is only well posed when the best
  // partition is unique; tiny 0/1 adjacency spectra tie two partitions
  // exactly surprisingly often (symmetries, eigenvectors with zero
  // entries), and then either answer is correct.  Such draws are skipped.
  Rng rng(1234);
  int tested = 0;
  int draws = 0;
  while (tested < 10 && draws < 200) {
    ++draws;
    const int n = 8;
    const AttributedGraph g = testutil::random_graph(n, 0.45, 0.5, rng);
    for (int k = 2; k <= 3; ++k) {
      const OracleResult oracle = cluster_oracle(g, k);
      if (oracle.second_obj - oracle.best_obj < 1e-9) continue;
      ++tested;

      const std::vector<int> base = cluster_blocks(g, k, 0);
      CHECK(same_partition(base, oracle.best));

      for (int perm_rep = 0; perm_rep < 20; ++perm_rep) {
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = n - 1; i > 0; --i)
          std::swap(perm[i], perm[rng.uniform_below(i + 1)]);

        std::vector<std::pair<int, int>> edges;
        for (const auto& [u, v] : g.edges)
          edges.emplace_back(perm[u], perm[v]);
        const AttributedGraph h(n, std::move(edges),
                                std::vector<std::uint8_t>(n, 0));
        const std::vector<int> relabeled = cluster_blocks(h, k, 0);

        std::vector<int> pushed(n);
        for (int i = 0; i < n; ++i) pushed[perm[i]] = base[i];
        CHECK(same_partition(pushed, relabeled));
      }
    }
  }
  CHECK(tested >= 10);
}

TEST_CASE("beta-process model produces a valid sparse matrix") {
  GfParams params;
  params.seed = 3;
  const EdgeProbabilityModel m = gf_model(params, 100);
  m.validate();
  CHECK(m.node_count == 100);

  long long positive = 0;
  for (int i = 0; i < 100; ++i)
    for (int j = i + 1; j < 100; ++j)
      if (m.p(i, j) > 0.0) ++positive;
  CHECK(positive > 0);
  CHECK(positive <= params.truncation);

  SUBCASE("same seed reproduces the matrix") {
    const EdgeProbabilityModel again = gf_model(params, 100);
    CHECK(again.prob == m.prob);
  }
  SUBCASE("different seeds differ") {
    GfParams other = params;
    other.seed = 4;
    CHECK(gf_model(other, 100).prob != m.prob);
  }
  SUBCASE("parameter domain is enforced") {
    GfParams bad = params;
    bad.alpha = 1.0;
    CHECK_THROWS_AS(gf_model(bad, 100), DomainError);
    bad = params;
    bad.iterations = 0;
    CHECK_THROWS_AS(gf_model(bad, 100), DomainError);
    bad = params;
    bad.gamma = -1.0;
    CHECK_THROWS_AS(gf_model(bad, 100), DomainError);
  }
}

TEST_SUITE_END();
