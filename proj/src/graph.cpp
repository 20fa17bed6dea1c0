#include "agfit/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace agfit {

AttributedGraph::AttributedGraph(int n,
                                 std::vector<std::pair<int, int>> edge_list,
                                 std::vector<std::uint8_t> attrs)
    : node_count(n), edges(std::move(edge_list)), attributes(std::move(attrs)) {
  if (n < 0) throw DomainError("node count must be non-negative");
  if (static_cast<int>(attributes.size()) != n)
    throw DomainError("attribute vector size " +
                      std::to_string(attributes.size()) +
                      " does not match node count " + std::to_string(n));
  for (std::uint8_t a : attributes)
    if (a > 1) throw DomainError("attributes must be 0 or 1");
  for (auto& [u, v] : edges) {
    if (u == v)
      throw DomainError("self loop at node " + std::to_string(u));
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw DomainError("edge endpoint out of range: (" + std::to_string(u) +
                        ", " + std::to_string(v) + ")");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  auto dup = std::adjacent_find(edges.begin(), edges.end());
  if (dup != edges.end())
    throw DomainError("duplicate edge (" + std::to_string(dup->first) + ", " +
                      std::to_string(dup->second) + ")");
}

EdgeLabel edge_label(std::uint8_t a, std::uint8_t b) {
  return static_cast<EdgeLabel>(a + b);
}

EdgeLabelCounts classify_edge_labels(const AttributedGraph& g) {
  EdgeLabelCounts counts;
  for (const auto& [u, v] : g.edges) {
    switch (edge_label(g.attributes[u], g.attributes[v])) {
      case EdgeLabel::L00: ++counts.m00; break;
      case EdgeLabel::L01: ++counts.m01; break;
      case EdgeLabel::L11: ++counts.m11; break;
    }
  }
  return counts;
}

BetaSummary beta_summary(const EdgeLabelCounts& counts) {
  const long long total = counts.total();
  if (total <= 0)
    throw DegenerateMarginError("graph has no edges; label fractions undefined");
  BetaSummary beta;
  beta.edge_total = total;
  beta.beta1 = static_cast<double>(counts.m00) / static_cast<double>(total);
  beta.beta2 = static_cast<double>(counts.m01) / static_cast<double>(total);
  beta.beta3 = static_cast<double>(counts.m11) / static_cast<double>(total);
  return beta;
}

BetaSummary beta_summary(const AttributedGraph& g) {
  return beta_summary(classify_edge_labels(g));
}

ContingencyTable table_from_beta(const BetaSummary& beta, double total) {
  if (total <= 0.0) throw DomainError("table total must be positive");
  ContingencyTable t;
  t.n11 = beta.beta3 * total;
  t.n00 = beta.beta1 * total;
  t.n10 = beta.beta2 * total / 2.0;
  t.n01 = t.n10;
  return t;
}

double phi_from_table(const ContingencyTable& t) {
  if (t.n11 < 0 || t.n10 < 0 || t.n01 < 0 || t.n00 < 0)
    throw DomainError("contingency table entries must be non-negative");
  const double row1 = t.n11 + t.n10;
  const double row0 = t.n01 + t.n00;
  const double col1 = t.n11 + t.n01;
  const double col0 = t.n10 + t.n00;
  if (row1 <= 0.0 || row0 <= 0.0 || col1 <= 0.0 || col0 <= 0.0)
    throw DegenerateMarginError("contingency table has an empty margin");
  return (t.n11 * t.n00 - t.n10 * t.n01) /
         std::sqrt(row1 * row0 * col1 * col0);
}

static void check_beta_domain(double beta1, double beta3) {
  if (beta1 < 0.0 || beta3 < 0.0 || beta1 + beta3 > 1.0 + 1e-15)
    throw DomainError("label fractions outside the simplex: beta1=" +
                      std::to_string(beta1) + " beta3=" + std::to_string(beta3));
}

double rho_from_beta(double beta1, double beta3) {
  check_beta_domain(beta1, beta3);
  const double p = beta3 + (1.0 - beta1 - beta3) / 2.0;
  if (p <= 0.0 || p >= 1.0)
    throw DegenerateMarginError(
        "attribute marginal p=" + std::to_string(p) +
        " leaves a degenerate margin");
  return (beta3 - p * p) / (p * (1.0 - p));
}

double rho_from_beta_quadratic(double beta1, double beta3) {
  check_beta_domain(beta1, beta3);
  const double num = 2.0 * beta1 * beta3 + 2.0 * beta1 + 2.0 * beta3 -
                     beta1 * beta1 - beta3 * beta3 - 1.0;
  const double den = (1.0 - beta1 + beta3) * (1.0 + beta1 - beta3);
  if (den <= 0.0)
    throw DegenerateMarginError("degenerate margin in quadratic form");
  return num / den;
}

double phi_of_graph(const AttributedGraph& g) {
  const BetaSummary beta = beta_summary(g);
  return rho_from_beta(beta.beta1, beta.beta3);
}

std::optional<double> try_phi_of_graph(const AttributedGraph& g) {
  EdgeLabelCounts counts = classify_edge_labels(g);
  const long long total = counts.total();
  if (total <= 0) return std::nullopt;
  // Degenerate exactly when every edge is 00 or every edge is 11.
  if (counts.m00 == total || counts.m11 == total) return std::nullopt;
  BetaSummary beta = beta_summary(counts);
  return rho_from_beta(beta.beta1, beta.beta3);
}

}  // namespace agfit
