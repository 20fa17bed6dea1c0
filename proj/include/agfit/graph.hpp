#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "agfit/errors.hpp"

namespace agfit {

// Unordered edge labels: both endpoints 0, mixed, both endpoints 1.
enum class EdgeLabel : int { L00 = 0, L01 = 1, L11 = 2 };

// Undirected simple graph with one binary attribute per node.  Edges are
// stored as (u, v) with u < v, sorted and unique.
struct AttributedGraph {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::uint8_t> attributes;  // size node_count, values in {0,1}

  AttributedGraph() = default;
  AttributedGraph(int n, std::vector<std::pair<int, int>> edge_list,
                  std::vector<std::uint8_t> attrs);

  std::size_t edge_count() const { return edges.size(); }
  // Unordered node pairs, n*(n-1)/2.
  long long pair_count() const {
    return static_cast<long long>(node_count) * (node_count - 1) / 2;
  }
};

// Edge counts by label.
struct EdgeLabelCounts {
  long long m00 = 0;
  long long m01 = 0;
  long long m11 = 0;

  long long total() const { return m00 + m01 + m11; }
};

// Edge-label fractions: beta1 + beta2 + beta3 = 1.  beta1 is the fraction
// of 00 edges, beta2 of mixed edges, beta3 of 11 edges.
struct BetaSummary {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta3 = 0.0;
  long long edge_total = 0;
};

// Symmetrized 2x2 contingency table over ordered edge endpoints; entries
// are real because mixed edges split evenly between the two off cells.
struct ContingencyTable {
  double n11 = 0.0;
  double n10 = 0.0;
  double n01 = 0.0;
  double n00 = 0.0;
};

EdgeLabel edge_label(std::uint8_t a, std::uint8_t b);

// Count edges of each label.
EdgeLabelCounts classify_edge_labels(const AttributedGraph& g);

// Label fractions; throws DegenerateMarginError on an edgeless graph.
BetaSummary beta_summary(const EdgeLabelCounts& counts);
BetaSummary beta_summary(const AttributedGraph& g);

// Contingency table with the given total of ordered pairs (usually 2|E|).
ContingencyTable table_from_beta(const BetaSummary& beta, double total);

// Mean-square-contingency coefficient of a 2x2 table, in [-1, 1].  Throws
// DegenerateMarginError when a row or column margin vanishes.
double phi_from_table(const ContingencyTable& t);

// phi as a function of the label fractions alone (marginal form):
//   p = beta3 + (1 - beta1 - beta3) / 2,  rho = (beta3 - p^2) / (p (1 - p)).
// Throws DomainError outside the simplex, DegenerateMarginError when
// p is 0 or 1.
double rho_from_beta(double beta1, double beta3);

// Same value through the quadratic identity
//   (2 b1 b3 + 2 b1 + 2 b3 - b1^2 - b3^2 - 1) / ((1 - b1 + b3)(1 + b1 - b3));
// kept as an independent evaluation route for consistency checks.
double rho_from_beta_quadratic(double beta1, double beta3);

// phi of a graph: classify -> fractions -> rho.
double phi_of_graph(const AttributedGraph& g);

// Non-throwing variant; empty when the margins are degenerate.
std::optional<double> try_phi_of_graph(const AttributedGraph& g);

}  // namespace agfit
