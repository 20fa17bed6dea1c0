#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "agfit/graph.hpp"

namespace agfit {

enum class ModelKind { Er, Sbm, Gf, Custom };

struct ErParams {
  double p = 0.0;
};

struct SbmParams {
  int k = 0;
  std::vector<int> assignment;        // node -> block, size n
  std::vector<double> theta;          // k*k row-major, symmetric
};

// Three-parameter beta-process edge-frequency model.
struct GfParams {
  double alpha = 0.5;       // discount, in [0, 1)
  double beta = 1.0;        // concentration, beta + alpha > 0
  double gamma = 3.0;       // mass
  long long iterations = 2000;
  int truncation = 5000;    // number of process atoms kept
  std::uint64_t seed = 0;
};

struct CustomParams {};

// Symmetric edge-probability matrix over n nodes with zero diagonal.
struct EdgeProbabilityModel {
  int node_count = 0;
  ModelKind kind = ModelKind::Custom;
  std::variant<ErParams, SbmParams, GfParams, CustomParams> params = CustomParams{};
  std::vector<double> prob;  // n*n row-major

  double p(int i, int j) const {
    return prob[static_cast<std::size_t>(i) * node_count + j];
  }
  void set_p(int i, int j, double v) {
    prob[static_cast<std::size_t>(i) * node_count + j] = v;
    prob[static_cast<std::size_t>(j) * node_count + i] = v;
  }
  // Symmetry, zero diagonal, entries in [0,1]; throws DomainError.
  void validate() const;
};

// One factorization cell: the node pairs with a given edge label whose
// model probability equals a given distinct parameter value.
struct FactorCell {
  EdgeLabel label = EdgeLabel::L00;
  int param_index = 0;
  long long count = 0;                        // N_ij
  std::vector<std::pair<int, int>> positions;  // empty unless requested
};

// Grouping of the positive-probability node pairs by (edge label, distinct
// probability value).  Probabilities are quantized to 12 significant digits
// before comparison; zero-probability pairs are excluded.
struct Factorization {
  std::vector<double> pi;        // distinct values, ascending; size kappa
  std::vector<FactorCell> cells;
  std::vector<long long> n_per_param;   // n_j = sum_i N_ij
  std::vector<double> same_label_rate;  // r_j = (N_00j + N_11j) / n_j

  int kappa() const { return static_cast<int>(pi.size()); }
  long long cell_count(EdgeLabel label, int param_index) const;
  // Expected sampled-edge total, mu = sum_j n_j pi_j.
  double expected_edge_total() const;
  // Expected count of edges with the given label, sum_j N_ij pi_j.
  double expected_label_total(EdgeLabel label) const;
};

struct FactorizeOptions {
  bool with_positions = true;
};

// Group positive-probability pairs of the model by (label, parameter).
Factorization factorize(const EdgeProbabilityModel& model,
                        const std::vector<std::uint8_t>& attributes,
                        const FactorizeOptions& opts = {});

// Round to 12 significant decimal digits; the grouping key for factorize.
double quantize_probability(double v);

// Constant-probability model; p in [0, 1].
EdgeProbabilityModel er_model(int n, double p);

// Maximum-likelihood constant probability, |E| / C(n,2).
EdgeProbabilityModel fit_er(const AttributedGraph& g);

// Per-block-pair edge density under the given block assignment.
EdgeProbabilityModel fit_sbm(const AttributedGraph& g,
                             const std::vector<int>& assignment, int k);

// Spectral embedding (top-k adjacency eigenvectors) plus k-means: the exact
// optimum by exhaustive search up to 10 nodes, a deterministic
// farthest-point Lloyd heuristic beyond.  Reproducible, and independent of
// the node order whenever the optimal partition is unique; `seed` is kept
// for interface stability but the procedure is fully value-driven.
std::vector<int> cluster_blocks(const AttributedGraph& g, int k,
                                std::uint64_t seed);

// Edge probabilities from a truncated three-parameter beta process: atom
// rates drawn by the inverse-tail-mass construction, each atom assigned to
// a uniform node pair, and a pair seeing total rate w gets
//   P = 1 - exp(-iterations * w).
EdgeProbabilityModel gf_model(const GfParams& params, int n);

EdgeProbabilityModel custom_model(int n, std::vector<double> prob);

}  // namespace agfit
