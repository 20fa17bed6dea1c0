#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "agfit/models.hpp"

namespace agfit {

namespace {

// Every choice below must survive node relabelling *and* the basis
// ambiguity of the eigendecomposition (per-vector sign, rotations inside
// repeated eigenspaces).  Both act as isometries on the embedded points,
// so centers and assignments are picked through distances and norms only.
struct PointRank {
  double sq_norm = 0.0;
  std::vector<double> sorted_abs;  // |coords| descending

  static PointRank of(const Eigen::MatrixXd& points, int i) {
    PointRank r;
    r.sq_norm = points.row(i).squaredNorm();
    r.sorted_abs.resize(points.cols());
    for (int c = 0; c < points.cols(); ++c)
      r.sorted_abs[c] = std::fabs(points(i, c));
    std::sort(r.sorted_abs.rbegin(), r.sorted_abs.rend());
    return r;
  }

  // True when this point outranks `other` as a tie-break winner.
  bool beats(const PointRank& other) const {
    if (sq_norm != other.sq_norm) return sq_norm > other.sq_norm;
    return sorted_abs > other.sorted_abs;
  }
};

double sqdist(const Eigen::MatrixXd& points, int i,
              const Eigen::RowVectorXd& c) {
  return (points.row(i) - c).squaredNorm();
}

// Exhaustive k-means over all assignments into exactly k blocks, feasible
// up to ~10 nodes (Bell(10) ≈ 1.2e5 partitions).  The global optimum is
// unique for generic embeddings, which makes the result independent of the
// node order; Lloyd's heuristic cannot promise that.
std::vector<int> exact_partition(const Eigen::MatrixXd& points, int k) {
  const int n = static_cast<int>(points.rows());
  std::vector<int> cur(n, 0), best(n, 0);
  double best_obj = std::numeric_limits<double>::infinity();

  auto objective = [&]() {
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<int> cnt(k, 0);
    for (int i = 0; i < n; ++i) {
      sums.row(cur[i]) += points.row(i);
      ++cnt[cur[i]];
    }
    double obj = 0.0;
    for (int i = 0; i < n; ++i)
      obj += (points.row(i) - sums.row(cur[i]) / cnt[cur[i]]).squaredNorm();
    return obj;
  };

  // Restricted-growth strings: block ids appear in first-use order, so each
  // partition is visited once, in lexicographic order.
  auto rec = [&](auto&& self, int i, int used) -> void {
    if (n - i < k - used) return;  // cannot open the remaining blocks
    if (i == n) {
      const double obj = objective();
      if (obj < best_obj) {
        best_obj = obj;
        best = cur;
      }
      return;
    }
    const int top = std::min(used, k - 1);
    for (int c = 0; c <= top; ++c) {
      cur[i] = c;
      self(self, i + 1, used + (c == used ? 1 : 0));
    }
  };
  rec(rec, 0, 0);
  return best;
}

}  // namespace

std::vector<int> cluster_blocks(const AttributedGraph& g, int k,
                                std::uint64_t /*seed*/) {
  const int n = g.node_count;
  if (k < 1) throw DomainError("block count must be at least 1");
  if (k > n) throw DomainError("more blocks than nodes");
  if (k == 1) return std::vector<int>(n, 0);

  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [u, v] : g.edges) {
    adj(u, v) = 1.0;
    adj(v, u) = 1.0;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adj);
  // Eigenvalues come out ascending; embed on the k largest.
  const Eigen::MatrixXd points = solver.eigenvectors().rightCols(k);

  if (n <= 10) return exact_partition(points, k);

  std::vector<PointRank> rank;
  rank.reserve(n);
  for (int i = 0; i < n; ++i) rank.push_back(PointRank::of(points, i));

  // Farthest-point initialization, starting from the highest-ranked point.
  Eigen::MatrixXd centers(k, k);
  int first = 0;
  for (int i = 1; i < n; ++i)
    if (rank[i].beats(rank[first])) first = i;
  centers.row(0) = points.row(first);

  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  for (int c = 1; c < k; ++c) {
    for (int i = 0; i < n; ++i)
      nearest[i] = std::min(nearest[i], sqdist(points, i, centers.row(c - 1)));
    int best = 0;
    for (int i = 1; i < n; ++i) {
      if (nearest[i] > nearest[best] ||
          (nearest[i] == nearest[best] && rank[i].beats(rank[best])))
        best = i;
    }
    centers.row(c) = points.row(best);
  }

  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < 200; ++iter) {
    bool changed = false;
    // Nearest center wins; ties go to the lowest block id, which is
    // canonical because the centers were created in ranked order.
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sqdist(points, i, centers.row(0));
      for (int c = 1; c < k; ++c) {
        const double d = sqdist(points, i, centers.row(c));
        if (d < best_d) {
          best = c;
          best_d = d;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }

    // Recompute means; refill an emptied block with the member farthest
    // from its current center.
    std::vector<int> count(k, 0);
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < n; ++i) {
      sums.row(assign[i]) += points.row(i);
      ++count[assign[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (count[c] > 0) {
        centers.row(c) = sums.row(c) / count[c];
        continue;
      }
      int far = -1;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        if (count[assign[i]] <= 1) continue;
        const double d = sqdist(points, i, centers.row(assign[i]));
        if (d > far_d || (d == far_d && far >= 0 && rank[i].beats(rank[far]))) {
          far = i;
          far_d = d;
        }
      }
      if (far >= 0) {
        --count[assign[far]];
        sums.row(assign[far]) -= points.row(far);
        assign[far] = c;
        count[c] = 1;
        sums.row(c) = points.row(far);
        centers.row(c) = points.row(far);
        changed = true;
      }
    }
    if (!changed) break;
  }

  // Guarantee k non-empty blocks even on degenerate embeddings (identical
  // rows): steal members from the largest blocks.
  std::vector<int> count(k, 0);
  for (int a : assign) ++count[a];
  for (int c = 0; c < k; ++c) {
    if (count[c] > 0) continue;
    int donor = static_cast<int>(std::max_element(count.begin(), count.end()) -
                                 count.begin());
    for (int i = 0; i < n; ++i)
      if (assign[i] == donor && count[donor] > 1) {
        assign[i] = c;
        --count[donor];
        ++count[c];
        break;
      }
  }
  return assign;
}

}  // namespace agfit
