#pragma once

#include <vector>

#include "formguard/linalg.hpp"

namespace formguard {

/// Directed edge j -> i: agent j sends its state to agent i with weight a_ij.
struct Edge {
  int from;
  int to;
  double weight;
};

/// Weighted communication digraph among N followers plus leader pinning gains.
///
/// weights(i, j) = a_ij is the weight of the edge j -> i. Construction only checks
/// the local invariants (square, no self-loops, nonnegative); connectivity and
/// pinning are checked by build_laplacian().
class DirectedWeightedGraph {
 public:
  DirectedWeightedGraph(Mat weights, Vec pin_gains);

  static DirectedWeightedGraph from_edges(int n_agents, const std::vector<Edge>& edges,
                                          const Vec& pin_gains);

  int size() const { return static_cast<int>(weights_.rows()); }
  const Mat& weights() const { return weights_; }
  const Vec& pin_gains() const { return pin_; }
  double weight(int to, int from) const { return weights_(to, from); }
  double pin_gain(int i) const { return pin_(i); }
  bool has_edge(int from, int to) const { return weights_(to, from) > 0.0; }

  /// In-neighbours of i (agents j with a_ij > 0), ascending.
  std::vector<int> in_neighbours(int i) const;

  std::vector<Edge> edges() const;

  bool operator==(const DirectedWeightedGraph& other) const {
    return weights_ == other.weights_ && pin_ == other.pin_;
  }

 private:
  Mat weights_;
  Vec pin_;
};

double in_degree(const DirectedWeightedGraph& g, int i);

bool is_strongly_connected(const DirectedWeightedGraph& g);

/// True iff every follower is reachable from the pinned set {i : b_i > 0}.
bool leader_reaches_all(const DirectedWeightedGraph& g);

struct LaplacianBundle {
  Mat L;
  Mat B;
  Mat LB;      // L + B
  Mat L_bar;   // (L + B) ⊗ I_n
  int state_dim = 0;
  double sigma_min_LB = 0.0;
  double sigma_max_LB = 0.0;
  double sigma_max_Lbar = 0.0;

  /// L̄ v computed blockwise, without forming L̄.
  Vec apply_Lbar(const Vec& stacked) const;
};

/// Throws ConfigError when no agent is pinned or the follower graph is not
/// strongly connected.
LaplacianBundle build_laplacian(const DirectedWeightedGraph& g, int state_dim);

}  // namespace formguard
