#include "formguard/graph.hpp"

#include <cmath>
#include <string>

#include "formguard/errors.hpp"

namespace formguard {

namespace {

// reach(i, j) == true iff there is a directed path i -> ... -> j (Warshall closure).
std::vector<std::vector<bool>> reachability(const DirectedWeightedGraph& g) {
  const int n = g.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    reach[i][i] = true;
    for (int j = 0; j < n; ++j) {
      if (g.has_edge(i, j)) reach[i][j] = true;
    }
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (reach[i][k])
        for (int j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = true;
  return reach;
}

}  // namespace

DirectedWeightedGraph::DirectedWeightedGraph(Mat weights, Vec pin_gains)
    : weights_(std::move(weights)), pin_(std::move(pin_gains)) {
  if (weights_.rows() == 0 || weights_.rows() != weights_.cols()) {
    throw ConfigError("adjacency matrix must be square and non-empty");
  }
  require_dim(pin_.size(), weights_.rows(), "pin gains");
  for (Eigen::Index i = 0; i < weights_.rows(); ++i) {
    if (weights_(i, i) != 0.0) {
      throw ConfigError("self-loop on agent " + std::to_string(i + 1));
    }
    if (!(pin_(i) >= 0.0)) {
      throw ConfigError("pin gain of agent " + std::to_string(i + 1) + " must be nonnegative");
    }
    for (Eigen::Index j = 0; j < weights_.cols(); ++j) {
      if (!(weights_(i, j) >= 0.0) || !std::isfinite(weights_(i, j))) {
        throw ConfigError("edge weights must be finite and nonnegative");
      }
    }
  }
}

DirectedWeightedGraph DirectedWeightedGraph::from_edges(int n_agents,
                                                        const std::vector<Edge>& edges,
                                                        const Vec& pin_gains) {
  if (n_agents <= 0) throw ConfigError("graph needs at least one agent");
  Mat a = Mat::Zero(n_agents, n_agents);
  for (const auto& e : edges) {
    if (e.from < 0 || e.from >= n_agents || e.to < 0 || e.to >= n_agents) {
      throw ConfigError("edge references unknown agent");
    }
    if (a(e.to, e.from) != 0.0) {
      throw ConfigError("duplicate edge " + std::to_string(e.from + 1) + " -> " +
                        std::to_string(e.to + 1));
    }
    if (!(e.weight > 0.0)) throw ConfigError("declared edges need a positive weight");
    a(e.to, e.from) = e.weight;
  }
  return DirectedWeightedGraph(std::move(a), pin_gains);
}

std::vector<int> DirectedWeightedGraph::in_neighbours(int i) const {
  std::vector<int> out;
  for (int j = 0; j < size(); ++j) {
    if (weights_(i, j) > 0.0) out.push_back(j);
  }
  return out;
}

std::vector<Edge> DirectedWeightedGraph::edges() const {
  std::vector<Edge> out;
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      if (weights_(i, j) > 0.0) out.push_back({j, i, weights_(i, j)});
  return out;
}

double in_degree(const DirectedWeightedGraph& g, int i) {
  if (i < 0 || i >= g.size()) {
    throw ConfigError("agent index " + std::to_string(i) + " out of range");
  }
  return g.weights().row(i).sum();
}

bool is_strongly_connected(const DirectedWeightedGraph& g) {
  const auto reach = reachability(g);
  for (const auto& row : reach)
    for (bool r : row)
      if (!r) return false;
  return true;
}

bool leader_reaches_all(const DirectedWeightedGraph& g) {
  const auto reach = reachability(g);
  for (int j = 0; j < g.size(); ++j) {
    bool reached = false;
    for (int i = 0; i < g.size() && !reached; ++i) {
      reached = g.pin_gain(i) > 0.0 && reach[i][j];
    }
    if (!reached) return false;
  }
  return true;
}

Vec LaplacianBundle::apply_Lbar(const Vec& stacked) const {
  const int n = state_dim;
  require_dim(stacked.size(), LB.rows() * n, "stacked vector");
  Vec out = Vec::Zero(stacked.size());
  for (Eigen::Index i = 0; i < LB.rows(); ++i) {
    for (Eigen::Index j = 0; j < LB.cols(); ++j) {
      if (LB(i, j) != 0.0) out.segment(i * n, n) += LB(i, j) * stacked.segment(j * n, n);
    }
  }
  return out;
}

LaplacianBundle build_laplacian(const DirectedWeightedGraph& g, int state_dim) {
  if (state_dim <= 0) throw ConfigError("state dimension must be positive");
  if (!(g.pin_gains().maxCoeff() > 0.0)) {
    throw ConfigError("no follower is pinned to the leader (all b_i = 0)");
  }
  if (!is_strongly_connected(g)) {
    throw ConfigError("follower communication graph is not strongly connected");
  }
  LaplacianBundle b;
  b.state_dim = state_dim;
  const Mat& a = g.weights();
  b.L = -a;
  b.L.diagonal() = a.rowwise().sum();
  b.B = g.pin_gains().asDiagonal();
  b.LB = b.L + b.B;
  b.L_bar = kron_identity(b.LB, state_dim);
  // σ(M ⊗ I) = σ(M) repeated, so spectra come from the N×N matrix.
  Eigen::JacobiSVD<Mat> svd(b.LB);
  const auto& s = svd.singularValues();
  b.sigma_max_LB = s(0);
  b.sigma_min_LB = s(s.size() - 1);
  b.sigma_max_Lbar = b.sigma_max_LB;
  if (!(b.sigma_min_LB > 0.0)) throw ConfigError("L + B is singular");
  return b;
}

}  // namespace formguard
