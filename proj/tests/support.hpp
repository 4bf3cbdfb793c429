#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "formguard/linalg.hpp"
#include "formguard/scenario.hpp"
#include "oracles/oracles.hpp"

namespace testing_support {

inline formguard::Vec Vec2(double a, double b) {
  formguard::Vec v(2);
  v << a, b;
  return v;
}

inline oracle::Matrix to_oracle(const formguard::Mat& m) {
  oracle::Matrix out(static_cast<std::size_t>(m.rows()), oracle::Vector(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

inline oracle::Vector to_oracle(const formguard::Vec& v) { return {v.data(), v.data() + v.size()}; }

inline formguard::Vec from_oracle(const oracle::Vector& v) {
  return Eigen::Map<const formguard::Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::string scenario_path(const std::string& name) {
  return std::string(FORMGUARD_SCENARIO_DIR) + "/" + name + ".toml";
}

inline formguard::Scenario example(const std::string& name = "example1_attack_free") {
  return formguard::load_scenario(scenario_path(name));
}

/// Ring 1 -> 3 -> 2 -> 1, unit weights, leader pinned to agent 1.
inline formguard::DirectedWeightedGraph example_graph() {
  return formguard::DirectedWeightedGraph::from_edges(
      3, {{0, 2, 1.0}, {2, 1, 1.0}, {1, 0, 1.0}}, formguard::Vec::Unit(3, 0));
}

inline formguard::Vec random_vec(std::mt19937_64& rng, int n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  formguard::Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

/// Random strongly connected digraph: a ring through a random permutation plus extra edges.
inline formguard::DirectedWeightedGraph random_graph(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> w(0.2, 2.0), coin(0.0, 1.0);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  formguard::Mat a = formguard::Mat::Zero(n, n);
  for (int k = 0; k < n && n > 1; ++k) a(perm[(k + 1) % n], perm[k]) = w(rng);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && a(i, j) == 0.0 && coin(rng) < 0.3) a(i, j) = w(rng);
  formguard::Vec pin = formguard::Vec::Zero(n);
  pin(std::uniform_int_distribution<int>(0, n - 1)(rng)) = w(rng);
  return formguard::DirectedWeightedGraph(a, pin);
}

}  // namespace testing_support
