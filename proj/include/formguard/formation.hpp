#pragma once

#include <optional>
#include <string>
#include <vector>

#include "formguard/graph.hpp"
#include "formguard/rbf.hpp"

namespace formguard {

/// Desired displacement of each follower relative to the leader: in formation,
/// x_i = x_l - d_i. Inter-agent offsets d_ij = d_i - d_j are always derived.
class FormationSpec {
 public:
  FormationSpec() = default;
  /// Throws ConfigError if |stacked d| exceeds a declared bound.
  explicit FormationSpec(std::vector<Vec> offsets, std::optional<double> declared_bound = {});

  int size() const { return static_cast<int>(offsets_.size()); }
  const Vec& offset(int i) const { return offsets_.at(i); }
  const std::vector<Vec>& offsets() const { return offsets_; }
  Vec relative(int i, int j) const { return offsets_.at(i) - offsets_.at(j); }
  Vec stacked() const { return stack(offsets_); }
  /// Declared bound if any, otherwise |stacked d|.
  double bound() const;
  const std::optional<double>& declared_bound() const { return declared_bound_; }

  bool operator==(const FormationSpec&) const = default;

 private:
  std::vector<Vec> offsets_;
  std::optional<double> declared_bound_;
};

/// Per-agent diagonal gains plus the scalar control gain c.
struct ControlGains {
  std::vector<Vec> k;         // diagonal of k_i
  double c = 0.0;
  std::vector<Vec> observer;  // diagonal of G_i
  /// Coefficient on x_i in the control law; unset means c, i.e. u = -f̂ + c(x + k e).
  std::optional<double> state_gain;

  double state_coefficient() const { return state_gain.value_or(c); }
  bool operator==(const ControlGains&) const = default;
};

/// Local formation error seen by agent i, given its own (possibly corrupted)
/// measurement and the values it received from each in-neighbour (indexed by j).
Vec local_error(int i, const Vec& own, const std::vector<Vec>& received, const Vec& leader,
                const DirectedWeightedGraph& g, const FormationSpec& spec);

/// e_i = Σ_j a_ij (x_j - x_i - d_ij) + b_i (x_l - x_i - d_i).
Vec local_error(int i, const std::vector<Vec>& states, const Vec& leader,
                const DirectedWeightedGraph& g, const FormationSpec& spec);

/// δ_i = x_l - x_i - d_i, stacked.
Vec tracking_error(const std::vector<Vec>& states, const Vec& leader, const FormationSpec& spec);

/// e = -L̄ (x - 1⊗x_l + d) = L̄ δ.
Vec global_error(const std::vector<Vec>& states, const Vec& leader, const LaplacianBundle& bundle,
                 const FormationSpec& spec);

/// u_i = -f̂_i + s x_i + c k_i e_i, s = gains.state_coefficient().
Vec control_law(int i, const Vec& x_i, const Vec& e_i, const Vec& f_hat_i,
                const ControlGains& gains);

Vec control_law(int i, const Vec& x_i, const Vec& e_i, const RbfBasis& basis,
                const WeightMatrix& w, const ControlGains& gains);

/// Block-diagonal nN×nN matrix from per-agent diagonals.
Mat block_diagonal(const std::vector<Vec>& diagonals);

struct GainCondition {
  std::string id;     // "(28)" .. "(31)"
  std::string label;
  double value = 0.0;
  double lower = 0.0;  // strict lower bound, -inf if none
  double upper = 0.0;  // strict upper bound
  bool passed = false;
  double margin = 0.0;  // distance to the nearest violated/closest bound, negative when failing
  std::string detail;
};

struct GainReport {
  std::vector<GainCondition> conditions;
  double eta = 0.0;
  double phi_bound = 0.0;
  double sigma_max_PtP = 0.0;

  bool all_passed() const;
  const GainCondition* first_failure() const;
};

/// Checks the closed-loop sufficient conditions:
///   (28) 0 < σ̄(K) < 1/σ̄(L̄)
///   (29) 0 < c < 1/sqrt(η σ̄(PᵀP)),  P = I - K L̄,  η = 1 + 1/(1 - α φ_M²)
///   (30) 0 < α < 1/φ_M²
///   (31) σ̄(G) < 1/sqrt(η)
GainReport validate_gains(const ControlGains& gains, const LaplacianBundle& bundle,
                          const TuningParams& tuning, double phi_bound);

/// η = 1 + (1 - α φ_M²)⁻¹; NaN when α φ_M² ≥ 1.
double eta_factor(const TuningParams& tuning, double phi_bound);

void check_gains_shape(const ControlGains& gains, int n_agents, int state_dim);

}  // namespace formguard
