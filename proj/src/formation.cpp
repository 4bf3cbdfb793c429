#include "formguard/formation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "formguard/errors.hpp"

namespace formguard {

FormationSpec::FormationSpec(std::vector<Vec> offsets, std::optional<double> declared_bound)
    : offsets_(std::move(offsets)), declared_bound_(declared_bound) {
  if (offsets_.empty()) throw ConfigError("formation needs at least one offset");
  for (const auto& d : offsets_) require_dim(d.size(), offsets_.front().size(), "offset");
  if (declared_bound_ && stacked().norm() > *declared_bound_) {
    throw ConfigError("formation offsets exceed the declared bound d_M");
  }
}

double FormationSpec::bound() const { return declared_bound_.value_or(stacked().norm()); }

Vec local_error(int i, const Vec& own, const std::vector<Vec>& received, const Vec& leader,
                const DirectedWeightedGraph& g, const FormationSpec& spec) {
  if (i < 0 || i >= g.size()) throw ConfigError("agent index out of range");
  require_dim(static_cast<long>(received.size()), g.size(), "neighbour values");
  require_dim(spec.size(), g.size(), "formation offsets");
  require_dim(own.size(), leader.size(), "own state");
  Vec e = Vec::Zero(own.size());
  for (int j : g.in_neighbours(i)) {
    require_dim(received[j].size(), own.size(), "neighbour state");
    e += g.weight(i, j) * (received[j] - own - spec.relative(i, j));
  }
  const double b = g.pin_gain(i);
  if (b != 0.0) e += b * (leader - own - spec.offset(i));
  return e;
}

Vec local_error(int i, const std::vector<Vec>& states, const Vec& leader,
                const DirectedWeightedGraph& g, const FormationSpec& spec) {
  require_dim(static_cast<long>(states.size()), g.size(), "agent states");
  return local_error(i, states[i], states, leader, g, spec);
}

Vec tracking_error(const std::vector<Vec>& states, const Vec& leader, const FormationSpec& spec) {
  require_dim(static_cast<long>(states.size()), spec.size(), "agent states");
  std::vector<Vec> delta;
  delta.reserve(states.size());
  for (int i = 0; i < spec.size(); ++i) delta.emplace_back(leader - states[i] - spec.offset(i));
  return stack(delta);
}

Vec global_error(const std::vector<Vec>& states, const Vec& leader, const LaplacianBundle& bundle,
                 const FormationSpec& spec) {
  require_dim(leader.size(), bundle.state_dim, "leader state");
  Vec shifted = stack(states) + spec.stacked();
  for (Eigen::Index i = 0; i < bundle.LB.rows(); ++i) {
    shifted.segment(i * bundle.state_dim, bundle.state_dim) -= leader;
  }
  return -bundle.apply_Lbar(shifted);
}

Vec control_law(int i, const Vec& x_i, const Vec& e_i, const Vec& f_hat_i,
                const ControlGains& gains) {
  const Vec& k = gains.k.at(i);
  require_dim(e_i.size(), x_i.size(), "formation error");
  require_dim(f_hat_i.size(), x_i.size(), "network estimate");
  require_dim(k.size(), x_i.size(), "gain k");
  return -f_hat_i + gains.state_coefficient() * x_i + gains.c * k.cwiseProduct(e_i);
}

Vec control_law(int i, const Vec& x_i, const Vec& e_i, const RbfBasis& basis,
                const WeightMatrix& w, const ControlGains& gains) {
  return control_law(i, x_i, e_i, estimate(basis, w, x_i), gains);
}

Mat block_diagonal(const std::vector<Vec>& diagonals) {
  const Vec flat = stack(diagonals);
  return flat.asDiagonal();
}

double eta_factor(const TuningParams& tuning, double phi_bound) {
  const double q = 1.0 - tuning.alpha * phi_bound * phi_bound;
  if (!(q > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return 1.0 + 1.0 / q;
}

void check_gains_shape(const ControlGains& gains, int n_agents, int state_dim) {
  require_dim(static_cast<long>(gains.k.size()), n_agents, "per-agent gains k");
  require_dim(static_cast<long>(gains.observer.size()), n_agents, "per-agent observer gains");
  for (int i = 0; i < n_agents; ++i) {
    require_dim(gains.k[i].size(), state_dim, "gain k");
    require_dim(gains.observer[i].size(), state_dim, "observer gain");
    if ((gains.k[i].array() < 0.0).any() || (gains.observer[i].array() < 0.0).any()) {
      throw ConfigError("gain diagonals must be nonnegative");
    }
  }
}

bool GainReport::all_passed() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const GainCondition& c) { return c.passed; });
}

const GainCondition* GainReport::first_failure() const {
  for (const auto& c : conditions)
    if (!c.passed) return &c;
  return nullptr;
}

namespace {

GainCondition interval(std::string id, std::string label, double value, double lower,
                       double upper) {
  GainCondition c{std::move(id), std::move(label), value, lower, upper, false, 0.0, {}};
  if (std::isnan(upper)) {
    c.margin = -std::numeric_limits<double>::infinity();
    c.detail = "bound undefined (alpha * phi_M^2 >= 1)";
    return c;
  }
  c.margin = std::min(value - lower, upper - value);
  c.passed = value > lower && value < upper;
  return c;
}

}  // namespace

GainReport validate_gains(const ControlGains& gains, const LaplacianBundle& bundle,
                          const TuningParams& tuning, double phi_bound) {
  const int n_agents = static_cast<int>(bundle.LB.rows());
  check_gains_shape(gains, n_agents, bundle.state_dim);
  constexpr double inf = std::numeric_limits<double>::infinity();

  GainReport r;
  r.phi_bound = phi_bound;
  r.eta = eta_factor(tuning, phi_bound);

  const Mat K = block_diagonal(gains.k);
  const Mat G = block_diagonal(gains.observer);
  const double sigma_k = K.diagonal().cwiseAbs().maxCoeff();
  const double sigma_g = G.diagonal().cwiseAbs().maxCoeff();

  const Mat P = Mat::Identity(K.rows(), K.cols()) - K * bundle.L_bar;
  const double sigma_p = max_singular_value(P);
  r.sigma_max_PtP = sigma_p * sigma_p;

  r.conditions.push_back(interval("(28)", "formation gain sigma_max(K)", sigma_k, 0.0,
                                  1.0 / bundle.sigma_max_Lbar));

  double c_upper = r.sigma_max_PtP > 0.0 ? 1.0 / std::sqrt(r.eta * r.sigma_max_PtP) : inf;
  if (std::isnan(r.eta)) c_upper = std::numeric_limits<double>::quiet_NaN();
  r.conditions.push_back(interval("(29)", "control gain c", gains.c, 0.0, c_upper));

  const double phi2 = phi_bound * phi_bound;
  r.conditions.push_back(
      interval("(30)", "learning rate alpha", tuning.alpha, 0.0, phi2 > 0.0 ? 1.0 / phi2 : inf));
  if (!(tuning.alpha > 0.0)) r.conditions.back().detail = "alpha must be strictly positive";

  const double g_upper = std::isnan(r.eta) ? r.eta : 1.0 / std::sqrt(r.eta);
  auto g = interval("(31)", "observer gain sigma_max(G)", sigma_g, -inf, g_upper);
  if (!std::isnan(g_upper)) g.margin = g_upper - sigma_g;
  r.conditions.push_back(g);
  return r;
}

}  // namespace formguard
