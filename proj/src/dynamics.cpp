#include "formguard/dynamics.hpp"

#include "formguard/errors.hpp"

namespace formguard {

Vec AgentDynamics::step(const Vec& x, const Vec& u, const Vec& w) const {
  require_dim(x.size(), dim_, "state");
  require_dim(u.size(), dim_, "control input");
  require_dim(w.size(), dim_, "disturbance");
  return drift_(x) + u + w;
}

AgentDynamics make_dynamics(const DynamicsConfig& cfg, int n) {
  if (n <= 0) throw ConfigError("state dimension must be positive");
  if (cfg.model != "linear" && !cfg.matrix.empty()) {
    throw ConfigError("dynamics '" + cfg.model + "' takes no matrix");
  }
  if (cfg.model == "paper_ex1") {
    if (n != 2) throw ConfigError("dynamics 'paper_ex1' requires state_dim = 2");
    return AgentDynamics(cfg.model, n, [](const Vec& x) {
      const double s = 1.0 + x(1) * x(1);
      Vec f(2);
      f << x(1) / s, x(0) / s;
      return f;
    });
  }
  if (cfg.model == "linear") {
    if (cfg.matrix.size() != static_cast<std::size_t>(n * n)) {
      throw ConfigError("dynamics 'linear' needs an n x n matrix");
    }
    Mat a(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) a(r, c) = cfg.matrix[static_cast<std::size_t>(r * n + c)];
    return AgentDynamics(cfg.model, n, [a](const Vec& x) -> Vec { return a * x; });
  }
  if (cfg.model == "zero") {
    return AgentDynamics(cfg.model, n, [n](const Vec&) -> Vec { return Vec::Zero(n); });
  }
  throw ConfigError("unknown dynamics model '" + cfg.model + "'");
}

std::vector<std::string> registered_dynamics() { return {"paper_ex1", "linear", "zero"}; }

}  // namespace formguard
