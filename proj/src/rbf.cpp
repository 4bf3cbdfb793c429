#include "formguard/rbf.hpp"

#include <cmath>

#include "formguard/errors.hpp"

namespace formguard {

RbfBasis::RbfBasis(Mat c, Vec w) : centers(std::move(c)), widths(std::move(w)) {
  if (centers.rows() < 1) throw ConfigError("RBF basis needs at least one neuron");
  require_dim(widths.size(), centers.rows(), "RBF widths");
  for (Eigen::Index j = 0; j < widths.size(); ++j) {
    if (!(widths(j) > 0.0)) throw ConfigError("RBF widths must be strictly positive");
  }
}

double RbfBasis::activation_bound() const { return std::sqrt(static_cast<double>(neurons())); }

RbfBasis RbfGridLayout::build() const {
  const int n = static_cast<int>(per_axis.size());
  if (n == 0) throw ConfigError("RBF grid needs at least one axis");
  if (!(hi >= lo)) throw ConfigError("RBF grid range is empty");
  int total = 1;
  for (int c : per_axis) {
    if (c < 1) throw ConfigError("RBF grid needs at least one center per axis");
    total *= c;
  }
  Mat centers(total, n);
  // Row-major enumeration: the last axis varies fastest.
  for (int idx = 0; idx < total; ++idx) {
    int rem = idx;
    for (int axis = n - 1; axis >= 0; --axis) {
      const int count = per_axis[axis];
      const int k = rem % count;
      rem /= count;
      centers(idx, axis) = count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * k / (count - 1);
    }
  }
  return RbfBasis(std::move(centers), Vec::Constant(total, width));
}

void check_tuning(const TuningParams& p) {
  if (!(p.alpha > 0.0)) throw ConfigError("learning gain alpha must be positive");
  if (!(p.gamma > 0.0 && p.gamma < 1.0)) throw ConfigError("leakage gamma must lie in (0, 1)");
}

Vec activation(const RbfBasis& basis, const Vec& x) {
  require_dim(x.size(), basis.input_dim(), "activation input");
  Vec phi(basis.neurons());
  for (int j = 0; j < basis.neurons(); ++j) {
    const double dist2 = (x.transpose() - basis.centers.row(j)).squaredNorm();
    phi(j) = std::exp(-dist2 / basis.widths(j));
  }
  return phi;
}

Vec estimate(const RbfBasis& basis, const WeightMatrix& w, const Vec& x) {
  require_dim(w.rows(), basis.neurons(), "weight rows");
  require_dim(w.cols(), basis.input_dim(), "weight columns");
  return w.transpose() * activation(basis, x);
}

Vec prediction_error(const Vec& x_next, const Vec& u, const Vec& f_hat) {
  require_dim(u.size(), x_next.size(), "control input");
  require_dim(f_hat.size(), x_next.size(), "estimate");
  return x_next - u - f_hat;
}

WeightMatrix tune_weights(const WeightMatrix& w, const Vec& phi, const Vec& hbar,
                          const TuningParams& p) {
  require_dim(phi.size(), w.rows(), "activation vector");
  require_dim(hbar.size(), w.cols(), "prediction error");
  if (!w.allFinite() || !phi.allFinite() || !hbar.allFinite()) {
    throw ConfigError("non-finite input to weight tuning");
  }
  return w + p.alpha * phi * hbar.transpose() - p.gamma * w;
}

}  // namespace formguard
