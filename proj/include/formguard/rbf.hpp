#pragma once

#include <vector>

#include "formguard/linalg.hpp"

namespace formguard {

/// Gaussian basis: neuron j responds with exp(-|x - m_j|^2 / p_j).
struct RbfBasis {
  Mat centers;  // ϑ × n, one center per row
  Vec widths;   // ϑ, all > 0

  RbfBasis() = default;
  RbfBasis(Mat centers, Vec widths);

  int neurons() const { return static_cast<int>(centers.rows()); }
  int input_dim() const { return static_cast<int>(centers.cols()); }

  /// Constructive bound on |φ(x)|: every component lies in (0, 1].
  double activation_bound() const;

  bool operator==(const RbfBasis&) const = default;
};

/// Grid layout: per-axis evenly spaced centers over [lo, hi], same width everywhere.
struct RbfGridLayout {
  std::vector<int> per_axis;  // centers per state coordinate
  double lo = -5.0;
  double hi = 5.0;
  double width = 10.0;

  RbfBasis build() const;
  bool operator==(const RbfGridLayout&) const = default;
};

/// ϑ × n estimate Ŵ; the network output is Ŵᵀφ(x).
using WeightMatrix = Mat;

struct TuningParams {
  double alpha = 0.1;  // learning gain
  double gamma = 0.1;  // leakage, F = γI

  bool operator==(const TuningParams&) const = default;
};

/// Throws ConfigError unless α > 0 and 0 < γ < 1.
void check_tuning(const TuningParams& p);

Vec activation(const RbfBasis& basis, const Vec& x);

/// Ŵᵀφ(x).
Vec estimate(const RbfBasis& basis, const WeightMatrix& w, const Vec& x);

/// One-step prediction error x⁺ - u - f̂. Driven by the true plant this equals
/// W̃ᵀφ + ε + w, the signal the tuning law needs.
Vec prediction_error(const Vec& x_next, const Vec& u, const Vec& f_hat);

/// Ŵ⁺ = Ŵ + α φ h̄ᵀ - γ Ŵ.
WeightMatrix tune_weights(const WeightMatrix& w, const Vec& phi, const Vec& hbar,
                          const TuningParams& p);

}  // namespace formguard
