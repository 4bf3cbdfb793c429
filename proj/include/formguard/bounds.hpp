#pragma once

#include <optional>
#include <string>

#include "formguard/formation.hpp"

namespace formguard {

/// Spectral quantities of the gain matrices against the topology.
struct GainSpectra {
  double sigma_K = 0.0;
  double sigma_G = 0.0;
  double sigma_P = 0.0;    // σ̄(I - K L̄)
  double sigma_PtP = 0.0;  // σ̄(PᵀP) = σ̄(P)²
  double sigma_Lbar = 0.0;
};

GainSpectra gain_spectra(const ControlGains& gains, const LaplacianBundle& bundle);

/// Scalar constants behind the formation-error and residual bounds.
struct BoundSet {
  double w_M = 0.0;    // disturbance bound
  double eps_M = 0.0;  // approximation-error bound
  double W_M = 0.0;    // ideal-weight bound
  double phi_M = 0.0;  // activation bound
  double F_M = 0.0;    // leader-dynamics bound
  double d_M = 0.0;    // offset bound
  double mu_M = 0.0;   // eps_M + w_M
  double nu_M = 0.0;   // F_M + d_M

  double e_M = 0.0;  // formation-error bound used by the threshold
  double e_M_formula = 0.0;
  std::string e_M_source = "formula";

  double Lambda1 = 0.0, Lambda2 = 0.0, xi = 0.0, W_tilde_M = 0.0;
  double rho1 = 0.0, rho2 = 0.0;
  double pi = 0.0;

  double alpha = 0.0, gamma = 0.0, eta = 0.0, c = 0.0;
  double sigma_G = 0.0, sigma_P = 0.0, sigma_Lbar = 0.0, sigma_min_LB = 0.0;
  double safety_factor = 1.0;
  std::optional<double> reference_pi;

  /// Recomputes mu_M and nu_M from their parts.
  void refresh_sums();
};

struct FormationBound {
  double Lambda1 = 0.0;
  double Lambda2 = 0.0;
  double denominator = 0.0;  // 1 - η c² σ̄(PᵀP)
  double e_M = 0.0;
  double xi = 0.0;
  double W_tilde_M = 0.0;  // ultimate bound on |W̃|_F
};

/// Formation-error ultimate bound
///   e_M = (Λ₁ + sqrt(Λ₁² + (1 - η c² σ̄(PᵀP)) Λ₂)) / (1 - η c² σ̄(PᵀP))
/// together with ξ and the weight-error bound. Throws ConfigError when the
/// denominator is not positive or the discriminant is negative.
FormationBound compute_e_M(double mu_M, double nu_M, double W_M, double phi_M,
                           const TuningParams& tuning, double c, const GainSpectra& spectra);

FormationBound compute_e_M(const BoundSet& b, const LaplacianBundle& bundle,
                           const ControlGains& gains, const TuningParams& tuning);

struct ResidualThreshold {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double denominator = 0.0;  // 1 - η σ̄²(G)
  double pi = 0.0;
};

/// π = (ρ₁ + sqrt(ρ₁² + (1 - η σ̄²(G)) ρ₂)) / (1 - η σ̄²(G)).
ResidualThreshold compute_threshold_pi(double mu_M, double W_M, double e_M, double phi_M,
                                       const TuningParams& tuning, double sigma_G);

ResidualThreshold compute_threshold_pi(const BoundSet& b, const ControlGains& gains,
                                       const TuningParams& tuning);

/// Flat `key = value` text; unknown keys are rejected on read.
std::string format_bound_set(const BoundSet& b);
BoundSet parse_bound_set(const std::string& text);
BoundSet load_bound_set(const std::string& path);
void save_bound_set(const BoundSet& b, const std::string& path);

}  // namespace formguard
