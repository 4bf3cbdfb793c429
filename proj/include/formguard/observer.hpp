#pragma once

#include "formguard/attack.hpp"
#include "formguard/graph.hpp"
#include "formguard/rbf.hpp"

namespace formguard {

/// Next observer estimate x̂⁺ = f̂ + u - G (x - x̂) - e, with G the diagonal gain.
/// With this sign choice the residual x̃ = x - x̂ evolves as
/// x̃⁺ = G x̃ + (f - f̂) + w + e.
Vec observer_step(const Vec& x_i, const Vec& x_hat_i, const Vec& u_i, const Vec& e_i,
                  const Vec& f_hat_i, const Vec& observer_gain);

/// Additive perturbation an attack injects into agent i's residual recursion:
///   s = κuᵃ + λ G xᵃ + f̂(x) - f̂(x + λxᵃ) - Σ_j a_ij (λxᵃ - φʲ x̄ᵃ_j) - b_i λxᵃ
/// `x_i` is the true state, `w_i` the current weight estimate.
Vec attack_effect_s(int i, const AgentAttackInputs& attack, const Vec& x_i, const RbfBasis& basis,
                    const WeightMatrix& w_i, const DirectedWeightedGraph& g,
                    const Vec& observer_gain);

}  // namespace formguard
