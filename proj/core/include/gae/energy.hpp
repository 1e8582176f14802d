// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gae/gae_core.hpp"

namespace gae {

/// Scalar goodness of an input under one model; higher means the model likes
/// the input more. Defined only up to a per-model additive constant (fixed
/// to zero here), so only scores from the same `model` compare directly.
struct EnergyScore {
  double value = 0.0;
  const void* model = nullptr;  ///< opaque tag: address of the scoring parameters
};

/// Which reconstruction a vector field or Jacobian refers to.
enum class Target { y, x };

/// Stacked input of the symmetric model: xi = [y; x], gamma = [x; y].
struct StackedPair {
  Vector xi;
  Vector gamma;

  static StackedPair from(const VecRef& x, const VecRef& y);
};

/// F(y|x) = r(y|x) - y, or F(x|y) = r(x|y) - x for Target::x.
Vector vector_field(const GaeParams& p, const VecRef& x, const VecRef& y,
                    Target target = Target::y);

/// Vector field of a model whose decoder weights differ from its encoder
/// weights. Untied models are not conservative; this exists so integrability
/// checks can be shown to detect that.
Vector vector_field_untied(const GaeParams& encoder, const GaeParams& decoder, const VecRef& x,
                           const VecRef& y, Target target = Target::y);

/// Max |J_ij - J_ji| of the vector-field Jacobian with respect to the
/// reconstructed argument, by central differences with step 1e-5.
double poincare_residual(const GaeParams& p, const VecRef& x, const VecRef& y,
                         Target wrt = Target::y);
double poincare_residual_untied(const GaeParams& encoder, const GaeParams& decoder,
                                const VecRef& x, const VecRef& y, Target wrt = Target::y);

/// Sum over units of the activation's anti-derivative:
/// sigmoid -> softplus, tanh -> log cosh, linear -> u^2/2, relu -> max(u,0)^2/2.
double antiderivative(Activation kind, const VecRef& u);

/// E(y|x) = sum_k H(u_k) + ay.y - 1/2 ||y||^2 with u from encode(p, x, y).
/// Its gradient in y is exactly vector_field(p, x, y).
EnergyScore energy_conditional(const GaeParams& p, const VecRef& x, const VecRef& y);

/// Energy of the symmetric model over the stacked input xi = [y; x].
/// Its gradient in xi is [F(y|x); F(x|y)].
EnergyScore energy_symmetric(const GaeParams& p, const VecRef& x, const VecRef& y);

/// Gradient of energy_symmetric with respect to xi = [y; x].
Vector energy_symmetric_gradient(const GaeParams& p, const VecRef& x, const VecRef& y);

/// Covariance auto-encoder energy (requires wx == wy, Dx == Dy, sigmoid):
/// E(x) = sum_k softplus((wh (wx x)^2)_k + b_k) + ax.x - ||x||^2.
EnergyScore energy_covariance(const GaeParams& p, const VecRef& x);
Vector energy_covariance_gradient(const GaeParams& p, const VecRef& x);

/// Classical auto-encoder energy: sum_k softplus((w x + c)_k) + a.x - 1/2 ||x||^2.
EnergyScore energy_mean(const MeanAeParams& m, const VecRef& x);
Vector energy_mean_gradient(const MeanAeParams& m, const VecRef& x);

/// E_m(x) + E_c(x).
EnergyScore energy_mean_covariance(const MeanAeParams& m, const GaeParams& c, const VecRef& x);

/// Throws UsageError unless `p` is a valid covariance model.
void require_covariance_model(const GaeParams& p);

}  // namespace gae
