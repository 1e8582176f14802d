// SPDX-License-Identifier: Apache-2.0
#pragma once

// Free energies of Gaussian-Bernoulli RBM variants (unit visible variance).
// These are evaluated straight from the RBM energy functions and share no code
// with gae/energy.hpp, so they can serve as independent references for the
// auto-encoder energies.

#include "gae/gae_core.hpp"

namespace gae::rbm {

/// Factored gated conditional RBM; visible x, conditioning y.
struct FcrbmParams {
  Matrix wx;  ///< F x Dx
  Matrix wy;  ///< F x Dy
  Matrix wh;  ///< F x M
  Vector a;   ///< Dx visible bias
  Vector b;   ///< M hidden bias

  void validate() const;
};

/// Covariance RBM: hidden k gates the squared filter responses (C x)^2 through P.
struct CovRbmParams {
  Matrix p;  ///< F x M
  Matrix c;  ///< F x D
  Vector a;  ///< D
  Vector b;  ///< M

  void validate() const;
};

/// Classical Gaussian-Bernoulli RBM.
struct GaussianRbmParams {
  Matrix w;  ///< M x D
  Vector c;  ///< M hidden bias
  Vector a;  ///< D visible bias

  void validate() const;
};

// Energies of a joint configuration (v, h); h is binary.

/// 1/2 ||a - x||^2 - b.h - sum_f (wx x)_f (wy y)_f (wh h)_f
double fcrbm_energy(const FcrbmParams& q, const VecRef& x, const VecRef& h, const VecRef& y);
/// ||x||^2 - a.x - sum_f (P h)_f (C x)_f^2 - b.h
double covrbm_energy(const CovRbmParams& q, const VecRef& x, const VecRef& h);
/// 1/2 ||a - x||^2 - c.h - h^T W x
double gaussian_rbm_energy(const GaussianRbmParams& q, const VecRef& x, const VecRef& h);

/// -F(x|y) = sum_k softplus(b_k + sum_f wh_fk (wx x .* wy y)_f) + a.x - 1/2 ||x||^2 - 1/2 ||a||^2
double fcrbm_free_energy(const FcrbmParams& q, const VecRef& x, const VecRef& y);
/// -F(x) = sum_k softplus(b_k + sum_f P_fk (C x)_f^2) - ||x||^2 + a.x
double covrbm_free_energy(const CovRbmParams& q, const VecRef& x);
/// -F(x) = sum_k softplus((W x + c)_k) + a.x - 1/2 ||x||^2 - 1/2 ||a||^2
double gaussian_rbm_free_energy(const GaussianRbmParams& q, const VecRef& x);
/// Sum of the mean and covariance free energies.
double mcrbm_free_energy(const GaussianRbmParams& mean, const CovRbmParams& cov, const VecRef& x);

// log sum_h exp(-E(x, h)) by enumerating all hidden states; M <= 24.

double fcrbm_free_energy_enumerated(const FcrbmParams& q, const VecRef& x, const VecRef& y);
double covrbm_free_energy_enumerated(const CovRbmParams& q, const VecRef& x);
double gaussian_rbm_free_energy_enumerated(const GaussianRbmParams& q, const VecRef& x);
/// Enumerates the joint hidden vector of both parts (M_mean + M_cov <= 24).
double mcrbm_free_energy_enumerated(const GaussianRbmParams& mean, const CovRbmParams& cov,
                                    const VecRef& x);

// Parameter mappings.

/// Conditional GAE scoring y given x -> FCRBM with visible y, conditioning x.
FcrbmParams fcrbm_from_gae(const GaeParams& p);
/// Inverse of fcrbm_from_gae; `ax` is not represented in the RBM and is set from `ax`.
GaeParams gae_from_fcrbm(const FcrbmParams& q, const Vector& ax, Activation act = Activation::sigmoid);
/// Covariance auto-encoder -> covariance RBM (P = wh^T, C = wx).
CovRbmParams covrbm_from_cov_gae(const GaeParams& p);
GaeParams cov_gae_from_covrbm(const CovRbmParams& q);
GaussianRbmParams gaussian_rbm_from_mean_ae(const MeanAeParams& m);

}  // namespace gae::rbm
