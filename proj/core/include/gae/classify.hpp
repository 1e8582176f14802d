// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gae/gae_core.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace gae {

/// One class-specific scorer: a mean auto-encoder, a covariance auto-encoder,
/// or both (energies add).
struct ClassMember {
  std::optional<MeanAeParams> mean;
  std::optional<GaeParams> cov;
};

/// K class-specific models plus calibration biases:
///   P(class i | x) = exp(E_i(x) + B_i) / sum_j exp(E_j(x) + B_j).
struct ClassifierEnsemble {
  std::vector<ClassMember> members;
  Vector biases;

  Index num_classes() const { return static_cast<Index>(members.size()); }
  Index dim() const;
  void validate() const;
};

/// s_i = E_i(x) + B_i.
Vector class_scores(const ClassifierEnsemble& ens, const VecRef& x);
/// Softmax of class_scores.
Vector posterior(const ClassifierEnsemble& ens, const VecRef& x);
/// argmax of the scores; ties go to the lowest class index.
int predict(const ClassifierEnsemble& ens, const VecRef& x);

struct CalibrationOptions {
  bool tune_members = false;
  double learning_rate = 1.0;  ///< step on the biases
  double member_learning_rate = 1e-3;
  int epochs = 500;
  std::uint64_t seed = 0;
};

/// Maximizes the mean log posterior of the true labels by full-batch gradient
/// ascent on the biases (and on member parameters when tune_members is set).
/// Works on a copy.
ClassifierEnsemble calibrate(const ClassifierEnsemble& ens, const RowMatrix& xs,
                             const std::vector<int>& labels, const CalibrationOptions& opts = {});

double mean_log_posterior(const ClassifierEnsemble& ens, const RowMatrix& xs,
                          const std::vector<int>& labels);

/// Fraction of argmax mispredictions.
double evaluate_error(const ClassifierEnsemble& ens, const RowMatrix& xs,
                      const std::vector<int>& labels);

/// Error rate of a raw score matrix (N x K) under the same tie rule.
double score_error(const RowMatrix& scores, const std::vector<int>& labels);

}  // namespace gae
