// SPDX-License-Identifier: Apache-2.0
#pragma once

// End-to-end runs shared by the command-line tool and the acceptance checks.

#include "gae/classify.hpp"
#include "gae/data_io.hpp"
#include "gae/structured.hpp"
#include "gae/training.hpp"

#include <vector>

namespace gae {

struct ClassifyRunConfig {
  Index mean_hidden = 32;
  Index factors = 32;
  Index mapping = 32;
  /// Optimizer and corruption settings for every class model. The seed of
  /// class k's models is derived from train.seed and k.
  TrainConfig train;
  CalibrationOptions calibration;
  int threads = 1;
};

/// One trained model per class and family; a family that was not requested is empty.
struct ClassModels {
  std::vector<MeanAeParams> mean;
  std::vector<GaeParams> cov;
};

ClassModels train_class_models(const LabeledDataset& train, const ClassifyRunConfig& cfg,
                               bool want_mean, bool want_cov);

enum class EnsembleKind { mean, cov, mean_cov };

/// Zero-bias ensemble over the requested families.
ClassifierEnsemble make_ensemble(const ClassModels& models, EnsembleKind kind);

struct ClassifyResult {
  ClassifierEnsemble aes, caes, mcaes;  ///< calibrated on the training data
  double aes_error = 0.0;
  double caes_error = 0.0;
  double mcaes_error = 0.0;
};

/// Trains mean and covariance models per class, calibrates the three
/// ensembles on `train` and reports their test error rates.
ClassifyResult run_classification(const LabeledDataset& train, const LabeledDataset& test,
                                  const ClassifyRunConfig& cfg);

struct MultilabelRunConfig {
  Index mlp_hidden = 16;
  TrainConfig mlp_train;
  Index factors = 16;
  Index mapping = 16;
  TrainConfig gae_train;
  LabelOptConfig refine;
  /// When non-empty, refine.max_iter is picked from these values (0 allowed)
  /// by validation error; ties go to the smaller count.
  std::vector<int> max_iter_candidates;
  int threads = 1;
};

struct MultilabelResult {
  MlpParams mlp;
  GaeParams gae;
  Vector feature_mean;
  Vector feature_std;
  int max_iter = 0;  ///< the count actually used
  double mlp_error = 0.0;
  double refined_error = 0.0;
};

/// Standardizes features with training statistics, trains the MLP and the
/// label-space GAE, then reports MLP-only and refined test errors.
MultilabelResult run_multilabel(const LabeledDataset& train, const LabeledDataset& val,
                                const LabeledDataset& test, const MultilabelRunConfig& cfg);

}  // namespace gae
