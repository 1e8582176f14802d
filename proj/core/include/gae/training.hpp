// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gae/gae_core.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace gae {

enum class Corruption { none, masking, gaussian };

Corruption parse_corruption(std::string_view name);

struct TrainConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;
  double weight_decay = 0.0;
  /// Masking probability, or the noise standard deviation for gaussian.
  double corruption_level = 0.0;
  Corruption corruption = Corruption::none;
  int batch_size = 32;
  int epochs = 10;
  std::uint64_t seed = 0;
  LossMode mode = LossMode::conditional;
  bool corrupt_x = true;
  bool corrupt_y = true;
  /// Treat wx/wy and ax/ay as one shared parameter (covariance models).
  bool tie_factors = false;

  /// Throws UsageError when any field is outside its domain.
  void validate() const;
};

struct EpochStats {
  int epoch = 0;  ///< 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;  ///< NaN when no validation set was given
  double seconds = 0.0;
};

struct TrainReport {
  double initial_train_loss = 0.0;
  std::vector<double> train_loss;  ///< clean loss on the training set after each epoch
  std::vector<double> val_loss;
  std::vector<double> wall_seconds;
};

using ProgressFn = std::function<void(const EpochStats&)>;

/// Prints `epoch=<i> train_loss=<f> val_loss=<f>` to stdout.
void print_progress(const EpochStats& stats);

/// Applies the configured corruption to a copy of `batch`. The noise stream is
/// a pure function of (cfg.seed, stream), so results are reproducible per batch.
RowMatrix corrupt(const RowMatrix& batch, const TrainConfig& cfg, std::uint64_t stream);

/// Weights uniform in +-1/sqrt(fan_in), biases zero.
GaeParams init_gae(Index dx, Index dy, Index factors, Index mapping, Activation act,
                   std::uint64_t seed, bool tie_factors = false);
MeanAeParams init_mean_ae(Index dim, Index hidden, std::uint64_t seed);

struct GaeTrainResult {
  GaeParams params;
  TrainReport report;
};

struct MeanAeTrainResult {
  MeanAeParams params;
  TrainReport report;
};

/// Validation pairs for the loss trace.
struct PairSet {
  const RowMatrix* xs = nullptr;
  const RowMatrix* ys = nullptr;
};

/// Mini-batch SGD with momentum and weight decay:
///   v <- momentum v - lr (grad + decay theta);  theta <- theta + v.
/// Corruption only reaches the encoder inputs; targets stay clean. Throws
/// DivergenceError if the loss turns non-finite.
GaeTrainResult train_gae(const RowMatrix& xs, const RowMatrix& ys, const TrainConfig& cfg,
                         GaeParams init, std::optional<PairSet> validation = std::nullopt,
                         const ProgressFn& progress = {});

MeanAeTrainResult train_mean_ae(const RowMatrix& xs, const TrainConfig& cfg, MeanAeParams init,
                                const RowMatrix* validation = nullptr,
                                const ProgressFn& progress = {});

/// One point of a hyperparameter grid.
struct GridPoint {
  Index factors = 0;
  Index mapping = 0;
  double learning_rate = 0.0;
  double weight_decay = 0.0;
  double corruption_level = 0.0;
};

/// The grid used for model selection on the benchmark datasets.
std::vector<GridPoint> reference_grid();

struct GridResult {
  GridPoint best;
  double best_val_loss = 0.0;
  GaeParams params;
};

/// Trains one model per grid point and keeps the lowest final validation loss.
GridResult grid_search_gae(const RowMatrix& xs, const RowMatrix& ys, const RowMatrix& val_xs,
                           const RowMatrix& val_ys, const TrainConfig& base, Activation act,
                           const std::vector<GridPoint>& grid);

}  // namespace gae
