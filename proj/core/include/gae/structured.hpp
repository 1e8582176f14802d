// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gae/errors.hpp"
#include "gae/gae_core.hpp"
#include "gae/training.hpp"

#include <vector>

namespace gae {

/// Two-layer perceptron with sigmoid hidden and output units.
struct MlpParams {
  Matrix w1;  ///< H x D
  Vector b1;  ///< H
  Matrix w2;  ///< L x H
  Vector b2;  ///< L

  static MlpParams zeros(Index dim, Index hidden, Index labels);

  Index dim() const { return w1.cols(); }
  Index hidden_units() const { return w1.rows(); }
  Index labels() const { return w2.rows(); }
  void validate() const;

  template <class Self, class Fn>
  static void for_each(Self& self, Fn&& fn) {
    fn("w1", self.w1);
    fn("b1", self.b1);
    fn("w2", self.w2);
    fn("b2", self.b2);
  }

  MlpParams zeros_like() const;
  bool operator==(const MlpParams& other) const;
};

MlpParams init_mlp(Index dim, Index hidden, Index labels, std::uint64_t seed);

/// sigmoid(w2 sigmoid(w1 x + b1) + b2).
Vector mlp_forward(const MlpParams& m, const VecRef& x);
RowMatrix mlp_forward_batch(const MlpParams& m, const RowMatrix& xs);

/// Mean over examples of the summed elementwise cross-entropy.
double mlp_loss(const MlpParams& m, const RowMatrix& xs, const RowMatrix& ys);
MlpParams mlp_gradients(const MlpParams& m, const RowMatrix& xs, const RowMatrix& ys);

/// Mini-batch SGD on the cross-entropy. Labels must be 0 or 1 (UsageError
/// otherwise). Only the optimizer fields of `cfg` are used.
MlpParams mlp_train(const RowMatrix& xs, const RowMatrix& ys, const TrainConfig& cfg,
                    MlpParams init, const ProgressFn& progress = {});

enum class LabelVariant {
  gae_xy,  ///< conditional GAE scoring E(y|x)
  gae_y2,  ///< covariance GAE on the labels, scoring E(y)
};

LabelVariant parse_label_variant(std::string_view name);

struct LabelOptConfig {
  double step = 0.1;
  double tol = 1e-6;
  int max_iter = 100;
  LabelVariant variant = LabelVariant::gae_y2;
  /// Climb the score (true) or descend it.
  bool ascend = true;
  /// Gaussian noise on the y input while training the GAE_XY model.
  double train_noise_std = 0.1;
  int max_halvings = 20;

  void validate() const;
};

struct RefineResult {
  Vector y;
  std::vector<double> energies;  ///< score after each accepted iterate, starting with y0
  int iterations = 0;
};

/// The label energy became non-finite during refinement; carries the trace so far.
class RefinementError : public Error {
 public:
  RefinementError(const std::string& what, std::vector<double> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

/// Label-space energy used by refine_labels.
double label_energy(const GaeParams& g, const VecRef& x, const VecRef& y, LabelVariant variant);
Vector label_energy_gradient(const GaeParams& g, const VecRef& x, const VecRef& y,
                             LabelVariant variant);

/// First-order optimization of the label energy starting from `y0`, clamped
/// to [0,1]. A step that moves the score the wrong way is retried with half
/// the step size, up to cfg.max_halvings times.
RefineResult refine_labels(const GaeParams& g, const VecRef& x, const VecRef& y0,
                           const LabelOptConfig& cfg);

/// MLP prediction followed by per-example refinement; rows are examples.
RowMatrix predict_structured(const MlpParams& mlp, const GaeParams& g, const RowMatrix& xs,
                             const LabelOptConfig& cfg, int threads = 1);

/// Fraction of entries whose 0.5-thresholded prediction (ties -> 1) disagrees with truth.
double multilabel_error(const RowMatrix& pred, const RowMatrix& truth);

/// Trains the post-classification GAE for a variant: GAE_XY is a conditional
/// model on (x, y) with Gaussian noise of std `noise_std` on the y input;
/// GAE_Y2 is a covariance model on (y, y) trained with cfg's corruption
/// settings. Mode and tying are set here.
GaeTrainResult train_label_gae(const RowMatrix& xs, const RowMatrix& ys, LabelVariant variant,
                               Index factors, Index mapping, const TrainConfig& cfg,
                               double noise_std);

}  // namespace gae
