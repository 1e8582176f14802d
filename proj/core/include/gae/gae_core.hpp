// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gae/activation.hpp"
#include "gae/linalg.hpp"

namespace gae {

/// Factored gated auto-encoder parameters.
///
/// Encoder and decoder share the single copy of `wx`, `wy` and `wh`; mutating
/// a weight changes both directions. A covariance auto-encoder is the special
/// case `wx == wy`, `ax == ay` fed with `x == y`.
struct GaeParams {
  Matrix wx;  ///< F x Dx factor loadings of x
  Matrix wy;  ///< F x Dy factor loadings of y
  Matrix wh;  ///< M x F mapping-unit weights
  Vector b;   ///< M mapping bias
  Vector ax;  ///< Dx output bias used when reconstructing x
  Vector ay;  ///< Dy output bias used when reconstructing y
  Activation activation = Activation::sigmoid;

  static GaeParams zeros(Index dx, Index dy, Index factors, Index mapping,
                         Activation act = Activation::sigmoid);

  Index dim_x() const { return wx.cols(); }
  Index dim_y() const { return wy.cols(); }
  Index factors() const { return wx.rows(); }
  Index mapping_units() const { return wh.rows(); }

  /// Throws ShapeError on inconsistent dimensions, InputError on non-finite entries.
  void validate() const;

  /// Calls `fn(name, tensor)` for every parameter tensor in a fixed order.
  template <class Self, class Fn>
  static void for_each(Self& self, Fn&& fn) {
    fn("wx", self.wx);
    fn("wy", self.wy);
    fn("wh", self.wh);
    fn("b", self.b);
    fn("ax", self.ax);
    fn("ay", self.ay);
  }

  /// Same shapes, all zero; used as a gradient accumulator.
  GaeParams zeros_like() const;
  bool operator==(const GaeParams& other) const;
};

/// Classical auto-encoder with sigmoid hiddens, linear output and tied weights.
struct MeanAeParams {
  Matrix w;  ///< M x D
  Vector c;  ///< M hidden bias
  Vector a;  ///< D output bias

  static MeanAeParams zeros(Index dim, Index hidden);

  Index dim() const { return w.cols(); }
  Index hidden_units() const { return w.rows(); }
  void validate() const;

  template <class Self, class Fn>
  static void for_each(Self& self, Fn&& fn) {
    fn("w", self.w);
    fn("c", self.c);
    fn("a", self.a);
  }

  MeanAeParams zeros_like() const;
  bool operator==(const MeanAeParams& other) const;
};

struct MappingState {
  Vector h;  ///< activation(u)
  Vector u;  ///< pre-activation
};

enum class LossMode { conditional, symmetric };

LossMode parse_loss_mode(std::string_view name);

/// u = wh ((wx x) .* (wy y)) + b, h = activation(u).
MappingState encode(const GaeParams& p, const VecRef& x, const VecRef& y);

/// r(y|x) = wy^T ((wx x) .* (wh^T h)) + ay.
Vector decode_y(const GaeParams& p, const VecRef& x, const MappingState& state);

/// r(x|y) = wx^T ((wy y) .* (wh^T h)) + ax.
Vector decode_x(const GaeParams& p, const VecRef& y, const MappingState& state);

/// Conditional: 1/2 ||r(y|x) - y||^2. Symmetric: adds 1/2 ||r(x|y) - x||^2,
/// both reconstructions sharing one encoding of the pair.
double reconstruction_loss(const GaeParams& p, const VecRef& x, const VecRef& y, LossMode mode);

/// Mean reconstruction loss over the rows of `xs`, `ys`.
double mean_reconstruction_loss(const GaeParams& p, const RowMatrix& xs, const RowMatrix& ys,
                                LossMode mode);

/// Gradient of the mean batch loss with respect to every parameter tensor.
/// Throws UsageError on an empty batch.
GaeParams loss_gradients(const GaeParams& p, const RowMatrix& xs, const RowMatrix& ys,
                         LossMode mode);

/// Adds the gradient of one example's loss to `grad` and returns the loss.
/// The encoder sees (x_in, y_in) while the reconstruction targets are
/// (x_target, y_target), which is what denoising training needs.
double accumulate_loss_gradients(const GaeParams& p, const VecRef& x_in, const VecRef& y_in,
                                 const VecRef& x_target, const VecRef& y_target, LossMode mode,
                                 GaeParams& grad);

// --- classical (mean) auto-encoder ---

/// h = sigmoid(w x + c).
Vector mean_encode(const MeanAeParams& m, const VecRef& x);
/// r = w^T h + a.
Vector mean_decode(const MeanAeParams& m, const VecRef& h);
double reconstruction_loss(const MeanAeParams& m, const VecRef& x);
double mean_reconstruction_loss(const MeanAeParams& m, const RowMatrix& xs);
double accumulate_mean_loss_gradients(const MeanAeParams& m, const VecRef& x_in,
                                      const VecRef& x_target, MeanAeParams& grad);
MeanAeParams mean_loss_gradients(const MeanAeParams& m, const RowMatrix& xs);

}  // namespace gae
