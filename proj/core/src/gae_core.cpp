// SPDX-License-Identifier: Apache-2.0
#include "gae/gae_core.hpp"

#include "gae/errors.hpp"

#include <string>

namespace gae {

GaeParams GaeParams::zeros(Index dx, Index dy, Index factors, Index mapping, Activation act) {
  GaeParams p;
  p.wx = Matrix::Zero(factors, dx);
  p.wy = Matrix::Zero(factors, dy);
  p.wh = Matrix::Zero(mapping, factors);
  p.b = Vector::Zero(mapping);
  p.ax = Vector::Zero(dx);
  p.ay = Vector::Zero(dy);
  p.activation = act;
  return p;
}

void GaeParams::validate() const {
  require_dim(wy.rows(), wx.rows(), "wy rows (factors)");
  require_dim(wh.cols(), wx.rows(), "wh cols (factors)");
  require_dim(b.size(), wh.rows(), "b (mapping units)");
  require_dim(ax.size(), wx.cols(), "ax (x dimension)");
  require_dim(ay.size(), wy.cols(), "ay (y dimension)");
  for_each(*this, [](const char* name, const auto& t) { require_finite(t, name); });
}

GaeParams GaeParams::zeros_like() const {
  return zeros(dim_x(), dim_y(), factors(), mapping_units(), activation);
}

bool GaeParams::operator==(const GaeParams& o) const {
  return activation == o.activation && wx == o.wx && wy == o.wy && wh == o.wh && b == o.b &&
         ax == o.ax && ay == o.ay;
}

MeanAeParams MeanAeParams::zeros(Index dim, Index hidden) {
  return {Matrix::Zero(hidden, dim), Vector::Zero(hidden), Vector::Zero(dim)};
}

void MeanAeParams::validate() const {
  require_dim(c.size(), w.rows(), "c (hidden units)");
  require_dim(a.size(), w.cols(), "a (input dimension)");
  for_each(*this, [](const char* name, const auto& t) { require_finite(t, name); });
}

MeanAeParams MeanAeParams::zeros_like() const { return zeros(dim(), hidden_units()); }

bool MeanAeParams::operator==(const MeanAeParams& o) const {
  return w == o.w && c == o.c && a == o.a;
}

LossMode parse_loss_mode(std::string_view name) {
  if (name == "conditional") return LossMode::conditional;
  if (name == "symmetric") return LossMode::symmetric;
  throw UsageError("unknown loss mode '" + std::string(name) + "'");
}

namespace {

void check_inputs(const GaeParams& p, const VecRef& x, const VecRef& y) {
  require_dim(x.size(), p.dim_x(), "x");
  require_dim(y.size(), p.dim_y(), "y");
  require_finite(x, "x");
  require_finite(y, "y");
}

void check_state(const GaeParams& p, const MappingState& s) {
  require_dim(s.h.size(), p.mapping_units(), "mapping state");
}

// Forward quantities shared by the loss and its gradient.
struct Forward {
  Vector fx, fy;  // factor projections
  Vector u, h;
  Vector g;  // wh^T h
};

Forward forward(const GaeParams& p, const VecRef& x, const VecRef& y) {
  Forward f;
  f.fx.noalias() = p.wx * x;
  f.fy.noalias() = p.wy * y;
  f.u.noalias() = p.wh * f.fx.cwiseProduct(f.fy);
  f.u += p.b;
  f.h = activate(p.activation, f.u);
  f.g.noalias() = p.wh.transpose() * f.h;
  return f;
}

// One reconstruction direction: the output `w_out^T ((gate factor) .* g) + bias`
// compared with `target`. Accumulates parameter gradients of 1/2 ||r - target||^2
// and the gradients flowing into the gate factor and into h.
double backprop_direction(const Matrix& w_out, const Vector& bias, const Vector& gate,
                          const Vector& g, const Vector& h, const VecRef& target, Matrix& grad_w_out,
                          Vector& grad_bias, Vector& d_gate, Matrix& grad_wh, Vector& d_h,
                          const Matrix& wh) {
  const Vector q = gate.cwiseProduct(g);
  Vector delta = w_out.transpose() * q + bias - target;
  grad_bias += delta;
  grad_w_out.noalias() += q * delta.transpose();
  const Vector dq = w_out * delta;
  d_gate += dq.cwiseProduct(g);
  const Vector dg = dq.cwiseProduct(gate);
  grad_wh.noalias() += h * dg.transpose();
  d_h.noalias() += wh * dg;
  return 0.5 * delta.squaredNorm();
}

}  // namespace

MappingState encode(const GaeParams& p, const VecRef& x, const VecRef& y) {
  check_inputs(p, x, y);
  MappingState s;
  s.u.noalias() = p.wh * (p.wx * x).cwiseProduct(p.wy * y);
  s.u += p.b;
  s.h = activate(p.activation, s.u);
  return s;
}

Vector decode_y(const GaeParams& p, const VecRef& x, const MappingState& state) {
  require_dim(x.size(), p.dim_x(), "x");
  check_state(p, state);
  return p.wy.transpose() * (p.wx * x).cwiseProduct(p.wh.transpose() * state.h) + p.ay;
}

Vector decode_x(const GaeParams& p, const VecRef& y, const MappingState& state) {
  require_dim(y.size(), p.dim_y(), "y");
  check_state(p, state);
  return p.wx.transpose() * (p.wy * y).cwiseProduct(p.wh.transpose() * state.h) + p.ax;
}

double reconstruction_loss(const GaeParams& p, const VecRef& x, const VecRef& y, LossMode mode) {
  const MappingState s = encode(p, x, y);
  double loss = 0.5 * (decode_y(p, x, s) - y).squaredNorm();
  if (mode == LossMode::symmetric) loss += 0.5 * (decode_x(p, y, s) - x).squaredNorm();
  return loss;
}

double mean_reconstruction_loss(const GaeParams& p, const RowMatrix& xs, const RowMatrix& ys,
                                LossMode mode) {
  require_dim(ys.rows(), xs.rows(), "paired batch size");
  if (xs.rows() == 0) throw UsageError("empty batch");
  double total = 0.0;
  for (Index i = 0; i < xs.rows(); ++i) {
    total += reconstruction_loss(p, xs.row(i).transpose(), ys.row(i).transpose(), mode);
  }
  return total / static_cast<double>(xs.rows());
}

double accumulate_loss_gradients(const GaeParams& p, const VecRef& x_in, const VecRef& y_in,
                                 const VecRef& x_target, const VecRef& y_target, LossMode mode,
                                 GaeParams& grad) {
  check_inputs(p, x_in, y_in);
  require_dim(x_target.size(), p.dim_x(), "x target");
  require_dim(y_target.size(), p.dim_y(), "y target");

  const Forward f = forward(p, x_in, y_in);
  Vector d_fx = Vector::Zero(p.factors());
  Vector d_fy = Vector::Zero(p.factors());
  Vector d_h = Vector::Zero(p.mapping_units());

  // r(y|x): gated by the x factors
  double loss = backprop_direction(p.wy, p.ay, f.fx, f.g, f.h, y_target, grad.wy, grad.ay, d_fx,
                                   grad.wh, d_h, p.wh);
  if (mode == LossMode::symmetric) {
    loss += backprop_direction(p.wx, p.ax, f.fy, f.g, f.h, x_target, grad.wx, grad.ax, d_fy,
                               grad.wh, d_h, p.wh);
  }

  Vector d_u(f.u.size());
  for (Index k = 0; k < f.u.size(); ++k) d_u[k] = d_h[k] * activate_derivative(p.activation, f.u[k]);
  grad.b += d_u;
  grad.wh.noalias() += d_u * f.fx.cwiseProduct(f.fy).transpose();
  const Vector d_prod = p.wh.transpose() * d_u;
  d_fx += d_prod.cwiseProduct(f.fy);
  d_fy += d_prod.cwiseProduct(f.fx);
  grad.wx.noalias() += d_fx * x_in.transpose();
  grad.wy.noalias() += d_fy * y_in.transpose();
  return loss;
}

GaeParams loss_gradients(const GaeParams& p, const RowMatrix& xs, const RowMatrix& ys,
                         LossMode mode) {
  if (xs.rows() == 0) throw UsageError("loss_gradients: empty batch");
  require_dim(ys.rows(), xs.rows(), "paired batch size");
  GaeParams grad = p.zeros_like();
  for (Index i = 0; i < xs.rows(); ++i) {
    const auto x = xs.row(i).transpose();
    const auto y = ys.row(i).transpose();
    accumulate_loss_gradients(p, x, y, x, y, mode, grad);
  }
  const double scale = 1.0 / static_cast<double>(xs.rows());
  GaeParams::for_each(grad, [scale](const char*, auto& t) { t *= scale; });
  return grad;
}

// --- classical auto-encoder ---

Vector mean_encode(const MeanAeParams& m, const VecRef& x) {
  require_dim(x.size(), m.dim(), "x");
  require_finite(x, "x");
  Vector u = m.w * x + m.c;
  for (Index k = 0; k < u.size(); ++k) u[k] = sigmoid(u[k]);
  return u;
}

Vector mean_decode(const MeanAeParams& m, const VecRef& h) {
  require_dim(h.size(), m.hidden_units(), "hidden state");
  return m.w.transpose() * h + m.a;
}

double reconstruction_loss(const MeanAeParams& m, const VecRef& x) {
  return 0.5 * (mean_decode(m, mean_encode(m, x)) - x).squaredNorm();
}

double mean_reconstruction_loss(const MeanAeParams& m, const RowMatrix& xs) {
  if (xs.rows() == 0) throw UsageError("empty batch");
  double total = 0.0;
  for (Index i = 0; i < xs.rows(); ++i) total += reconstruction_loss(m, xs.row(i).transpose());
  return total / static_cast<double>(xs.rows());
}

double accumulate_mean_loss_gradients(const MeanAeParams& m, const VecRef& x_in,
                                      const VecRef& x_target, MeanAeParams& grad) {
  require_dim(x_target.size(), m.dim(), "x target");
  const Vector h = mean_encode(m, x_in);
  const Vector delta = m.w.transpose() * h + m.a - x_target;
  grad.a += delta;
  grad.w.noalias() += h * delta.transpose();
  const Vector d_u = (m.w * delta).cwiseProduct(h.cwiseProduct(Vector::Ones(h.size()) - h));
  grad.c += d_u;
  grad.w.noalias() += d_u * x_in.transpose();
  return 0.5 * delta.squaredNorm();
}

MeanAeParams mean_loss_gradients(const MeanAeParams& m, const RowMatrix& xs) {
  if (xs.rows() == 0) throw UsageError("mean_loss_gradients: empty batch");
  MeanAeParams grad = m.zeros_like();
  for (Index i = 0; i < xs.rows(); ++i) {
    const auto x = xs.row(i).transpose();
    accumulate_mean_loss_gradients(m, x, x, grad);
  }
  const double scale = 1.0 / static_cast<double>(xs.rows());
  MeanAeParams::for_each(grad, [scale](const char*, auto& t) { t *= scale; });
  return grad;
}

}  // namespace gae
