// SPDX-License-Identifier: Apache-2.0
#include "gae/energy.hpp"

#include "gae/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gae {

namespace {

constexpr double kFdStep = 1e-5;

Vector field_with_decoder(const GaeParams& enc, const GaeParams& dec, const VecRef& x,
                          const VecRef& y, Target target) {
  const MappingState s = encode(enc, x, y);
  if (target == Target::y) return decode_y(dec, x, s) - y;
  return decode_x(dec, y, s) - x;
}

double jacobian_asymmetry(const GaeParams& enc, const GaeParams& dec, const VecRef& x,
                          const VecRef& y, Target wrt) {
  Vector xv = x;
  Vector yv = y;
  Vector& arg = wrt == Target::y ? yv : xv;
  const Index n = arg.size();
  Matrix jac(n, n);
  for (Index j = 0; j < n; ++j) {
    const double saved = arg[j];
    arg[j] = saved + kFdStep;
    const Vector plus = field_with_decoder(enc, dec, xv, yv, wrt);
    arg[j] = saved - kFdStep;
    const Vector minus = field_with_decoder(enc, dec, xv, yv, wrt);
    arg[j] = saved;
    jac.col(j) = (plus - minus) / (2.0 * kFdStep);
  }
  return (jac - jac.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace

StackedPair StackedPair::from(const VecRef& x, const VecRef& y) {
  StackedPair s;
  s.xi.resize(y.size() + x.size());
  s.xi << y, x;
  s.gamma.resize(x.size() + y.size());
  s.gamma << x, y;
  return s;
}

Vector vector_field(const GaeParams& p, const VecRef& x, const VecRef& y, Target target) {
  return field_with_decoder(p, p, x, y, target);
}

Vector vector_field_untied(const GaeParams& encoder, const GaeParams& decoder, const VecRef& x,
                           const VecRef& y, Target target) {
  return field_with_decoder(encoder, decoder, x, y, target);
}

double poincare_residual(const GaeParams& p, const VecRef& x, const VecRef& y, Target wrt) {
  return jacobian_asymmetry(p, p, x, y, wrt);
}

double poincare_residual_untied(const GaeParams& encoder, const GaeParams& decoder,
                                const VecRef& x, const VecRef& y, Target wrt) {
  return jacobian_asymmetry(encoder, decoder, x, y, wrt);
}

double antiderivative(Activation kind, const VecRef& u) {
  double total = 0.0;
  for (Index k = 0; k < u.size(); ++k) total += activate_integral(kind, u[k]);
  return total;
}

EnergyScore energy_conditional(const GaeParams& p, const VecRef& x, const VecRef& y) {
  const MappingState s = encode(p, x, y);
  return {antiderivative(p.activation, s.u) + p.ay.dot(y) - 0.5 * y.squaredNorm(), &p};
}

EnergyScore energy_symmetric(const GaeParams& p, const VecRef& x, const VecRef& y) {
  require_dim(x.size(), p.dim_x(), "x");
  require_dim(y.size(), p.dim_y(), "y");
  require_finite(x, "x");
  require_finite(y, "y");
  const StackedPair s = StackedPair::from(x, y);
  const Index dy = p.dim_y();
  const Index dx = p.dim_x();
  const Index f = p.factors();

  // W^xi = diag(wy, wx) applied to xi = [y; x]; W^gamma = diag(wx, wy) applied to gamma = [x; y].
  Vector proj_xi(2 * f);
  proj_xi << p.wy * s.xi.head(dy), p.wx * s.xi.tail(dx);
  Vector proj_gamma(2 * f);
  proj_gamma << p.wx * s.gamma.head(dx), p.wy * s.gamma.tail(dy);
  const Vector prod = proj_xi.cwiseProduct(proj_gamma);

  // Mapping weights over the stacked factors are 1/2 [wh wh].
  const Vector u = 0.5 * (p.wh * prod.head(f) + p.wh * prod.tail(f)) + p.b;

  Vector bias(dy + dx);
  bias << p.ay, p.ax;
  return {antiderivative(p.activation, u) + bias.dot(s.xi) - 0.5 * s.xi.squaredNorm(), &p};
}

Vector energy_symmetric_gradient(const GaeParams& p, const VecRef& x, const VecRef& y) {
  Vector g(p.dim_y() + p.dim_x());
  g << vector_field(p, x, y, Target::y), vector_field(p, x, y, Target::x);
  return g;
}

void require_covariance_model(const GaeParams& p) {
  if (p.dim_x() != p.dim_y()) throw UsageError("covariance model needs Dx == Dy");
  if (p.wx != p.wy) throw UsageError("covariance model needs a shared factor matrix (wx == wy)");
  if (p.activation != Activation::sigmoid) {
    throw UsageError("covariance energy is defined for sigmoid mapping units");
  }
}

EnergyScore energy_covariance(const GaeParams& p, const VecRef& x) {
  require_covariance_model(p);
  require_dim(x.size(), p.dim_x(), "x");
  require_finite(x, "x");
  const Vector f = p.wx * x;
  const Vector u = p.wh * f.cwiseAbs2() + p.b;
  return {antiderivative(Activation::sigmoid, u) + p.ax.dot(x) - x.squaredNorm(), &p};
}

Vector energy_covariance_gradient(const GaeParams& p, const VecRef& x) {
  require_covariance_model(p);
  require_dim(x.size(), p.dim_x(), "x");
  const Vector f = p.wx * x;
  const Vector u = p.wh * f.cwiseAbs2() + p.b;
  const Vector h = activate(Activation::sigmoid, u);
  return 2.0 * p.wx.transpose() * f.cwiseProduct(p.wh.transpose() * h) + p.ax - 2.0 * x;
}

EnergyScore energy_mean(const MeanAeParams& m, const VecRef& x) {
  require_dim(x.size(), m.dim(), "x");
  require_finite(x, "x");
  const Vector u = m.w * x + m.c;
  return {antiderivative(Activation::sigmoid, u) + m.a.dot(x) - 0.5 * x.squaredNorm(), &m};
}

Vector energy_mean_gradient(const MeanAeParams& m, const VecRef& x) {
  return m.w.transpose() * mean_encode(m, x) + m.a - x;
}

EnergyScore energy_mean_covariance(const MeanAeParams& m, const GaeParams& c, const VecRef& x) {
  require_dim(m.dim(), c.dim_x(), "mean model dimension");
  return {energy_mean(m, x).value + energy_covariance(c, x).value, &c};
}

}  // namespace gae
