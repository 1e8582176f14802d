// SPDX-License-Identifier: Apache-2.0
#include "gae/rbm_oracle.hpp"

#include "gae/errors.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace gae::rbm {

namespace {

double log1p_exp(double t) {
  return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

// log sum_{h in {0,1}^m} exp(neg_energy(h)), computed in two passes.
double log_sum_exp_over_states(Index m, const std::function<double(const Vector&)>& neg_energy) {
  if (m > 24) throw UsageError("hidden-state enumeration limited to 24 units");
  const std::uint64_t states = std::uint64_t{1} << m;
  std::vector<double> values(states);
  Vector h(m);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < states; ++s) {
    for (Index k = 0; k < m; ++k) h[k] = static_cast<double>((s >> k) & 1U);
    values[s] = neg_energy(h);
    peak = std::max(peak, values[s]);
  }
  double sum = 0.0;
  for (const double v : values) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

void check_len(Index got, Index expected, const char* what) {
  if (got != expected) {
    throw ShapeError(std::string(what) + ": expected " + std::to_string(expected) + ", got " +
                     std::to_string(got));
  }
}

}  // namespace

void FcrbmParams::validate() const {
  check_len(wy.rows(), wx.rows(), "fcrbm wy rows");
  check_len(wh.rows(), wx.rows(), "fcrbm wh rows");
  check_len(a.size(), wx.cols(), "fcrbm a");
  check_len(b.size(), wh.cols(), "fcrbm b");
}

void CovRbmParams::validate() const {
  check_len(c.rows(), p.rows(), "covrbm C rows");
  check_len(a.size(), c.cols(), "covrbm a");
  check_len(b.size(), p.cols(), "covrbm b");
}

void GaussianRbmParams::validate() const {
  check_len(c.size(), w.rows(), "rbm c");
  check_len(a.size(), w.cols(), "rbm a");
}

double fcrbm_energy(const FcrbmParams& q, const VecRef& x, const VecRef& h, const VecRef& y) {
  const Vector fx = q.wx * x;
  const Vector fy = q.wy * y;
  const Vector fh = q.wh * h;
  double triple = 0.0;
  for (Index f = 0; f < fx.size(); ++f) triple += fx[f] * fy[f] * fh[f];
  return 0.5 * (q.a - x).squaredNorm() - q.b.dot(h) - triple;
}

double covrbm_energy(const CovRbmParams& q, const VecRef& x, const VecRef& h) {
  const Vector cx = q.c * x;
  const Vector ph = q.p * h;
  double triple = 0.0;
  for (Index f = 0; f < cx.size(); ++f) triple += ph[f] * cx[f] * cx[f];
  return x.squaredNorm() - q.a.dot(x) - triple - q.b.dot(h);
}

double gaussian_rbm_energy(const GaussianRbmParams& q, const VecRef& x, const VecRef& h) {
  return 0.5 * (q.a - x).squaredNorm() - q.c.dot(h) - h.dot(q.w * x);
}

double fcrbm_free_energy(const FcrbmParams& q, const VecRef& x, const VecRef& y) {
  q.validate();
  check_len(x.size(), q.wx.cols(), "fcrbm x");
  check_len(y.size(), q.wy.cols(), "fcrbm y");
  const Vector fx = q.wx * x;
  const Vector fy = q.wy * y;
  double total = 0.0;
  for (Index k = 0; k < q.wh.cols(); ++k) {
    double act = q.b[k];
    for (Index f = 0; f < q.wh.rows(); ++f) act += q.wh(f, k) * fx[f] * fy[f];
    total += log1p_exp(act);
  }
  return total + q.a.dot(x) - 0.5 * x.squaredNorm() - 0.5 * q.a.squaredNorm();
}

double covrbm_free_energy(const CovRbmParams& q, const VecRef& x) {
  q.validate();
  check_len(x.size(), q.c.cols(), "covrbm x");
  const Vector cx = q.c * x;
  double total = 0.0;
  for (Index k = 0; k < q.p.cols(); ++k) {
    double act = q.b[k];
    for (Index f = 0; f < q.p.rows(); ++f) act += q.p(f, k) * cx[f] * cx[f];
    total += log1p_exp(act);
  }
  return total - x.squaredNorm() + q.a.dot(x);
}

double gaussian_rbm_free_energy(const GaussianRbmParams& q, const VecRef& x) {
  q.validate();
  check_len(x.size(), q.w.cols(), "rbm x");
  const Vector act = q.w * x + q.c;
  double total = 0.0;
  for (Index k = 0; k < act.size(); ++k) total += log1p_exp(act[k]);
  return total + q.a.dot(x) - 0.5 * x.squaredNorm() - 0.5 * q.a.squaredNorm();
}

double mcrbm_free_energy(const GaussianRbmParams& mean, const CovRbmParams& cov, const VecRef& x) {
  return gaussian_rbm_free_energy(mean, x) + covrbm_free_energy(cov, x);
}

double fcrbm_free_energy_enumerated(const FcrbmParams& q, const VecRef& x, const VecRef& y) {
  q.validate();
  return log_sum_exp_over_states(q.wh.cols(),
                                 [&](const Vector& h) { return -fcrbm_energy(q, x, h, y); });
}

double covrbm_free_energy_enumerated(const CovRbmParams& q, const VecRef& x) {
  q.validate();
  return log_sum_exp_over_states(q.p.cols(), [&](const Vector& h) { return -covrbm_energy(q, x, h); });
}

double gaussian_rbm_free_energy_enumerated(const GaussianRbmParams& q, const VecRef& x) {
  q.validate();
  return log_sum_exp_over_states(q.w.rows(),
                                 [&](const Vector& h) { return -gaussian_rbm_energy(q, x, h); });
}

double mcrbm_free_energy_enumerated(const GaussianRbmParams& mean, const CovRbmParams& cov,
                                    const VecRef& x) {
  mean.validate();
  cov.validate();
  const Index mm = mean.w.rows();
  const Index mc = cov.p.cols();
  return log_sum_exp_over_states(mm + mc, [&](const Vector& h) {
    return -gaussian_rbm_energy(mean, x, h.head(mm)) - covrbm_energy(cov, x, h.tail(mc));
  });
}

FcrbmParams fcrbm_from_gae(const GaeParams& p) {
  return {p.wy, p.wx, p.wh.transpose(), p.ay, p.b};
}

GaeParams gae_from_fcrbm(const FcrbmParams& q, const Vector& ax, Activation act) {
  GaeParams p;
  p.wx = q.wy;
  p.wy = q.wx;
  p.wh = q.wh.transpose();
  p.b = q.b;
  p.ax = ax;
  p.ay = q.a;
  p.activation = act;
  return p;
}

CovRbmParams covrbm_from_cov_gae(const GaeParams& p) {
  return {p.wh.transpose(), p.wx, p.ax, p.b};
}

GaeParams cov_gae_from_covrbm(const CovRbmParams& q) {
  GaeParams p;
  p.wx = q.c;
  p.wy = q.c;
  p.wh = q.p.transpose();
  p.b = q.b;
  p.ax = q.a;
  p.ay = q.a;
  p.activation = Activation::sigmoid;
  return p;
}

GaussianRbmParams gaussian_rbm_from_mean_ae(const MeanAeParams& m) { return {m.w, m.c, m.a}; }

}  // namespace gae::rbm
