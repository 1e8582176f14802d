// SPDX-License-Identifier: Apache-2.0
#include "gae/classify.hpp"

#include "gae/energy.hpp"
#include "gae/errors.hpp"

#include <cmath>
#include <string>

namespace gae {

namespace {

double member_energy(const ClassMember& m, const VecRef& x) {
  double e = 0.0;
  if (m.mean) e += energy_mean(*m.mean, x).value;
  if (m.cov) e += energy_covariance(*m.cov, x).value;
  return e;
}

Vector softmax(const Vector& s) {
  const double peak = s.maxCoeff();
  Vector p = (s.array() - peak).exp().matrix();
  return p / p.sum();
}

int argmax_lowest(const Eigen::Ref<const Vector>& s) {
  int best = 0;
  for (Index i = 1; i < s.size(); ++i) {
    if (s[i] > s[best]) best = static_cast<int>(i);
  }
  return best;
}

void check_labels(const RowMatrix& xs, const std::vector<int>& labels, Index k) {
  require_dim(static_cast<Index>(labels.size()), xs.rows(), "label count");
  for (const int label : labels) {
    if (label < 0 || label >= k) {
      throw UsageError("class label " + std::to_string(label) + " outside [0," + std::to_string(k) + ")");
    }
  }
}

// Adds `weight` times the gradient of the member energy at x to `grad`.
void accumulate_member_gradient(const ClassMember& m, const VecRef& x, double weight,
                                ClassMember& grad) {
  if (m.mean) {
    const MeanAeParams& p = *m.mean;
    const Vector s = mean_encode(p, x);
    grad.mean->c += weight * s;
    grad.mean->w.noalias() += weight * s * x.transpose();
    grad.mean->a += weight * x;
  }
  if (m.cov) {
    const GaeParams& p = *m.cov;
    const Vector f = p.wx * x;
    const Vector f2 = f.cwiseAbs2();
    const Vector u = p.wh * f2 + p.b;
    const Vector s = activate(Activation::sigmoid, u);
    grad.cov->b += weight * s;
    grad.cov->wh.noalias() += weight * s * f2.transpose();
    grad.cov->wx.noalias() += (2.0 * weight) * f.cwiseProduct(p.wh.transpose() * s) * x.transpose();
    grad.cov->ax += weight * x;
  }
}

ClassMember zero_like(const ClassMember& m) {
  ClassMember z;
  if (m.mean) z.mean = m.mean->zeros_like();
  if (m.cov) z.cov = m.cov->zeros_like();
  return z;
}

void ascend(ClassMember& m, const ClassMember& grad, double lr) {
  if (m.mean) {
    m.mean->w += lr * grad.mean->w;
    m.mean->c += lr * grad.mean->c;
    m.mean->a += lr * grad.mean->a;
  }
  if (m.cov) {
    // Shared factor matrix and output bias stay tied.
    m.cov->wx += lr * grad.cov->wx;
    m.cov->wy = m.cov->wx;
    m.cov->wh += lr * grad.cov->wh;
    m.cov->b += lr * grad.cov->b;
    m.cov->ax += lr * grad.cov->ax;
    m.cov->ay = m.cov->ax;
  }
}

RowMatrix energy_matrix(const ClassifierEnsemble& ens, const RowMatrix& xs) {
  RowMatrix e(xs.rows(), ens.num_classes());
  for (Index n = 0; n < xs.rows(); ++n) {
    for (Index i = 0; i < ens.num_classes(); ++i) {
      e(n, i) = member_energy(ens.members[static_cast<std::size_t>(i)], xs.row(n).transpose());
    }
  }
  return e;
}

}  // namespace

Index ClassifierEnsemble::dim() const {
  if (members.empty()) return 0;
  const ClassMember& m = members.front();
  return m.mean ? m.mean->dim() : m.cov->dim_x();
}

void ClassifierEnsemble::validate() const {
  if (members.size() < 2) throw UsageError("ensemble needs at least two classes");
  require_dim(biases.size(), num_classes(), "calibration biases");
  require_finite(biases, "calibration biases");
  for (const ClassMember& m : members) {
    if (!m.mean && !m.cov) throw UsageError("ensemble member has no model");
    if (m.mean) {
      m.mean->validate();
      require_dim(m.mean->dim(), dim(), "member input dimension");
    }
    if (m.cov) {
      m.cov->validate();
      require_covariance_model(*m.cov);
      require_dim(m.cov->dim_x(), dim(), "member input dimension");
    }
  }
}

Vector class_scores(const ClassifierEnsemble& ens, const VecRef& x) {
  require_dim(x.size(), ens.dim(), "x");
  Vector s(ens.num_classes());
  for (Index i = 0; i < s.size(); ++i) {
    s[i] = member_energy(ens.members[static_cast<std::size_t>(i)], x) + ens.biases[i];
  }
  return s;
}

Vector posterior(const ClassifierEnsemble& ens, const VecRef& x) {
  return softmax(class_scores(ens, x));
}

int predict(const ClassifierEnsemble& ens, const VecRef& x) {
  return argmax_lowest(class_scores(ens, x));
}

double mean_log_posterior(const ClassifierEnsemble& ens, const RowMatrix& xs,
                          const std::vector<int>& labels) {
  check_labels(xs, labels, ens.num_classes());
  if (xs.rows() == 0) throw UsageError("mean_log_posterior: empty data");
  double total = 0.0;
  for (Index n = 0; n < xs.rows(); ++n) {
    const Vector s = class_scores(ens, xs.row(n).transpose());
    const double peak = s.maxCoeff();
    const double lse = peak + std::log((s.array() - peak).exp().sum());
    total += s[labels[static_cast<std::size_t>(n)]] - lse;
  }
  return total / static_cast<double>(xs.rows());
}

ClassifierEnsemble calibrate(const ClassifierEnsemble& ens, const RowMatrix& xs,
                             const std::vector<int>& labels, const CalibrationOptions& opts) {
  ens.validate();
  if (xs.rows() == 0) throw UsageError("calibrate: empty data");
  require_dim(xs.cols(), ens.dim(), "features");
  check_labels(xs, labels, ens.num_classes());
  if (!(opts.learning_rate > 0) || !(opts.member_learning_rate >= 0) || opts.epochs < 0) {
    throw UsageError("calibrate: bad schedule");
  }

  ClassifierEnsemble out = ens;
  const Index k = out.num_classes();
  const double inv_n = 1.0 / static_cast<double>(xs.rows());
  RowMatrix energies = energy_matrix(out, xs);

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    if (opts.tune_members && epoch > 0) energies = energy_matrix(out, xs);
    Vector grad_b = Vector::Zero(k);
    std::vector<ClassMember> grads;
    if (opts.tune_members) {
      for (const ClassMember& m : out.members) grads.push_back(zero_like(m));
    }
    for (Index n = 0; n < xs.rows(); ++n) {
      const Vector p = softmax(energies.row(n).transpose() + out.biases);
      // d log P(label|x) / d s_i = [i == label] - P_i
      Vector w = -p;
      w[labels[static_cast<std::size_t>(n)]] += 1.0;
      grad_b += w;
      if (opts.tune_members) {
        for (Index i = 0; i < k; ++i) {
          const auto idx = static_cast<std::size_t>(i);
          accumulate_member_gradient(out.members[idx], xs.row(n).transpose(), w[i], grads[idx]);
        }
      }
    }
    out.biases += opts.learning_rate * inv_n * grad_b;
    if (opts.tune_members) {
      for (std::size_t i = 0; i < out.members.size(); ++i) {
        ascend(out.members[i], grads[i], opts.member_learning_rate * inv_n);
      }
    }
  }
  return out;
}

double score_error(const RowMatrix& scores, const std::vector<int>& labels) {
  require_dim(static_cast<Index>(labels.size()), scores.rows(), "label count");
  if (scores.rows() == 0) throw UsageError("score_error: empty data");
  Index wrong = 0;
  for (Index n = 0; n < scores.rows(); ++n) {
    if (argmax_lowest(scores.row(n).transpose()) != labels[static_cast<std::size_t>(n)]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(scores.rows());
}

double evaluate_error(const ClassifierEnsemble& ens, const RowMatrix& xs,
                      const std::vector<int>& labels) {
  check_labels(xs, labels, ens.num_classes());
  RowMatrix scores(xs.rows(), ens.num_classes());
  for (Index n = 0; n < xs.rows(); ++n) scores.row(n) = class_scores(ens, xs.row(n).transpose()).transpose();
  return score_error(scores, labels);
}

}  // namespace gae
