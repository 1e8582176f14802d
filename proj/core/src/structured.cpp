// SPDX-License-Identifier: Apache-2.0
#include "gae/structured.hpp"

#include "gae/energy.hpp"
#include "gae/errors.hpp"
#include "gae/parallel.hpp"
#include "gae/random.hpp"
#include "sgd.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace gae {

MlpParams MlpParams::zeros(Index dim, Index hidden, Index labels) {
  return {Matrix::Zero(hidden, dim), Vector::Zero(hidden), Matrix::Zero(labels, hidden),
          Vector::Zero(labels)};
}

void MlpParams::validate() const {
  require_dim(b1.size(), w1.rows(), "b1");
  require_dim(w2.cols(), w1.rows(), "w2 cols");
  require_dim(b2.size(), w2.rows(), "b2");
  for_each(*this, [](const char* name, const auto& t) { require_finite(t, name); });
}

MlpParams MlpParams::zeros_like() const { return zeros(dim(), hidden_units(), labels()); }

bool MlpParams::operator==(const MlpParams& o) const {
  return w1 == o.w1 && b1 == o.b1 && w2 == o.w2 && b2 == o.b2;
}

MlpParams init_mlp(Index dim, Index hidden, Index labels, std::uint64_t seed) {
  if (dim < 1 || hidden < 1 || labels < 1) throw UsageError("init_mlp: empty dimension");
  Rng rng = make_rng(seed, 0x31F);
  MlpParams m = MlpParams::zeros(dim, hidden, labels);
  m.w1 = uniform_matrix(hidden, dim, 1.0 / std::sqrt(static_cast<double>(dim)), rng);
  m.w2 = uniform_matrix(labels, hidden, 1.0 / std::sqrt(static_cast<double>(hidden)), rng);
  return m;
}

namespace {

Vector sigmoid_vec(const Vector& z) {
  Vector out(z.size());
  for (Index i = 0; i < z.size(); ++i) out[i] = sigmoid(z[i]);
  return out;
}

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

void check_binary(const RowMatrix& ys) {
  for (Index i = 0; i < ys.size(); ++i) {
    const double v = ys.data()[i];
    if (v != 0.0 && v != 1.0) throw UsageError("labels must be 0 or 1, got " + std::to_string(v));
  }
}

double mlp_accumulate(const MlpParams& m, const VecRef& x, const VecRef& y, MlpParams& grad) {
  const Vector h = sigmoid_vec(m.w1 * x + m.b1);
  const Vector z = m.w2 * h + m.b2;
  double loss = 0.0;
  Vector dz(z.size());
  for (Index l = 0; l < z.size(); ++l) {
    loss += softplus(z[l]) - y[l] * z[l];
    dz[l] = sigmoid(z[l]) - y[l];
  }
  grad.b2 += dz;
  grad.w2.noalias() += dz * h.transpose();
  const Vector da = (m.w2.transpose() * dz).cwiseProduct(h.cwiseProduct(Vector::Ones(h.size()) - h));
  grad.b1 += da;
  grad.w1.noalias() += da * x.transpose();
  return loss;
}

}  // namespace

Vector mlp_forward(const MlpParams& m, const VecRef& x) {
  require_dim(x.size(), m.dim(), "x");
  return sigmoid_vec(m.w2 * sigmoid_vec(m.w1 * x + m.b1) + m.b2);
}

RowMatrix mlp_forward_batch(const MlpParams& m, const RowMatrix& xs) {
  RowMatrix out(xs.rows(), m.labels());
  for (Index n = 0; n < xs.rows(); ++n) out.row(n) = mlp_forward(m, xs.row(n).transpose()).transpose();
  return out;
}

double mlp_loss(const MlpParams& m, const RowMatrix& xs, const RowMatrix& ys) {
  if (xs.rows() == 0) throw UsageError("mlp_loss: empty data");
  require_dim(ys.rows(), xs.rows(), "label rows");
  double total = 0.0;
  for (Index n = 0; n < xs.rows(); ++n) {
    const Vector z = m.w2 * sigmoid_vec(m.w1 * xs.row(n).transpose() + m.b1) + m.b2;
    for (Index l = 0; l < z.size(); ++l) total += softplus(z[l]) - ys(n, l) * z[l];
  }
  return total / static_cast<double>(xs.rows());
}

MlpParams mlp_gradients(const MlpParams& m, const RowMatrix& xs, const RowMatrix& ys) {
  if (xs.rows() == 0) throw UsageError("mlp_gradients: empty data");
  require_dim(ys.rows(), xs.rows(), "label rows");
  MlpParams grad = m.zeros_like();
  for (Index n = 0; n < xs.rows(); ++n) mlp_accumulate(m, xs.row(n).transpose(), ys.row(n).transpose(), grad);
  const double scale = 1.0 / static_cast<double>(xs.rows());
  MlpParams::for_each(grad, [scale](const char*, auto& t) { t *= scale; });
  return grad;
}

MlpParams mlp_train(const RowMatrix& xs, const RowMatrix& ys, const TrainConfig& cfg,
                    MlpParams init, const ProgressFn& progress) {
  cfg.validate();
  init.validate();
  if (xs.rows() == 0) throw UsageError("mlp_train: empty dataset");
  require_dim(ys.rows(), xs.rows(), "label rows");
  require_dim(xs.cols(), init.dim(), "features");
  require_dim(ys.cols(), init.labels(), "labels");
  check_binary(ys);

  auto batch_grad = [&](const std::vector<Index>& order, std::size_t begin, std::size_t end, int,
                        Index, MlpParams& grad) {
    for (std::size_t i = begin; i < end; ++i) {
      mlp_accumulate(init, xs.row(order[i]).transpose(), ys.row(order[i]).transpose(), grad);
    }
    const double scale = 1.0 / static_cast<double>(end - begin);
    MlpParams::for_each(grad, [scale](const char*, auto& t) { t *= scale; });
  };
  auto eval = [&](const MlpParams& m) { return mlp_loss(m, xs, ys); };
  auto no_val = [](const MlpParams&) { return std::numeric_limits<double>::quiet_NaN(); };
  detail::sgd_loop(xs.rows(), cfg, init, batch_grad, eval, no_val, progress);
  return init;
}

LabelVariant parse_label_variant(std::string_view name) {
  if (name == "xy" || name == "gae_xy") return LabelVariant::gae_xy;
  if (name == "y2" || name == "gae_y2") return LabelVariant::gae_y2;
  throw UsageError("unknown label variant '" + std::string(name) + "'");
}

void LabelOptConfig::validate() const {
  auto fail = [](const std::string& what) { throw UsageError("label optimizer: " + what); };
  if (!std::isfinite(step) || step < 0) fail("step must be finite and >= 0");
  if (!std::isfinite(tol) || tol <= 0) fail("tol must be positive");
  if (max_iter < 0) fail("max_iter must be >= 0");
  if (!std::isfinite(train_noise_std) || train_noise_std < 0) fail("noise std must be >= 0");
  if (max_halvings < 0) fail("max_halvings must be >= 0");
}

double label_energy(const GaeParams& g, const VecRef& x, const VecRef& y, LabelVariant variant) {
  if (variant == LabelVariant::gae_y2) return energy_covariance(g, y).value;
  return energy_conditional(g, x, y).value;
}

Vector label_energy_gradient(const GaeParams& g, const VecRef& x, const VecRef& y,
                             LabelVariant variant) {
  if (variant == LabelVariant::gae_y2) return energy_covariance_gradient(g, y);
  return vector_field(g, x, y, Target::y);
}

RefineResult refine_labels(const GaeParams& g, const VecRef& x, const VecRef& y0,
                           const LabelOptConfig& cfg) {
  cfg.validate();
  require_dim(y0.size(), g.dim_y(), "initial labels");
  if ((y0.array() < 0.0).any() || (y0.array() > 1.0).any()) {
    throw UsageError("initial labels must lie in [0,1]");
  }
  const double sign = cfg.ascend ? 1.0 : -1.0;
  RefineResult out;
  out.y = y0;
  double energy = label_energy(g, x, out.y, cfg.variant);
  out.energies.push_back(energy);
  if (!std::isfinite(energy)) throw RefinementError("non-finite initial label energy", out.energies);

  double step = cfg.step;
  int halvings = 0;
  for (int it = 0; it < cfg.max_iter; ++it) {
    const Vector grad = label_energy_gradient(g, x, out.y, cfg.variant);
    ++out.iterations;
    bool accepted = false;
    Vector candidate;
    double candidate_energy = energy;
    while (true) {
      candidate = (out.y + sign * step * grad).cwiseMax(0.0).cwiseMin(1.0);
      candidate_energy = label_energy(g, x, candidate, cfg.variant);
      if (!std::isfinite(candidate_energy)) {
        throw RefinementError("non-finite label energy at iteration " + std::to_string(it),
                              out.energies);
      }
      if (sign * (candidate_energy - energy) >= 0.0) {
        accepted = true;
        break;
      }
      if (halvings >= cfg.max_halvings) break;
      step *= 0.5;
      ++halvings;
    }
    if (!accepted) break;
    const double change = std::abs(candidate_energy - energy);
    out.y = candidate;
    energy = candidate_energy;
    out.energies.push_back(energy);
    if (change <= cfg.tol) break;
  }
  return out;
}

RowMatrix predict_structured(const MlpParams& mlp, const GaeParams& g, const RowMatrix& xs,
                             const LabelOptConfig& cfg, int threads) {
  cfg.validate();
  RowMatrix out = mlp_forward_batch(mlp, xs);
  if (cfg.max_iter == 0) return out;
  parallel_for(static_cast<std::size_t>(xs.rows()), threads, [&](std::size_t i) {
    const auto n = static_cast<Index>(i);
    const Vector y0 = out.row(n).transpose();
    out.row(n) = refine_labels(g, xs.row(n).transpose(), y0, cfg).y.transpose();
  });
  return out;
}

double multilabel_error(const RowMatrix& pred, const RowMatrix& truth) {
  require_dim(pred.rows(), truth.rows(), "prediction rows");
  require_dim(pred.cols(), truth.cols(), "prediction cols");
  if (pred.size() == 0) throw UsageError("multilabel_error: empty input");
  Index wrong = 0;
  for (Index i = 0; i < pred.size(); ++i) {
    const double bit = pred.data()[i] >= 0.5 ? 1.0 : 0.0;
    if (bit != truth.data()[i]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(pred.size());
}

GaeTrainResult train_label_gae(const RowMatrix& xs, const RowMatrix& ys, LabelVariant variant,
                               Index factors, Index mapping, const TrainConfig& cfg,
                               double noise_std) {
  TrainConfig run = cfg;
  if (variant == LabelVariant::gae_xy) {
    run.mode = LossMode::conditional;
    run.tie_factors = false;
    run.corrupt_x = false;
    run.corrupt_y = noise_std > 0;
    run.corruption = noise_std > 0 ? Corruption::gaussian : Corruption::none;
    run.corruption_level = noise_std;
    GaeParams init = init_gae(xs.cols(), ys.cols(), factors, mapping, Activation::sigmoid, cfg.seed);
    return train_gae(xs, ys, run, std::move(init));
  }
  // The label-only model keeps whatever denoising corruption cfg asks for;
  // trained clean it learns a near-identity map whose energy has no useful
  // maxima near label vectors.
  run.mode = LossMode::symmetric;
  run.tie_factors = true;
  run.corrupt_x = true;
  run.corrupt_y = true;
  GaeParams init = init_gae(ys.cols(), ys.cols(), factors, mapping, Activation::sigmoid, cfg.seed, true);
  return train_gae(ys, ys, run, std::move(init));
}

}  // namespace gae
