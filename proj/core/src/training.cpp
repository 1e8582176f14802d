// SPDX-License-Identifier: Apache-2.0
#include "gae/training.hpp"

#include "gae/errors.hpp"
#include "gae/random.hpp"
#include "sgd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

namespace gae {

namespace {

using detail::batch_stream;
using detail::gather_rows;
using detail::sgd_loop;

constexpr std::uint64_t kCorruptXStream = 0x10000;
constexpr std::uint64_t kCorruptYStream = 0x20000;

}  // namespace

Corruption parse_corruption(std::string_view name) {
  if (name == "none") return Corruption::none;
  if (name == "masking") return Corruption::masking;
  if (name == "gaussian") return Corruption::gaussian;
  throw UsageError("unknown corruption kind '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw UsageError("train config: " + what); };
  if (!std::isfinite(learning_rate) || learning_rate < 0) fail("learning_rate must be >= 0");
  if (!std::isfinite(momentum) || momentum < 0 || momentum >= 1) fail("momentum must be in [0,1)");
  if (!std::isfinite(weight_decay) || weight_decay < 0) fail("weight_decay must be >= 0");
  if (!std::isfinite(corruption_level) || corruption_level < 0) fail("corruption level must be >= 0");
  if (corruption == Corruption::masking && corruption_level > 1) {
    fail("masking probability must be in [0,1]");
  }
  if (batch_size < 1) fail("batch_size must be positive");
  if (epochs < 0) fail("epochs must be >= 0");
}

void print_progress(const EpochStats& s) {
  std::printf("epoch=%d train_loss=%.9g val_loss=%.9g\n", s.epoch, s.train_loss, s.val_loss);
  std::fflush(stdout);
}

RowMatrix corrupt(const RowMatrix& batch, const TrainConfig& cfg, std::uint64_t stream) {
  if (!std::isfinite(cfg.corruption_level) || cfg.corruption_level < 0 ||
      (cfg.corruption == Corruption::masking && cfg.corruption_level > 1)) {
    throw UsageError("invalid corruption level " + std::to_string(cfg.corruption_level));
  }
  RowMatrix out = batch;
  if (cfg.corruption == Corruption::none || cfg.corruption_level == 0.0) return out;
  Rng rng = make_rng(cfg.seed, stream);
  if (cfg.corruption == Corruption::masking) {
    std::bernoulli_distribution drop(cfg.corruption_level);
    for (Index i = 0; i < out.size(); ++i) {
      if (drop(rng)) out.data()[i] = 0.0;
    }
  } else {
    std::normal_distribution<double> noise(0.0, cfg.corruption_level);
    for (Index i = 0; i < out.size(); ++i) out.data()[i] += noise(rng);
  }
  return out;
}

GaeParams init_gae(Index dx, Index dy, Index factors, Index mapping, Activation act,
                   std::uint64_t seed, bool tie_factors) {
  if (dx < 1 || dy < 1 || factors < 1 || mapping < 1) throw UsageError("init_gae: empty dimension");
  if (tie_factors && dx != dy) throw UsageError("init_gae: tied factors need Dx == Dy");
  Rng rng = make_rng(seed, 0x1417);
  GaeParams p = GaeParams::zeros(dx, dy, factors, mapping, act);
  p.wx = uniform_matrix(factors, dx, 1.0 / std::sqrt(static_cast<double>(dx)), rng);
  p.wy = tie_factors ? p.wx : uniform_matrix(factors, dy, 1.0 / std::sqrt(static_cast<double>(dy)), rng);
  p.wh = uniform_matrix(mapping, factors, 1.0 / std::sqrt(static_cast<double>(factors)), rng);
  return p;
}

MeanAeParams init_mean_ae(Index dim, Index hidden, std::uint64_t seed) {
  if (dim < 1 || hidden < 1) throw UsageError("init_mean_ae: empty dimension");
  Rng rng = make_rng(seed, 0x3EA7);
  MeanAeParams m = MeanAeParams::zeros(dim, hidden);
  m.w = uniform_matrix(hidden, dim, 1.0 / std::sqrt(static_cast<double>(dim)), rng);
  return m;
}

GaeTrainResult train_gae(const RowMatrix& xs, const RowMatrix& ys, const TrainConfig& cfg,
                         GaeParams init, std::optional<PairSet> validation,
                         const ProgressFn& progress) {
  cfg.validate();
  init.validate();
  if (xs.rows() == 0) throw UsageError("train_gae: empty dataset");
  require_dim(ys.rows(), xs.rows(), "paired dataset size");
  require_dim(xs.cols(), init.dim_x(), "x features");
  require_dim(ys.cols(), init.dim_y(), "y features");
  if (cfg.tie_factors && (init.wx != init.wy || init.ax != init.ay)) {
    throw UsageError("train_gae: tied training needs wx == wy and ax == ay at initialization");
  }
  const bool self_paired = &xs == &ys || xs == ys;

  auto batch_grad = [&](const std::vector<Index>& order, std::size_t begin, std::size_t end,
                        int epoch, Index batch_index, GaeParams& grad) {
    const RowMatrix bx = gather_rows(xs, order, begin, end);
    const RowMatrix by = self_paired ? bx : gather_rows(ys, order, begin, end);
    const RowMatrix cx = cfg.corrupt_x ? corrupt(bx, cfg, batch_stream(epoch, batch_index, kCorruptXStream)) : bx;
    RowMatrix cy;
    if (cfg.tie_factors && self_paired && cfg.corrupt_x && cfg.corrupt_y) {
      cy = cx;  // one corrupted copy feeds both roles of a covariance model
    } else {
      cy = cfg.corrupt_y ? corrupt(by, cfg, batch_stream(epoch, batch_index, kCorruptYStream)) : by;
    }
    for (Index i = 0; i < bx.rows(); ++i) {
      accumulate_loss_gradients(init, cx.row(i).transpose(), cy.row(i).transpose(),
                                bx.row(i).transpose(), by.row(i).transpose(), cfg.mode, grad);
    }
    const double scale = 1.0 / static_cast<double>(bx.rows());
    GaeParams::for_each(grad, [scale](const char*, auto& t) { t *= scale; });
    if (cfg.tie_factors) {
      grad.wx += grad.wy;
      grad.wy = grad.wx;
      grad.ax += grad.ay;
      grad.ay = grad.ax;
    }
  };
  auto eval = [&](const GaeParams& p) { return mean_reconstruction_loss(p, xs, ys, cfg.mode); };
  auto val_eval = [&](const GaeParams& p) {
    if (!validation || !validation->xs || validation->xs->rows() == 0) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    return mean_reconstruction_loss(p, *validation->xs, *validation->ys, cfg.mode);
  };

  GaeTrainResult result;
  // `init` doubles as the live parameter set; batch_grad reads it by reference.
  result.report = sgd_loop(xs.rows(), cfg, init, batch_grad, eval, val_eval, progress);
  if (cfg.tie_factors) {
    init.wy = init.wx;
    init.ay = init.ax;
  }
  result.params = std::move(init);
  return result;
}

MeanAeTrainResult train_mean_ae(const RowMatrix& xs, const TrainConfig& cfg, MeanAeParams init,
                                const RowMatrix* validation, const ProgressFn& progress) {
  cfg.validate();
  init.validate();
  if (xs.rows() == 0) throw UsageError("train_mean_ae: empty dataset");
  require_dim(xs.cols(), init.dim(), "features");

  auto batch_grad = [&](const std::vector<Index>& order, std::size_t begin, std::size_t end,
                        int epoch, Index batch_index, MeanAeParams& grad) {
    const RowMatrix bx = gather_rows(xs, order, begin, end);
    const RowMatrix cx = corrupt(bx, cfg, batch_stream(epoch, batch_index, kCorruptXStream));
    for (Index i = 0; i < bx.rows(); ++i) {
      accumulate_mean_loss_gradients(init, cx.row(i).transpose(), bx.row(i).transpose(), grad);
    }
    const double scale = 1.0 / static_cast<double>(bx.rows());
    MeanAeParams::for_each(grad, [scale](const char*, auto& t) { t *= scale; });
  };
  auto eval = [&](const MeanAeParams& m) { return mean_reconstruction_loss(m, xs); };
  auto val_eval = [&](const MeanAeParams& m) {
    if (!validation || validation->rows() == 0) return std::numeric_limits<double>::quiet_NaN();
    return mean_reconstruction_loss(m, *validation);
  };

  MeanAeTrainResult result;
  result.report = sgd_loop(xs.rows(), cfg, init, batch_grad, eval, val_eval, progress);
  result.params = std::move(init);
  return result;
}

std::vector<GridPoint> reference_grid() {
  std::vector<GridPoint> grid;
  for (const Index units : {100, 300, 500}) {
    for (const double lr : {0.001, 0.0001}) {
      for (const double decay : {0.001, 0.0001}) {
        for (const double level : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}) {
          grid.push_back({units, units, lr, decay, level});
        }
      }
    }
  }
  return grid;
}

GridResult grid_search_gae(const RowMatrix& xs, const RowMatrix& ys, const RowMatrix& val_xs,
                           const RowMatrix& val_ys, const TrainConfig& base, Activation act,
                           const std::vector<GridPoint>& grid) {
  if (grid.empty()) throw UsageError("grid_search_gae: empty grid");
  if (val_xs.rows() == 0) throw UsageError("grid_search_gae: empty validation set");
  std::optional<GridResult> best;
  for (const GridPoint& point : grid) {
    TrainConfig cfg = base;
    cfg.learning_rate = point.learning_rate;
    cfg.weight_decay = point.weight_decay;
    cfg.corruption_level = point.corruption_level;
    if (cfg.corruption == Corruption::none && point.corruption_level > 0) {
      cfg.corruption = Corruption::masking;
    }
    GaeParams init = init_gae(xs.cols(), ys.cols(), point.factors, point.mapping, act, base.seed,
                              base.tie_factors);
    GaeTrainResult run = train_gae(xs, ys, cfg, std::move(init), PairSet{&val_xs, &val_ys});
    const double val = run.report.val_loss.empty()
                           ? mean_reconstruction_loss(run.params, val_xs, val_ys, cfg.mode)
                           : run.report.val_loss.back();
    if (!best || val < best->best_val_loss) best = GridResult{point, val, std::move(run.params)};
  }
  return std::move(*best);
}

}  // namespace gae
