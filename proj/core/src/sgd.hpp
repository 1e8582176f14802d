// SPDX-License-Identifier: Apache-2.0
// Mini-batch SGD machinery shared by the trainers. Internal header.
#pragma once

#include "gae/errors.hpp"
#include "gae/random.hpp"
#include "gae/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace gae::detail {

constexpr std::uint64_t kShuffleStream = 0x5348;

inline std::uint64_t batch_stream(int epoch, Index batch, std::uint64_t role) {
  return role ^ (static_cast<std::uint64_t>(epoch) << 32) ^ static_cast<std::uint64_t>(batch);
}

inline RowMatrix gather_rows(const RowMatrix& m, const std::vector<Index>& idx, std::size_t begin,
                      std::size_t end) {
  RowMatrix out(static_cast<Index>(end - begin), m.cols());
  for (std::size_t i = begin; i < end; ++i) out.row(static_cast<Index>(i - begin)) = m.row(idx[i]);
  return out;
}

template <class Params>
bool all_finite(const Params& p) {
  bool ok = true;
  Params::for_each(p, [&ok](const char*, const auto& t) { ok = ok && t.allFinite(); });
  return ok;
}

// v <- momentum v - lr (grad + decay theta); theta <- theta + v
template <class Params>
void momentum_step(Params& theta, Params& velocity, Params& grad, const TrainConfig& cfg) {
  // Walk the three structs in lockstep; for_each visits tensors in a fixed order.
  std::vector<Eigen::Map<Eigen::VectorXd>> t, v, g;
  auto collect = [](std::vector<Eigen::Map<Eigen::VectorXd>>& out) {
    return [&out](const char*, auto& m) { out.emplace_back(m.data(), m.size()); };
  };
  Params::for_each(theta, collect(t));
  Params::for_each(velocity, collect(v));
  Params::for_each(grad, collect(g));
  for (std::size_t i = 0; i < t.size(); ++i) {
    v[i] = cfg.momentum * v[i] - cfg.learning_rate * (g[i] + cfg.weight_decay * t[i]);
    t[i] += v[i];
  }
}

// Generic epoch loop. `batch_grad(rows, epoch, batch_index, grad)` fills the
// mean gradient of one mini-batch; `eval(params)` returns the clean loss.
template <class Params, class BatchGrad, class Eval, class ValEval>
TrainReport sgd_loop(Index n, const TrainConfig& cfg, Params& params, BatchGrad&& batch_grad,
                     Eval&& eval, ValEval&& val_eval, const ProgressFn& progress) {
  TrainReport report;
  report.initial_train_loss = eval(params);
  Params velocity = params.zeros_like();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  Rng shuffle_rng = make_rng(cfg.seed, kShuffleStream);
  const auto batch = static_cast<std::size_t>(cfg.batch_size);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    Index batch_index = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += batch, ++batch_index) {
      const std::size_t end = std::min(order.size(), begin + batch);
      Params grad = params.zeros_like();
      batch_grad(order, begin, end, epoch, batch_index, grad);
      momentum_step(params, velocity, grad, cfg);
    }
    const double train_loss = eval(params);
    const double val_loss = val_eval(params);
    if (!std::isfinite(train_loss) || !all_finite(params)) {
      throw DivergenceError(epoch, "training loss is " + std::to_string(train_loss));
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.train_loss.push_back(train_loss);
    report.val_loss.push_back(val_loss);
    report.wall_seconds.push_back(seconds);
    if (progress) progress({epoch, train_loss, val_loss, seconds});
  }
  return report;
}

}  // namespace gae::detail
