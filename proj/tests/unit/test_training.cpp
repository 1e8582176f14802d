// SPDX-License-Identifier: Apache-2.0
#include "gae/errors.hpp"
#include "gae/training.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace gae;

namespace {

RowMatrix random_rows(Index n, Index d, Rng& rng, double scale = 1.0) {
  RowMatrix m(n, d);
  for (Index i = 0; i < n; ++i) m.row(i) = gae::testing::random_vector(d, rng, scale).transpose();
  return m;
}

// Pairs (x, y) where y is the teacher's reconstruction from a random start.
void teacher_pairs(Index n, Index d, std::uint64_t seed, RowMatrix& xs, RowMatrix& ys) {
  Rng rng = make_rng(seed, 31);
  const GaeParams teacher = gae::testing::random_gae(d, d, 6, 4, Activation::sigmoid, rng, 0.4);
  xs = random_rows(n, d, rng);
  ys.resize(n, d);
  for (Index i = 0; i < n; ++i) {
    const Vector x = xs.row(i).transpose();
    const Vector y0 = gae::testing::random_vector(d, rng);
    ys.row(i) = decode_y(teacher, x, encode(teacher, x, y0)).transpose();
  }
}

double weight_norm(const GaeParams& p) {
  return p.wx.squaredNorm() + p.wy.squaredNorm() + p.wh.squaredNorm();
}

}  // namespace

TEST_CASE("corrupt: trivial levels and determinism") {
  Rng rng = make_rng(1);
  const RowMatrix batch = random_rows(20, 7, rng);
  TrainConfig cfg;
  cfg.corruption = Corruption::masking;
  cfg.corruption_level = 0.0;
  CHECK(corrupt(batch, cfg, 3) == batch);
  cfg.corruption_level = 1.0;
  CHECK(corrupt(batch, cfg, 3).isZero(0.0));
  cfg.corruption_level = 0.4;
  CHECK(corrupt(batch, cfg, 3) == corrupt(batch, cfg, 3));
  CHECK(corrupt(batch, cfg, 3) != corrupt(batch, cfg, 4));
  cfg.corruption = Corruption::none;
  CHECK(corrupt(batch, cfg, 3) == batch);
  cfg.corruption = Corruption::gaussian;
  cfg.corruption_level = 0.0;
  CHECK(corrupt(batch, cfg, 3) == batch);
}

TEST_CASE("corrupt: masking rate concentrates") {
  TrainConfig cfg;
  cfg.corruption = Corruption::masking;
  cfg.corruption_level = 0.3;
  const RowMatrix ones = RowMatrix::Ones(1000, 1000);
  const RowMatrix out = corrupt(ones, cfg, 0);
  const double zeroed = 1.0 - out.sum() / 1e6;
  CHECK(std::abs(zeroed - 0.3) <= 0.003);
}

TEST_CASE("corrupt: gaussian noise has the configured spread") {
  TrainConfig cfg;
  cfg.corruption = Corruption::gaussian;
  cfg.corruption_level = 0.5;
  const RowMatrix out = corrupt(RowMatrix::Zero(500, 200), cfg, 9);
  const double var = out.squaredNorm() / static_cast<double>(out.size());
  CHECK(std::abs(std::sqrt(var) - 0.5) <= 0.01);
}

TEST_CASE("config validation") {
  TrainConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.learning_rate = -1;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = TrainConfig{};
  cfg.momentum = 1.0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = TrainConfig{};
  cfg.corruption = Corruption::masking;
  cfg.corruption_level = 1.5;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = TrainConfig{};
  cfg.batch_size = 0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = TrainConfig{};
  cfg.weight_decay = std::nan("");
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  CHECK_THROWS_AS(parse_corruption("salt"), UsageError);
}

TEST_CASE("init_gae: fan-in bounds, zero biases, seeded") {
  const GaeParams p = init_gae(9, 4, 5, 16, Activation::sigmoid, 3);
  CHECK(p.wx.cwiseAbs().maxCoeff() <= 1.0 / 3.0);
  CHECK(p.wy.cwiseAbs().maxCoeff() <= 0.5);
  CHECK(p.wh.cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(5.0));
  CHECK(p.b.isZero(0.0));
  CHECK(p.ax.isZero(0.0));
  CHECK(p.ay.isZero(0.0));
  CHECK(init_gae(9, 4, 5, 16, Activation::sigmoid, 3) == p);
  CHECK_FALSE(init_gae(9, 4, 5, 16, Activation::sigmoid, 4) == p);
  const GaeParams tied = init_gae(4, 4, 5, 3, Activation::sigmoid, 3, true);
  CHECK(tied.wx == tied.wy);
}

TEST_CASE("lr = 0 returns the initial parameters") {
  RowMatrix xs, ys;
  teacher_pairs(64, 5, 0, xs, ys);
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.epochs = 3;
  cfg.corruption = Corruption::masking;
  cfg.corruption_level = 0.2;
  const GaeParams init = init_gae(5, 5, 4, 3, Activation::sigmoid, 1);
  CHECK(train_gae(xs, ys, cfg, init).params == init);

  const MeanAeParams m0 = init_mean_ae(5, 3, 2);
  CHECK(train_mean_ae(xs, cfg, m0).params == m0);
}

TEST_CASE("single plain step equals theta - lr * gradient") {
  RowMatrix xs, ys;
  teacher_pairs(1, 4, 2, xs, ys);
  for (const LossMode mode : {LossMode::conditional, LossMode::symmetric}) {
    TrainConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.momentum = 0.0;
    cfg.epochs = 1;
    cfg.batch_size = 8;
    cfg.mode = mode;
    const GaeParams init = init_gae(4, 4, 3, 2, Activation::tanh, 5);
    const GaeParams grad = loss_gradients(init, xs, ys, mode);
    const GaeParams expected = gae::testing::unflatten(
        init, gae::testing::flatten(init) - cfg.learning_rate * gae::testing::flatten(grad));
    CHECK(train_gae(xs, ys, cfg, init).params == expected);
  }

  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.momentum = 0.0;
  cfg.epochs = 1;
  const MeanAeParams m0 = init_mean_ae(4, 3, 5);
  const MeanAeParams g = mean_loss_gradients(m0, xs);
  const MeanAeParams got = train_mean_ae(xs, cfg, m0).params;
  CHECK(got.w == m0.w - 0.05 * g.w);
  CHECK(got.c == m0.c - 0.05 * g.c);
  CHECK(got.a == m0.a - 0.05 * g.a);
}

TEST_CASE("training reduces the loss on teacher data (10 seeds)") {
  int improved = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RowMatrix xs, ys;
    teacher_pairs(256, 8, seed, xs, ys);
    TrainConfig cfg;
    cfg.learning_rate = 0.01;
    cfg.epochs = 50;
    cfg.seed = seed;
    const auto result = train_gae(xs, ys, cfg, init_gae(8, 8, 8, 6, Activation::sigmoid, seed));
    CHECK(result.report.train_loss.size() == 50);
    if (result.report.train_loss.back() < result.report.initial_train_loss) ++improved;
  }
  CHECK(improved == 10);
}

TEST_CASE("large weight decay shrinks the weights") {
  RowMatrix xs, ys;
  teacher_pairs(64, 6, 7, xs, ys);
  TrainConfig cfg;
  cfg.learning_rate = 1e-4;
  cfg.weight_decay = 1e3;
  cfg.epochs = 5;
  const GaeParams init = init_gae(6, 6, 5, 4, Activation::sigmoid, 7);
  CHECK(weight_norm(train_gae(xs, ys, cfg, init).params) < weight_norm(init));
}

TEST_CASE("mean auto-encoder learns a dominant direction") {
  Rng rng = make_rng(40);
  const Vector dir = gae::testing::random_vector(6, rng).normalized();
  RowMatrix xs(400, 6);
  std::normal_distribution<double> big(0.0, 2.0);
  for (Index i = 0; i < 400; ++i)
    xs.row(i) = (big(rng) * dir + gae::testing::random_vector(6, rng, 0.1)).transpose();
  TrainConfig cfg;
  cfg.learning_rate = 0.001;
  cfg.epochs = 30;
  const auto r = train_mean_ae(xs, cfg, init_mean_ae(6, 4, 1));
  CHECK(r.report.train_loss.back() < 0.5 * r.report.initial_train_loss);
}

TEST_CASE("training is deterministic under a fixed seed") {
  RowMatrix xs, ys;
  teacher_pairs(100, 5, 3, xs, ys);
  TrainConfig cfg;
  cfg.epochs = 4;
  cfg.batch_size = 16;
  cfg.corruption = Corruption::gaussian;
  cfg.corruption_level = 0.2;
  cfg.seed = 77;
  cfg.mode = LossMode::symmetric;
  const GaeParams init = init_gae(5, 5, 4, 3, Activation::sigmoid, 9);
  const auto a = train_gae(xs, ys, cfg, init);
  const auto b = train_gae(xs, ys, cfg, init);
  CHECK(a.params == b.params);
  CHECK(a.report.train_loss == b.report.train_loss);
  cfg.seed = 78;
  CHECK_FALSE(train_gae(xs, ys, cfg, init).params == a.params);

  const auto m1 = train_mean_ae(xs, cfg, init_mean_ae(5, 3, 1));
  const auto m2 = train_mean_ae(xs, cfg, init_mean_ae(5, 3, 1));
  CHECK(m1.params == m2.params);
}

TEST_CASE("tied covariance training keeps the factor matrices equal") {
  Rng rng = make_rng(50);
  const RowMatrix xs = random_rows(80, 5, rng);
  TrainConfig cfg;
  cfg.mode = LossMode::symmetric;
  cfg.tie_factors = true;
  cfg.epochs = 3;
  cfg.corruption = Corruption::masking;
  cfg.corruption_level = 0.2;
  int epochs_seen = 0;
  const auto r = train_gae(xs, xs, cfg, init_gae(5, 5, 4, 3, Activation::sigmoid, 2, true),
                           std::nullopt, [&](const EpochStats&) { ++epochs_seen; });
  CHECK(epochs_seen == 3);
  CHECK(r.params.wx == r.params.wy);
  CHECK(r.params.ax == r.params.ay);
  CHECK_THROWS_AS(train_gae(xs, xs, cfg, init_gae(5, 5, 4, 3, Activation::sigmoid, 2, false)),
                  UsageError);
}

TEST_CASE("validation losses are reported per epoch") {
  RowMatrix xs, ys, vx, vy;
  teacher_pairs(60, 4, 1, xs, ys);
  teacher_pairs(20, 4, 2, vx, vy);
  TrainConfig cfg;
  cfg.epochs = 4;
  const auto r = train_gae(xs, ys, cfg, init_gae(4, 4, 3, 3, Activation::sigmoid, 1),
                           PairSet{&vx, &vy});
  REQUIRE(r.report.val_loss.size() == 4);
  CHECK(std::isfinite(r.report.val_loss.back()));
  const auto no_val = train_gae(xs, ys, cfg, init_gae(4, 4, 3, 3, Activation::sigmoid, 1));
  CHECK(std::isnan(no_val.report.val_loss.back()));
}

TEST_CASE("divergence is reported with the epoch index") {
  RowMatrix xs, ys;
  teacher_pairs(32, 4, 1, xs, ys);
  xs *= 50.0;
  TrainConfig cfg;
  cfg.learning_rate = 10.0;
  cfg.momentum = 0.9;
  cfg.epochs = 50;
  cfg.batch_size = 4;
  try {
    train_gae(xs, ys, cfg, init_gae(4, 4, 3, 3, Activation::linear, 1));
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.epoch() >= 1);
  }
}

TEST_CASE("grid search picks a grid point and returns its model") {
  RowMatrix xs, ys, vx, vy;
  teacher_pairs(60, 4, 1, xs, ys);
  teacher_pairs(30, 4, 2, vx, vy);
  TrainConfig base;
  base.epochs = 3;
  const std::vector<GridPoint> grid{{3, 3, 1e-2, 0.0, 0.0}, {4, 2, 1e-3, 1e-4, 0.1}};
  const GridResult r = grid_search_gae(xs, ys, vx, vy, base, Activation::sigmoid, grid);
  CHECK(std::isfinite(r.best_val_loss));
  CHECK(r.params.factors() == r.best.factors);
  CHECK(reference_grid().size() == 3 * 2 * 2 * 6);
}
