// SPDX-License-Identifier: Apache-2.0
#include "gae/classify.hpp"
#include "gae/energy.hpp"
#include "gae/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace gae;
using gae::testing::random_vector;

namespace {

ClassifierEnsemble cov_ensemble(const std::vector<GaeParams>& models) {
  ClassifierEnsemble e;
  for (const GaeParams& p : models) e.members.push_back({std::nullopt, p});
  e.biases = Vector::Zero(static_cast<Index>(models.size()));
  return e;
}

RowMatrix random_rows(Index n, Index d, Rng& rng) {
  RowMatrix m(n, d);
  for (Index i = 0; i < n; ++i) m.row(i) = random_vector(d, rng).transpose();
  return m;
}

}  // namespace

TEST_CASE("class scores: symmetry and bias offsets") {
  Rng rng = make_rng(1);
  const GaeParams c = gae::testing::random_cov_gae(4, 3, 3, rng);
  ClassifierEnsemble e = cov_ensemble({c, c, c});
  const Vector x = random_vector(4, rng);
  const Vector s = class_scores(e, x);
  CHECK(s[0] == s[1]);
  CHECK(s[1] == s[2]);
  CHECK(s[0] == energy_covariance(c, x).value);

  e = cov_ensemble({c, c});
  e.biases << 0, 10;
  const Vector t = class_scores(e, x);
  CHECK(t[1] - t[0] == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("mean-covariance scores are the sum of the part scores") {
  Rng rng = make_rng(2);
  std::vector<ClassMember> mc, mean_only, cov_only;
  for (int k = 0; k < 3; ++k) {
    const MeanAeParams m = gae::testing::random_mean_ae(5, 3, rng);
    const GaeParams c = gae::testing::random_cov_gae(5, 4, 2, rng);
    mc.push_back({m, c});
    mean_only.push_back({m, std::nullopt});
    cov_only.push_back({std::nullopt, c});
  }
  const Vector b = random_vector(3, rng);
  const ClassifierEnsemble e_mc{mc, b};
  const ClassifierEnsemble e_m{mean_only, Vector::Zero(3)};
  const ClassifierEnsemble e_c{cov_only, Vector::Zero(3)};
  for (int i = 0; i < 5; ++i) {
    const Vector x = random_vector(5, rng);
    const Vector expected = class_scores(e_m, x) + class_scores(e_c, x) + b;
    CHECK(gae::testing::rel_err(class_scores(e_mc, x), expected) <= 1e-14);
  }
}

TEST_CASE("posterior: softmax arithmetic and invariances") {
  GaeParams zero = GaeParams::zeros(2, 2, 1, 1);
  ClassifierEnsemble e = cov_ensemble({zero, zero});
  const Vector x = Vector::Zero(2);
  const Vector p = posterior(e, x);
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-15));

  e.biases << 0, std::log(3.0);
  const Vector q = posterior(e, x);
  CHECK(std::abs(q[0] - 0.25) <= 1e-15);
  CHECK(std::abs(q[1] - 0.75) <= 1e-15);

  e.biases << 1e4, 1e4 + std::log(3.0);
  CHECK(gae::testing::rel_err(posterior(e, x), q) <= 1e-12);

  e.biases << -800, 800;
  const Vector extreme = posterior(e, x);
  CHECK(extreme.allFinite());
  CHECK(extreme[1] == 1.0);
}

TEST_CASE("posterior invariance: member energy shift absorbed by its bias") {
  Rng rng = make_rng(3);
  const GaeParams a = gae::testing::random_cov_gae(4, 3, 3, rng);
  const GaeParams b = gae::testing::random_cov_gae(4, 3, 3, rng);
  ClassifierEnsemble e = cov_ensemble({a, b});
  e.biases << 0.3, -0.2;
  const Vector x = random_vector(4, rng);
  const Vector before = posterior(e, x);
  // Member energies have no free constant, so apply the shift at score level.
  ClassifierEnsemble shifted = e;
  const double c = 5.0;
  shifted.biases[1] -= c;
  const Vector s = class_scores(shifted, x);
  Vector s2 = s;
  s2[1] += c;
  const Vector expected = (s2.array() - s2.maxCoeff()).exp();
  CHECK(gae::testing::rel_err(before, expected / expected.sum()) <= 1e-12);
  CHECK(std::abs(posterior(e, x).sum() - 1.0) <= 1e-12);
}

TEST_CASE("predict: argmax of scores with low-index ties") {
  Rng rng = make_rng(4);
  const GaeParams c = gae::testing::random_cov_gae(3, 2, 2, rng);
  ClassifierEnsemble e = cov_ensemble({c, c, c});
  const Vector x = random_vector(3, rng);
  CHECK(predict(e, x) == 0);
  e.biases << 0, 1, 1;
  CHECK(predict(e, x) == 1);

  for (int trial = 0; trial < 20; ++trial) {
    ClassifierEnsemble r = cov_ensemble({gae::testing::random_cov_gae(3, 2, 2, rng),
                                         gae::testing::random_cov_gae(3, 2, 2, rng),
                                         gae::testing::random_cov_gae(3, 2, 2, rng)});
    const Vector v = random_vector(3, rng);
    Index best = 0;
    posterior(r, v).maxCoeff(&best);
    CHECK(predict(r, v) == static_cast<int>(best));
  }
}

TEST_CASE("score_error: trivial and random predictors") {
  RowMatrix scores(3, 2);
  scores << 1, 0, 0, 1, 1, 0;
  CHECK(score_error(scores, {0, 1, 0}) == 0.0);
  CHECK(score_error(scores, {1, 0, 1}) == 1.0);

  Rng rng = make_rng(5);
  const RowMatrix random = random_rows(10000, 2, rng);
  std::vector<int> labels(10000);
  std::bernoulli_distribution coin(0.5);
  for (int& l : labels) l = coin(rng) ? 1 : 0;
  CHECK(std::abs(score_error(random, labels) - 0.5) <= 0.02);
  CHECK_THROWS_AS(score_error(RowMatrix(0, 2), {}), UsageError);
}

TEST_CASE("calibrate: identical members learn the class prior") {
  Rng rng = make_rng(6);
  const GaeParams c = gae::testing::random_cov_gae(3, 2, 2, rng);
  const ClassifierEnsemble e = cov_ensemble({c, c});
  const RowMatrix xs = random_rows(200, 3, rng);
  std::vector<int> labels(200, 0);
  for (int i = 0; i < 20; ++i) labels[static_cast<std::size_t>(i * 10)] = 1;
  const ClassifierEnsemble cal = calibrate(e, xs, labels);
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(posterior(cal, random_vector(3, rng))[0] - 0.9) <= 0.02);
  }
}

TEST_CASE("calibrate: symmetric data keeps biases balanced") {
  const GaeParams c = GaeParams::zeros(2, 2, 2, 2);
  const ClassifierEnsemble e = cov_ensemble({c, c});
  Rng rng = make_rng(7);
  const RowMatrix xs = random_rows(100, 2, rng);
  std::vector<int> labels(100);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i % 2);
  const ClassifierEnsemble cal = calibrate(e, xs, labels);
  CHECK(std::abs(cal.biases[0] - cal.biases[1]) <= 1e-3);
}

TEST_CASE("calibrate: separated scores stay separated and likelihood rises") {
  // Class 0 model prefers small x, class 1 model prefers large |x| (covariance).
  GaeParams narrow = GaeParams::zeros(2, 2, 2, 2);
  GaeParams wide = narrow;
  wide.wx = Matrix::Identity(2, 2);
  wide.wy = wide.wx;
  wide.wh = Matrix::Identity(2, 2) * 0.5;
  const ClassifierEnsemble e = cov_ensemble({narrow, wide});
  Rng rng = make_rng(8);
  RowMatrix xs(200, 2);
  std::vector<int> labels(200);
  for (Index i = 0; i < 200; ++i) {
    const bool big = i % 2 == 1;
    xs.row(i) = random_vector(2, rng, big ? 3.0 : 0.3).transpose();
    labels[static_cast<std::size_t>(i)] = big ? 1 : 0;
  }
  const double err_before = evaluate_error(e, xs, labels);
  const ClassifierEnsemble cal = calibrate(e, xs, labels);
  CHECK(evaluate_error(cal, xs, labels) <= err_before);
  CHECK(mean_log_posterior(cal, xs, labels) >= mean_log_posterior(e, xs, labels));

  CalibrationOptions opts;
  opts.tune_members = true;
  opts.epochs = 50;
  const ClassifierEnsemble tuned = calibrate(e, xs, labels, opts);
  CHECK(mean_log_posterior(tuned, xs, labels) >= mean_log_posterior(e, xs, labels));
  CHECK(tuned.members[1].cov->wx == tuned.members[1].cov->wy);
  CHECK(calibrate(e, xs, labels, opts).biases == tuned.biases);
}

TEST_CASE("ensemble validation and usage errors") {
  const GaeParams c = GaeParams::zeros(2, 2, 1, 1);
  ClassifierEnsemble one = cov_ensemble({c});
  CHECK_THROWS_AS(one.validate(), UsageError);
  ClassifierEnsemble mixed = cov_ensemble({c, GaeParams::zeros(3, 3, 1, 1)});
  CHECK_THROWS_AS(mixed.validate(), ShapeError);
  ClassifierEnsemble empty_member = cov_ensemble({c, c});
  empty_member.members[1].cov.reset();
  CHECK_THROWS_AS(empty_member.validate(), UsageError);
  const ClassifierEnsemble ok = cov_ensemble({c, c});
  CHECK_THROWS_AS(calibrate(ok, RowMatrix(0, 2), {}), UsageError);
  RowMatrix xs = RowMatrix::Zero(2, 2);
  CHECK_THROWS_AS(calibrate(ok, xs, {0, 2}), UsageError);
  CHECK_THROWS_AS(class_scores(ok, Vector::Zero(3)), ShapeError);
}
