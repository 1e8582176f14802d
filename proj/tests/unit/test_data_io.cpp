// SPDX-License-Identifier: Apache-2.0
#include "gae/data_io.hpp"
#include "gae/errors.hpp"
#include "gae/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

using namespace gae;

namespace {

const DatasetSchema kTwoDimClasses{2, LabelKind::classes, std::nullopt};

Matrix sample_covariance(const RowMatrix& xs) {
  const RowMatrix centered = xs.rowwise() - xs.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(xs.rows());
}

}  // namespace

TEST_CASE("parse_dataset: headerless rows with a schema") {
  const LabeledDataset ds = parse_dataset("0 0 1\n1 1 0\n", kTwoDimClasses);
  CHECK(ds.size() == 2);
  CHECK(ds.dim() == 2);
  CHECK(ds.classes == std::vector<int>{1, 0});
  CHECK(ds.num_outputs == 2);
  CHECK(ds.features(1, 0) == 1.0);
}

TEST_CASE("parse_dataset: header, comments, multilabel") {
  const LabeledDataset ds = parse_dataset(
      "#dims 3 2 multilabel\n# a comment\n0.5 -1 2e-3 1 0\n\n   1 2 3 0 1  \n");
  CHECK(ds.kind == LabelKind::multilabel);
  CHECK(ds.size() == 2);
  CHECK(ds.labels(0, 0) == 1.0);
  CHECK(ds.labels(1, 1) == 1.0);
  CHECK(ds.features(0, 2) == 2e-3);
}

TEST_CASE("parse_dataset: empty input is a valid empty dataset") {
  CHECK(parse_dataset("").size() == 0);
  CHECK(parse_dataset("\n\n", kTwoDimClasses).size() == 0);
  CHECK(parse_dataset("#dims 4 3 class\n").dim() == 4);
}

TEST_CASE("parse_dataset: errors carry the line number") {
  auto line_of = [](std::string_view text, const DatasetSchema& schema) -> std::size_t {
    try {
      parse_dataset(text, schema);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("0 0 1\nnan 1 0\n", kTwoDimClasses) == 2);
  CHECK(line_of("0 0 1\n1 1 0\n0 inf 1\n", kTwoDimClasses) == 3);
  CHECK(line_of("0 0 1\n1 x 0\n", kTwoDimClasses) == 2);
  CHECK(line_of("0 0 1\n1 0\n", kTwoDimClasses) == 2);
  CHECK(line_of("0 0 1.5\n", kTwoDimClasses) == 1);
  CHECK(line_of("#dims 1 2 class\n0 5\n", {}) == 2);
  CHECK(line_of("#dims 1 2 multilabel\n0 1 2\n", {}) == 2);
  CHECK(line_of("#dims 1 2 weird\n", {}) == 1);
  CHECK(line_of("0 0 1\n", {}) == 1);
  CHECK_THROWS_AS(parse_dataset("#dims 3 2 class\n", kTwoDimClasses), ShapeError);
}

TEST_CASE("format/parse and save/load round-trip exactly") {
  Rng rng = make_rng(1);
  LabeledDataset ds;
  ds.kind = LabelKind::multilabel;
  ds.num_outputs = 3;
  ds.features = RowMatrix(5, 4);
  for (Index i = 0; i < ds.features.size(); ++i) ds.features.data()[i] = normal_vector(1, 1e3, rng)[0];
  ds.features(0, 0) = 1.0 / 3.0;
  ds.labels = RowMatrix::Zero(5, 3);
  ds.labels(2, 1) = 1.0;
  const LabeledDataset back = parse_dataset(format_dataset(ds));
  CHECK(back.features == ds.features);
  CHECK(back.labels == ds.labels);

  const auto path = std::filesystem::temp_directory_path() / "gae_test_dataset.txt";
  save_dataset(ds, path);
  CHECK(load_dataset(path).features == ds.features);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_dataset(path), InputError);
}

TEST_CASE("standardize: moments, idempotence, constant dims") {
  Rng rng = make_rng(2);
  LabeledDataset ds;
  ds.features = RowMatrix(10000, 4);
  for (Index i = 0; i < 10000; ++i) {
    ds.features.row(i) = (normal_vector(4, 3.0, rng).array() + 7.0).matrix().transpose();
    ds.features(i, 2) = 5.0;
  }
  ds.classes.assign(10000, 0);
  ds.num_outputs = 1;
  const Standardization s = standardize(ds);
  CHECK(s.constant_dims == std::vector<Index>{2});
  const RowMatrix& z = s.data.features;
  for (Index j = 0; j < 4; ++j) {
    const double mean = z.col(j).mean();
    const double sd = std::sqrt((z.col(j).array() - mean).square().mean());
    CHECK(std::abs(mean) <= 1e-10);
    if (j == 2) {
      CHECK(sd == 0.0);
      CHECK(s.stddev[2] == 1.0);
    } else {
      CHECK(std::abs(sd - 1.0) <= 1e-10);
    }
  }
  const Standardization again = standardize(s.data);
  CHECK((again.data.features - z).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(apply_standardization(ds.features, s.mean, s.stddev) == z);

  LabeledDataset one = ds.subset({0});
  CHECK_THROWS_AS(standardize(one), UsageError);
}

TEST_CASE("split_folds: sizes, partition, determinism") {
  const auto folds = split_folds(100, 10, {0.8, 0.1, 0.1}, 5);
  REQUIRE(folds.size() == 10);
  for (const Fold& f : folds) {
    CHECK(f.train.size() == 80);
    CHECK(f.val.size() == 10);
    CHECK(f.test.size() == 10);
    std::set<Index> all(f.train.begin(), f.train.end());
    all.insert(f.val.begin(), f.val.end());
    all.insert(f.test.begin(), f.test.end());
    CHECK(all.size() == 100);
    CHECK(*all.begin() == 0);
    CHECK(*all.rbegin() == 99);
  }
  CHECK(folds[0].test != folds[1].test);
  const auto again = split_folds(100, 10, {0.8, 0.1, 0.1}, 5);
  for (std::size_t i = 0; i < folds.size(); ++i) CHECK(again[i].train == folds[i].train);

  const auto odd = split_folds(37, 3, {0.8, 0.1, 0.1}, 1);
  for (const Fold& f : odd) {
    CHECK(std::abs(static_cast<double>(f.val.size()) - 3.7) <= 1.0);
    CHECK(f.train.size() + f.val.size() + f.test.size() == 37);
  }
  CHECK_THROWS_AS(split_folds(100, 10, {0.8, 0.3, 0.1}, 0), UsageError);
  CHECK_THROWS_AS(split_folds(100, 10, {0.8, -0.1, 0.3}, 0), UsageError);
  CHECK_THROWS_AS(split_folds(5, 10, {0.8, 0.1, 0.1}, 0), UsageError);
}

TEST_CASE("synth_covariance_classes: moments match the generator") {
  CovarianceClassesConfig cfg;
  cfg.per_class = 10000;
  cfg.dim = 6;
  cfg.classes = 2;
  cfg.seed = 3;
  const CovarianceClasses gen = synth_covariance_classes(cfg);
  REQUIRE(gen.covariances.size() == 2);
  CHECK(gen.data.size() == 20000);
  for (int k = 0; k < 2; ++k) {
    const Matrix& c = gen.covariances[static_cast<std::size_t>(k)];
    CHECK((c.diagonal().array() - 1.0).abs().maxCoeff() <= 1e-12);
    const RowMatrix xs = gen.data.class_features(k);
    CHECK(xs.rows() == 10000);
    CHECK(xs.colwise().mean().cwiseAbs().maxCoeff() <= 0.05);
    CHECK((sample_covariance(xs) - c).cwiseAbs().maxCoeff() <= 0.05);
  }
  CHECK((gen.covariances[0] - gen.covariances[1]).cwiseAbs().maxCoeff() > 0.1);

  cfg.classes = 1;
  cfg.per_class = 50;
  const CovarianceClasses single = synth_covariance_classes(cfg);
  CHECK(std::all_of(single.data.classes.begin(), single.data.classes.end(),
                    [](int c) { return c == 0; }));
  cfg.seed = 3;
  CHECK(synth_covariance_classes(cfg).data.features == single.data.features);
}

TEST_CASE("synth_correlated_labels: independence and pairing") {
  CorrelatedLabelsConfig cfg;
  cfg.n = 10000;
  cfg.dim = 7;
  cfg.labels = 6;
  cfg.seed = 4;
  cfg.strength = 0.0;
  const LabeledDataset indep = synth_correlated_labels(cfg);
  CHECK(indep.features.cols() == 7);
  CHECK(indep.labels.cols() == 6);
  const Matrix c0 = sample_covariance(indep.labels);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 6; ++j)
      if (i != j) CHECK(std::abs(c0(i, j)) <= 0.02);

  cfg.strength = 1.0;
  const LabeledDataset paired = synth_correlated_labels(cfg);
  const Matrix c1 = sample_covariance(paired.labels);
  for (Index i = 0; i < 6; i += 2) {
    const double corr = c1(i, i + 1) / std::sqrt(c1(i, i) * c1(i + 1, i + 1));
    CHECK(corr >= 0.9);
  }
  CHECK(synth_correlated_labels(cfg).features == paired.features);
  cfg.labels = 1;
  CHECK_THROWS_AS(synth_correlated_labels(cfg), UsageError);
}

TEST_CASE("parse_key_values") {
  const auto kv = parse_key_values("# comment\n lr = 0.1\n\nepochs=5\n");
  REQUIRE(kv.size() == 2);
  CHECK(kv[0] == std::pair<std::string, std::string>{"lr", "0.1"});
  CHECK(kv[1].second == "5");
  CHECK_THROWS_AS(parse_key_values("lr 0.1\n"), ParseError);
  CHECK_THROWS_AS(parse_key_values("=3\n"), ParseError);
}
