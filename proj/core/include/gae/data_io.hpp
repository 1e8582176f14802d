// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gae/linalg.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gae {

enum class LabelKind { classes, multilabel };

LabelKind parse_label_kind(std::string_view name);
std::string to_string(LabelKind kind);

/// Examples as rows plus either class ids or a binary label matrix.
struct LabeledDataset {
  RowMatrix features;       ///< N x D
  LabelKind kind = LabelKind::classes;
  std::vector<int> classes;  ///< N class ids in [0, K) when kind == classes
  RowMatrix labels;          ///< N x L in {0,1} when kind == multilabel
  Index num_outputs = 0;     ///< K or L
  std::string name;

  Index size() const { return features.rows(); }
  Index dim() const { return features.cols(); }
  void validate() const;

  /// Rows `idx` in order.
  LabeledDataset subset(const std::vector<Index>& idx) const;
  /// Features of the examples whose class is `k`.
  RowMatrix class_features(int k) const;
};

struct DatasetSchema {
  std::optional<Index> dim;
  std::optional<LabelKind> kind;
  /// K for class labels, L for multilabel.
  std::optional<Index> outputs;
};

/// Canonical text format: optional leading `#dims D L kind` header, then one
/// example per line of whitespace-separated decimals with the label column(s)
/// last (1 class id, or L binary values). The header may only be omitted when
/// the schema names D and the kind. Values the header and schema both give
/// must agree.
LabeledDataset load_dataset(const std::filesystem::path& path, const DatasetSchema& schema = {});
LabeledDataset parse_dataset(std::string_view text, const DatasetSchema& schema = {});
void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path);
std::string format_dataset(const LabeledDataset& ds);

struct Standardization {
  LabeledDataset data;
  Vector mean;
  Vector stddev;                 ///< 1 for flagged dims
  std::vector<Index> constant_dims;  ///< dims whose std was below 1e-12
};

/// Per-dimension zero mean and unit (population) std. Throws UsageError if N < 2.
Standardization standardize(const LabeledDataset& ds);
/// Applies a fitted transform to other data.
RowMatrix apply_standardization(const RowMatrix& features, const Vector& mean, const Vector& stddev);

struct Fold {
  std::vector<Index> train, val, test;
};

/// Each fold is an independent seeded shuffle cut into train/val/test by `ratios`.
std::vector<Fold> split_folds(Index n, int folds = 10, std::array<double, 3> ratios = {0.8, 0.1, 0.1},
                              std::uint64_t seed = 0);

struct CovarianceClassesConfig {
  Index per_class = 1000;
  Index dim = 16;
  int classes = 2;
  /// Rank of the random factor behind each class's correlation structure.
  Index rank = 2;
  std::uint64_t seed = 0;
};

struct CovarianceClasses {
  LabeledDataset data;
  std::vector<Matrix> covariances;  ///< generator covariance per class (unit diagonal)
};

/// Zero-mean Gaussian classes that differ only in their correlation structure.
CovarianceClasses synth_covariance_classes(const CovarianceClassesConfig& cfg);

struct CorrelatedLabelsConfig {
  Index n = 5000;
  Index dim = 16;
  Index labels = 8;
  /// Probability that a label copies its group's latent factor; 0 makes labels
  /// independent, 1 makes labels within a group identical.
  double strength = 0.9;
  /// Labels per latent factor.
  Index group = 2;
  double feature_noise = 1.0;
  std::uint64_t seed = 0;
};

/// Latent binary factors shared by label groups; features are noisy linear
/// views of the labels.
LabeledDataset synth_correlated_labels(const CorrelatedLabelsConfig& cfg);

/// `key=value` lines (blank lines and `#` comments skipped). Throws ParseError.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text);

}  // namespace gae
