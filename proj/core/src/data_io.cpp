// SPDX-License-Identifier: Apache-2.0
#include "gae/data_io.hpp"

#include "gae/errors.hpp"
#include "gae/random.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

namespace gae {

LabelKind parse_label_kind(std::string_view name) {
  if (name == "class" || name == "classes") return LabelKind::classes;
  if (name == "multilabel") return LabelKind::multilabel;
  throw UsageError("unknown label kind '" + std::string(name) + "'");
}

std::string to_string(LabelKind kind) {
  return kind == LabelKind::classes ? "class" : "multilabel";
}

void LabeledDataset::validate() const {
  require_finite(features, "features");
  if (kind == LabelKind::classes) {
    require_dim(static_cast<Index>(classes.size()), size(), "class labels");
    for (const int c : classes) {
      if (c < 0 || c >= num_outputs) throw UsageError("class id " + std::to_string(c) + " out of range");
    }
  } else {
    require_dim(labels.rows(), size(), "label rows");
    require_dim(labels.cols(), num_outputs, "label columns");
    for (Index i = 0; i < labels.size(); ++i) {
      const double v = labels.data()[i];
      if (v != 0.0 && v != 1.0) throw UsageError("multilabel entries must be 0 or 1");
    }
  }
}

LabeledDataset LabeledDataset::subset(const std::vector<Index>& idx) const {
  LabeledDataset out;
  out.kind = kind;
  out.num_outputs = num_outputs;
  out.name = name;
  out.features.resize(static_cast<Index>(idx.size()), dim());
  if (kind == LabelKind::multilabel) out.labels.resize(static_cast<Index>(idx.size()), labels.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto r = static_cast<Index>(i);
    out.features.row(r) = features.row(idx[i]);
    if (kind == LabelKind::classes) {
      out.classes.push_back(classes[static_cast<std::size_t>(idx[i])]);
    } else {
      out.labels.row(r) = labels.row(idx[i]);
    }
  }
  return out;
}

RowMatrix LabeledDataset::class_features(int k) const {
  std::vector<Index> idx;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == k) idx.push_back(static_cast<Index>(i));
  }
  RowMatrix out(static_cast<Index>(idx.size()), dim());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Index>(i)) = features.row(idx[i]);
  return out;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double parse_number(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "not a number: '" + std::string(tok) + "'");
  }
  if (!std::isfinite(v)) throw ParseError(line, "non-finite value '" + std::string(tok) + "'");
  return v;
}

Index parse_index(std::string_view tok, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || v < 0) {
    throw ParseError(line, "expected a non-negative integer, got '" + std::string(tok) + "'");
  }
  return static_cast<Index>(v);
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

template <class T>
void reconcile(std::optional<T>& have, const std::optional<T>& other, const char* what) {
  if (!other) return;
  if (have && *have != *other) throw ShapeError(std::string("dataset header disagrees with schema on ") + what);
  have = other;
}

}  // namespace

LabeledDataset parse_dataset(std::string_view text, const DatasetSchema& schema) {
  std::optional<Index> dim;
  std::optional<LabelKind> kind;
  std::optional<Index> outputs;

  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> row_lines;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.front() == "#dims") {
      if (header_seen || !rows.empty()) throw ParseError(line_no, "#dims header must come first, once");
      if (tokens.size() != 4) throw ParseError(line_no, "expected '#dims D L kind'");
      header_seen = true;
      dim = parse_index(tokens[1], line_no);
      outputs = parse_index(tokens[2], line_no);
      try {
        kind = parse_label_kind(tokens[3]);
      } catch (const UsageError& e) {
        throw ParseError(line_no, e.what());
      }
      continue;
    }
    if (tokens.front().front() == '#') continue;
    std::vector<double> values;
    values.reserve(tokens.size());
    for (const auto tok : tokens) values.push_back(parse_number(tok, line_no));
    rows.push_back(std::move(values));
    row_lines.push_back(line_no);
  }

  reconcile(dim, schema.dim, "D");
  reconcile(kind, schema.kind, "label kind");
  reconcile(outputs, schema.outputs, "label count");
  if (rows.empty() && (!dim || !kind)) {
    LabeledDataset empty;
    empty.features.resize(0, dim.value_or(0));
    empty.kind = kind.value_or(LabelKind::classes);
    if (empty.kind == LabelKind::multilabel) empty.labels.resize(0, outputs.value_or(0));
    empty.num_outputs = outputs.value_or(0);
    return empty;
  }
  if (!dim || !kind) throw ParseError(1, "missing '#dims D L kind' header and no schema given");
  if (*kind == LabelKind::multilabel && !outputs) throw ParseError(1, "multilabel data needs L");

  LabeledDataset ds;
  ds.kind = *kind;
  const Index label_cols = ds.kind == LabelKind::classes ? 1 : *outputs;
  const auto n = static_cast<Index>(rows.size());
  ds.features.resize(n, *dim);
  if (ds.kind == LabelKind::multilabel) ds.labels.resize(n, label_cols);
  int max_class = -1;
  for (Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    const std::size_t line = row_lines[static_cast<std::size_t>(i)];
    if (static_cast<Index>(row.size()) != *dim + label_cols) {
      throw ParseError(line, "expected " + std::to_string(*dim + label_cols) + " values, got " +
                                 std::to_string(row.size()));
    }
    for (Index j = 0; j < *dim; ++j) ds.features(i, j) = row[static_cast<std::size_t>(j)];
    if (ds.kind == LabelKind::classes) {
      const double c = row.back();
      if (c < 0 || c != std::floor(c) || (outputs && c >= static_cast<double>(*outputs))) {
        throw ParseError(line, "invalid class label " + format_double(c));
      }
      ds.classes.push_back(static_cast<int>(c));
      max_class = std::max(max_class, static_cast<int>(c));
    } else {
      for (Index l = 0; l < label_cols; ++l) {
        const double v = row[static_cast<std::size_t>(*dim + l)];
        if (v != 0.0 && v != 1.0) throw ParseError(line, "multilabel entries must be 0 or 1");
        ds.labels(i, l) = v;
      }
    }
  }
  ds.num_outputs = outputs ? *outputs : static_cast<Index>(max_class + 1);
  ds.validate();
  return ds;
}

LabeledDataset load_dataset(const std::filesystem::path& path, const DatasetSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open dataset '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  LabeledDataset ds = parse_dataset(buf.str(), schema);
  ds.name = path.stem().string();
  return ds;
}

std::string format_dataset(const LabeledDataset& ds) {
  std::string out = "#dims " + std::to_string(ds.dim()) + " " + std::to_string(ds.num_outputs) + " " +
                    to_string(ds.kind) + "\n";
  for (Index i = 0; i < ds.size(); ++i) {
    for (Index j = 0; j < ds.dim(); ++j) {
      if (j > 0) out += ' ';
      out += format_double(ds.features(i, j));
    }
    if (ds.kind == LabelKind::classes) {
      out += ' ' + std::to_string(ds.classes[static_cast<std::size_t>(i)]);
    } else {
      for (Index l = 0; l < ds.labels.cols(); ++l) out += ds.labels(i, l) != 0.0 ? " 1" : " 0";
    }
    out += '\n';
  }
  return out;
}

void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write dataset '" + path.string() + "'");
  out << format_dataset(ds);
}

Standardization standardize(const LabeledDataset& ds) {
  if (ds.size() < 2) throw UsageError("standardize needs at least two examples");
  Standardization s;
  s.data = ds;
  const double n = static_cast<double>(ds.size());
  s.mean = ds.features.colwise().sum().transpose() / n;
  s.stddev = Vector::Ones(ds.dim());
  for (Index j = 0; j < ds.dim(); ++j) {
    const double var = (ds.features.col(j).array() - s.mean[j]).square().sum() / n;
    const double sd = std::sqrt(var);
    if (sd < 1e-12) {
      s.constant_dims.push_back(j);
    } else {
      s.stddev[j] = sd;
    }
  }
  s.data.features = apply_standardization(ds.features, s.mean, s.stddev);
  return s;
}

RowMatrix apply_standardization(const RowMatrix& features, const Vector& mean, const Vector& stddev) {
  require_dim(mean.size(), features.cols(), "standardization mean");
  require_dim(stddev.size(), features.cols(), "standardization std");
  RowMatrix out = features;
  for (Index j = 0; j < out.cols(); ++j) out.col(j) = (out.col(j).array() - mean[j]) / stddev[j];
  return out;
}

std::vector<Fold> split_folds(Index n, int folds, std::array<double, 3> ratios, std::uint64_t seed) {
  if (folds < 1) throw UsageError("split_folds: folds must be positive");
  double sum = 0.0;
  for (const double r : ratios) {
    if (!std::isfinite(r) || r < 0) throw UsageError("split_folds: ratios must be non-negative");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw UsageError("split_folds: ratios must sum to 1");
  if (n < folds) throw UsageError("split_folds: fewer examples than folds");

  const auto n_val = static_cast<Index>(std::llround(static_cast<double>(n) * ratios[1]));
  const auto n_test = static_cast<Index>(std::llround(static_cast<double>(n) * ratios[2]));
  if (n_val + n_test > n) throw UsageError("split_folds: ratios leave no room");
  std::vector<Fold> out;
  for (int f = 0; f < folds; ++f) {
    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    Rng rng = make_rng(seed, 0xF01D0000ULL + static_cast<std::uint64_t>(f));
    std::shuffle(perm.begin(), perm.end(), rng);
    Fold fold;
    const auto n_train = static_cast<std::size_t>(n - n_val - n_test);
    fold.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    fold.val.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train),
                    perm.begin() + static_cast<std::ptrdiff_t>(n_train + static_cast<std::size_t>(n_val)));
    fold.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train + static_cast<std::size_t>(n_val)),
                     perm.end());
    out.push_back(std::move(fold));
  }
  return out;
}

CovarianceClasses synth_covariance_classes(const CovarianceClassesConfig& cfg) {
  if (cfg.dim < 2) throw UsageError("synth_covariance_classes: D must be >= 2");
  if (cfg.classes < 1 || cfg.per_class < 0 || cfg.rank < 1) {
    throw UsageError("synth_covariance_classes: bad configuration");
  }
  CovarianceClasses out;
  LabeledDataset& ds = out.data;
  ds.kind = LabelKind::classes;
  ds.num_outputs = cfg.classes;
  ds.name = "synth_covariance_classes";
  ds.features.resize(cfg.per_class * cfg.classes, cfg.dim);
  for (int k = 0; k < cfg.classes; ++k) {
    Rng rng = make_rng(cfg.seed, 0xC0000ULL + static_cast<std::uint64_t>(k));
    Matrix loadings(cfg.dim, cfg.rank);
    for (Index j = 0; j < cfg.rank; ++j) loadings.col(j) = normal_vector(cfg.dim, 1.0, rng);
    Matrix cov = loadings * loadings.transpose() + Matrix::Identity(cfg.dim, cfg.dim);
    const Vector inv_sd = cov.diagonal().cwiseSqrt().cwiseInverse();
    cov = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
    cov.diagonal().setOnes();
    const Matrix chol = cov.llt().matrixL();
    for (Index i = 0; i < cfg.per_class; ++i) {
      const Index row = k * cfg.per_class + i;
      ds.features.row(row) = (chol * normal_vector(cfg.dim, 1.0, rng)).transpose();
      ds.classes.push_back(k);
    }
    out.covariances.push_back(std::move(cov));
  }
  return out;
}

LabeledDataset synth_correlated_labels(const CorrelatedLabelsConfig& cfg) {
  if (cfg.labels < 2) throw UsageError("synth_correlated_labels: L must be >= 2");
  if (cfg.dim < 1 || cfg.n < 0 || cfg.group < 1) throw UsageError("synth_correlated_labels: bad configuration");
  if (!(cfg.strength >= 0 && cfg.strength <= 1)) throw UsageError("strength must be in [0,1]");
  if (!(cfg.feature_noise >= 0)) throw UsageError("feature noise must be >= 0");

  Rng rng = make_rng(cfg.seed, 0x1ABE1ULL);
  const Index groups = (cfg.labels + cfg.group - 1) / cfg.group;
  // Feature loadings: each feature mixes the labels with a fixed random view.
  Matrix view(cfg.dim, cfg.labels);
  for (Index l = 0; l < cfg.labels; ++l) view.col(l) = normal_vector(cfg.dim, 1.0, rng);
  view /= std::sqrt(static_cast<double>(cfg.labels));

  LabeledDataset ds;
  ds.kind = LabelKind::multilabel;
  ds.num_outputs = cfg.labels;
  ds.name = "synth_correlated_labels";
  ds.features.resize(cfg.n, cfg.dim);
  ds.labels.resize(cfg.n, cfg.labels);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution copy(cfg.strength);
  std::normal_distribution<double> noise(0.0, 1.0);
  Vector z(groups);
  Vector signed_labels(cfg.labels);
  for (Index i = 0; i < cfg.n; ++i) {
    for (Index g = 0; g < groups; ++g) z[g] = coin(rng) ? 1.0 : 0.0;
    for (Index l = 0; l < cfg.labels; ++l) {
      const double v = copy(rng) ? z[l / cfg.group] : (coin(rng) ? 1.0 : 0.0);
      ds.labels(i, l) = v;
      signed_labels[l] = 2.0 * v - 1.0;
    }
    Vector x = view * signed_labels;
    for (Index j = 0; j < cfg.dim; ++j) x[j] += cfg.feature_noise * noise(rng);
    ds.features.row(i) = x.transpose();
  }
  return ds;
}

std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line =
        trim(text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(line_no, "empty key");
    out.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return out;
}

}  // namespace gae
