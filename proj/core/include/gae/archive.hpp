// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gae/classify.hpp"
#include "gae/gae_core.hpp"
#include "gae/structured.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace gae {

/// A named row-major float64 tensor of rank <= 2.
struct Tensor {
  std::string name;
  Index rows = 0;
  Index cols = 0;
  std::vector<double> data;

  bool operator==(const Tensor&) const = default;
};

/// Plain-text manifest plus a little-endian float64 payload.
///
/// Layout:
///   gae-archive <version>
///   kind <kind>
///   meta <key> <value>             (zero or more)
///   tensor <name> <rows> <cols> <byte offset>
///   payload <bytes> fnv1a64 <16 hex digits>
///   end
///   <payload bytes>
struct ModelArchive {
  static constexpr int kVersion = 1;

  std::string kind;
  std::map<std::string, std::string> meta;
  std::vector<Tensor> tensors;

  const Tensor& tensor(std::string_view name) const;
  bool operator==(const ModelArchive&) const = default;
};

/// Kinds this build can decode.
const std::vector<std::string>& known_archive_kinds();

std::uint64_t fnv1a64(const unsigned char* data, std::size_t size);

std::string serialize_archive(const ModelArchive& archive);
/// Throws ArchiveError (version, truncation, checksum) or CapabilityError (unknown kind).
ModelArchive deserialize_archive(std::string_view bytes);
void save_archive(const ModelArchive& archive, const std::filesystem::path& path);
ModelArchive load_archive(const std::filesystem::path& path);

// Model <-> archive conversions. The `from_*` functions throw ArchiveError
// when the archive kind does not match.

ModelArchive to_archive(const GaeParams& p, bool covariance = false);
ModelArchive to_archive(const MeanAeParams& m);
/// Mean + covariance pair ("mc").
ModelArchive to_archive(const MeanAeParams& m, const GaeParams& c);
ModelArchive to_archive(const ClassifierEnsemble& ens);
ModelArchive to_archive(const MlpParams& m);
/// MLP plus post-classification GAE ("structured").
ModelArchive to_archive(const MlpParams& m, const GaeParams& g, LabelVariant variant);

GaeParams gae_from_archive(const ModelArchive& a);
MeanAeParams mean_ae_from_archive(const ModelArchive& a);
std::pair<MeanAeParams, GaeParams> mc_from_archive(const ModelArchive& a);
ClassifierEnsemble ensemble_from_archive(const ModelArchive& a);
MlpParams mlp_from_archive(const ModelArchive& a);
struct StructuredModel {
  MlpParams mlp;
  GaeParams gae;
  LabelVariant variant = LabelVariant::gae_y2;
};
StructuredModel structured_from_archive(const ModelArchive& a);

}  // namespace gae
