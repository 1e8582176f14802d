// SPDX-License-Identifier: Apache-2.0
#include "gae/archive.hpp"

#include "gae/energy.hpp"
#include "gae/errors.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdio>
#include <optional>
#include <fstream>
#include <sstream>

namespace gae {

namespace {

constexpr std::string_view kMagic = "gae-archive";

template <class Derived>
Tensor make_tensor(std::string name, const Eigen::MatrixBase<Derived>& m) {
  Tensor t{std::move(name), m.rows(), m.cols(), {}};
  t.data.reserve(static_cast<std::size_t>(m.size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) t.data.push_back(m(i, j));
  return t;
}

Matrix to_matrix(const Tensor& t) {
  Matrix m(t.rows, t.cols);
  for (Index i = 0; i < t.rows; ++i)
    for (Index j = 0; j < t.cols; ++j) m(i, j) = t.data[static_cast<std::size_t>(i * t.cols + j)];
  return m;
}

Vector to_vector(const Tensor& t) {
  if (t.cols != 1) throw ArchiveError("tensor '" + t.name + "' is not a column vector");
  return to_matrix(t).col(0);
}

void require_kind(const ModelArchive& a, std::string_view kind) {
  if (a.kind != kind) {
    throw ArchiveError("expected archive kind '" + std::string(kind) + "', found '" + a.kind + "'");
  }
}

const std::string& meta_at(const ModelArchive& a, const std::string& key) {
  const auto it = a.meta.find(key);
  if (it == a.meta.end()) throw ArchiveError("archive metadata lacks '" + key + "'");
  return it->second;
}

void add_gae(ModelArchive& a, const GaeParams& p, const std::string& prefix) {
  GaeParams::for_each(p, [&](const char* name, const auto& t) {
    a.tensors.push_back(make_tensor(prefix + name, t));
  });
  a.meta[prefix + "activation"] = to_string(p.activation);
}

GaeParams read_gae(const ModelArchive& a, const std::string& prefix) {
  GaeParams p;
  p.wx = to_matrix(a.tensor(prefix + "wx"));
  p.wy = to_matrix(a.tensor(prefix + "wy"));
  p.wh = to_matrix(a.tensor(prefix + "wh"));
  p.b = to_vector(a.tensor(prefix + "b"));
  p.ax = to_vector(a.tensor(prefix + "ax"));
  p.ay = to_vector(a.tensor(prefix + "ay"));
  p.activation = parse_activation(meta_at(a, prefix + "activation"));
  p.validate();
  return p;
}

void add_mean(ModelArchive& a, const MeanAeParams& m, const std::string& prefix) {
  MeanAeParams::for_each(m, [&](const char* name, const auto& t) {
    a.tensors.push_back(make_tensor(prefix + name, t));
  });
}

MeanAeParams read_mean(const ModelArchive& a, const std::string& prefix) {
  MeanAeParams m;
  m.w = to_matrix(a.tensor(prefix + "w"));
  m.c = to_vector(a.tensor(prefix + "c"));
  m.a = to_vector(a.tensor(prefix + "a"));
  m.validate();
  return m;
}

void add_mlp(ModelArchive& a, const MlpParams& m) {
  MlpParams::for_each(m, [&](const char* name, const auto& t) {
    a.tensors.push_back(make_tensor(std::string("mlp.") + name, t));
  });
}

MlpParams read_mlp(const ModelArchive& a) {
  MlpParams m;
  m.w1 = to_matrix(a.tensor("mlp.w1"));
  m.b1 = to_vector(a.tensor("mlp.b1"));
  m.w2 = to_matrix(a.tensor("mlp.w2"));
  m.b2 = to_vector(a.tensor("mlp.b2"));
  m.validate();
  return m;
}

void append_le(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>(bits & 0xFFU));
    bits >>= 8;
  }
}

double read_le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
  return std::bit_cast<double>(bits);
}

std::vector<std::string_view> words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::uint64_t parse_u64(std::string_view s, int base = 10) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ArchiveError("malformed number '" + std::string(s) + "' in manifest");
  }
  return v;
}

}  // namespace

const Tensor& ModelArchive::tensor(std::string_view name) const {
  const auto it = std::find_if(tensors.begin(), tensors.end(),
                               [&](const Tensor& t) { return t.name == name; });
  if (it == tensors.end()) throw ArchiveError("archive lacks tensor '" + std::string(name) + "'");
  return *it;
}

const std::vector<std::string>& known_archive_kinds() {
  static const std::vector<std::string> kinds = {"gae", "cov-gae", "mean", "mc",
                                                 "ensemble", "mlp", "structured"};
  return kinds;
}

std::uint64_t fnv1a64(const unsigned char* data, std::size_t size) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string serialize_archive(const ModelArchive& archive) {
  std::string payload;
  std::ostringstream manifest;
  manifest << kMagic << ' ' << ModelArchive::kVersion << '\n';
  manifest << "kind " << archive.kind << '\n';
  for (const auto& [key, value] : archive.meta) {
    if (key.find_first_of(" \n") != std::string::npos || value.find('\n') != std::string::npos) {
      throw UsageError("archive metadata must be single-line without spaces in keys");
    }
    manifest << "meta " << key << ' ' << value << '\n';
  }
  for (const Tensor& t : archive.tensors) {
    if (static_cast<Index>(t.data.size()) != t.rows * t.cols) {
      throw UsageError("tensor '" + t.name + "' size does not match its shape");
    }
    manifest << "tensor " << t.name << ' ' << t.rows << ' ' << t.cols << ' ' << payload.size() << '\n';
    for (const double v : t.data) append_le(payload, v);
  }
  const auto checksum =
      fnv1a64(reinterpret_cast<const unsigned char*>(payload.data()), payload.size());
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(checksum));
  manifest << "payload " << payload.size() << " fnv1a64 " << hex << '\n' << "end\n";
  return manifest.str() + payload;
}

ModelArchive deserialize_archive(std::string_view bytes) {
  ModelArchive a;
  std::size_t pos = 0;
  auto next_line = [&]() -> std::string_view {
    const std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) throw ArchiveError("truncated manifest");
    const std::string_view line = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    return line;
  };

  const auto head = words(next_line());
  if (head.size() != 2 || head[0] != kMagic) throw ArchiveError("not a model archive");
  const auto version = parse_u64(head[1]);
  if (version != static_cast<std::uint64_t>(ModelArchive::kVersion)) {
    throw ArchiveError("archive version " + std::string(head[1]) + " is not supported (expected " +
                       std::to_string(ModelArchive::kVersion) + ")");
  }

  struct Entry {
    std::uint64_t offset;
  };
  std::vector<Entry> entries;
  std::optional<std::uint64_t> payload_size;
  std::uint64_t checksum = 0;
  while (true) {
    const std::string_view line = next_line();
    if (line == "end") break;
    const auto w = words(line);
    if (w.empty()) throw ArchiveError("blank manifest line");
    if (w[0] == "kind" && w.size() == 2) {
      a.kind = std::string(w[1]);
      const auto& kinds = known_archive_kinds();
      if (std::find(kinds.begin(), kinds.end(), a.kind) == kinds.end()) {
        throw CapabilityError("unknown model kind '" + a.kind + "'");
      }
    } else if (w[0] == "meta" && w.size() >= 2) {
      const std::size_t value_start = std::string_view("meta ").size() + w[1].size() + 1;
      std::string value = value_start < line.size() ? std::string(line.substr(value_start)) : "";
      a.meta[std::string(w[1])] = std::move(value);
    } else if (w[0] == "tensor" && w.size() == 5) {
      Tensor t;
      t.name = std::string(w[1]);
      t.rows = static_cast<Index>(parse_u64(w[2]));
      t.cols = static_cast<Index>(parse_u64(w[3]));
      entries.push_back({parse_u64(w[4])});
      a.tensors.push_back(std::move(t));
    } else if (w[0] == "payload" && w.size() == 4 && w[2] == "fnv1a64") {
      payload_size = parse_u64(w[1]);
      checksum = parse_u64(w[3], 16);
    } else {
      throw ArchiveError("unrecognized manifest line '" + std::string(line) + "'");
    }
  }
  if (a.kind.empty()) throw ArchiveError("manifest lacks a kind");
  if (!payload_size) throw ArchiveError("manifest lacks a payload line");

  const std::string_view payload = bytes.substr(pos);
  if (payload.size() < *payload_size) throw ArchiveError("truncated payload");
  if (payload.size() > *payload_size) throw ArchiveError("trailing bytes after payload");
  const auto* data = reinterpret_cast<const unsigned char*>(payload.data());
  if (fnv1a64(data, payload.size()) != checksum) throw ArchiveError("payload checksum mismatch");

  std::uint64_t expected_offset = 0;
  for (std::size_t i = 0; i < a.tensors.size(); ++i) {
    Tensor& t = a.tensors[i];
    if (entries[i].offset != expected_offset) throw ArchiveError("tensor offsets are not contiguous");
    const auto count = static_cast<std::uint64_t>(t.rows) * static_cast<std::uint64_t>(t.cols);
    if (expected_offset + 8 * count > payload.size()) throw ArchiveError("tensor exceeds payload");
    t.data.resize(count);
    for (std::uint64_t k = 0; k < count; ++k) t.data[k] = read_le(data + expected_offset + 8 * k);
    expected_offset += 8 * count;
  }
  if (expected_offset != payload.size()) throw ArchiveError("payload length does not match tensors");
  return a;
}

void save_archive(const ModelArchive& archive, const std::filesystem::path& path) {
  const std::string bytes = serialize_archive(archive);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write archive '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

ModelArchive load_archive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open archive '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_archive(buf.str());
}

ModelArchive to_archive(const GaeParams& p, bool covariance) {
  if (covariance) require_covariance_model(p);
  ModelArchive a;
  a.kind = covariance ? "cov-gae" : "gae";
  add_gae(a, p, "");
  return a;
}

ModelArchive to_archive(const MeanAeParams& m) {
  ModelArchive a;
  a.kind = "mean";
  add_mean(a, m, "");
  return a;
}

ModelArchive to_archive(const MeanAeParams& m, const GaeParams& c) {
  require_covariance_model(c);
  ModelArchive a;
  a.kind = "mc";
  add_mean(a, m, "mean.");
  add_gae(a, c, "cov.");
  return a;
}

ModelArchive to_archive(const ClassifierEnsemble& ens) {
  ens.validate();
  ModelArchive a;
  a.kind = "ensemble";
  a.meta["classes"] = std::to_string(ens.num_classes());
  for (std::size_t i = 0; i < ens.members.size(); ++i) {
    const std::string prefix = "class" + std::to_string(i) + ".";
    const ClassMember& m = ens.members[i];
    a.meta[prefix + "parts"] = m.mean && m.cov ? "mc" : (m.mean ? "mean" : "cov");
    if (m.mean) add_mean(a, *m.mean, prefix + "mean.");
    if (m.cov) add_gae(a, *m.cov, prefix + "cov.");
  }
  a.tensors.push_back(make_tensor("biases", ens.biases));
  return a;
}

ModelArchive to_archive(const MlpParams& m) {
  ModelArchive a;
  a.kind = "mlp";
  add_mlp(a, m);
  return a;
}

ModelArchive to_archive(const MlpParams& m, const GaeParams& g, LabelVariant variant) {
  ModelArchive a;
  a.kind = "structured";
  a.meta["variant"] = variant == LabelVariant::gae_xy ? "xy" : "y2";
  add_mlp(a, m);
  add_gae(a, g, "gae.");
  return a;
}

GaeParams gae_from_archive(const ModelArchive& a) {
  if (a.kind != "gae" && a.kind != "cov-gae") require_kind(a, "gae");
  GaeParams p = read_gae(a, "");
  if (a.kind == "cov-gae") require_covariance_model(p);
  return p;
}

MeanAeParams mean_ae_from_archive(const ModelArchive& a) {
  require_kind(a, "mean");
  return read_mean(a, "");
}

std::pair<MeanAeParams, GaeParams> mc_from_archive(const ModelArchive& a) {
  require_kind(a, "mc");
  GaeParams c = read_gae(a, "cov.");
  require_covariance_model(c);
  return {read_mean(a, "mean."), std::move(c)};
}

ClassifierEnsemble ensemble_from_archive(const ModelArchive& a) {
  require_kind(a, "ensemble");
  const auto k = parse_u64(meta_at(a, "classes"));
  ClassifierEnsemble ens;
  for (std::uint64_t i = 0; i < k; ++i) {
    const std::string prefix = "class" + std::to_string(i) + ".";
    const std::string& parts = meta_at(a, prefix + "parts");
    ClassMember m;
    if (parts == "mean" || parts == "mc") m.mean = read_mean(a, prefix + "mean.");
    if (parts == "cov" || parts == "mc") m.cov = read_gae(a, prefix + "cov.");
    ens.members.push_back(std::move(m));
  }
  ens.biases = to_vector(a.tensor("biases"));
  ens.validate();
  return ens;
}

MlpParams mlp_from_archive(const ModelArchive& a) {
  require_kind(a, "mlp");
  return read_mlp(a);
}

StructuredModel structured_from_archive(const ModelArchive& a) {
  require_kind(a, "structured");
  return {read_mlp(a), read_gae(a, "gae."), parse_label_variant(meta_at(a, "variant"))};
}

}  // namespace gae
