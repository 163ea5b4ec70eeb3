#include "sgc/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "sgc/error.hpp"
#include "sgc/simd/kernels.hpp"
#include "sgc/text.hpp"

namespace sgc {
namespace {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::vector<double> unit(std::vector<double> v) {
  double n = std::sqrt(simd::dot(v, v));
  if (n == 0.0) throw Error(ErrorCode::kDegenerateVector, "cannot normalize a zero vector");
  simd::scale(1.0 / n, v);
  return v;
}

std::vector<double> class_vector(const std::string& label, std::size_t dim) {
  std::string padded = "#" + label + "#";
  std::vector<double> acc(dim, 0.0);
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    auto tri = hashed_feature("tri:" + padded.substr(i, 3), dim);
    simd::axpy(1.0, tri.values(), acc);
  }
  return unit(std::move(acc));
}

}  // namespace

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
  squared_norm_ = simd::dot(values_, values_);
  norm_ = std::sqrt(squared_norm_);
}

EmbeddingVector EmbeddingVector::normalized() const {
  if (norm_ == 0.0) throw Error(ErrorCode::kDegenerateVector, "cannot normalize a zero vector");
  std::vector<double> v = values_;
  simd::scale(1.0 / norm_, v);
  return EmbeddingVector(std::move(v));
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() != b.dimension()) {
    throw Error(ErrorCode::kValidation, "cosine of vectors with dimensions " + std::to_string(a.dimension()) +
                                            " and " + std::to_string(b.dimension()));
  }
  if (a.norm() == 0.0 || b.norm() == 0.0) throw Error(ErrorCode::kDegenerateVector, "cosine of a zero vector");
  double c = simd::dot(a.values(), b.values()) / std::sqrt(a.squared_norm() * b.squared_norm());
  return std::clamp(c, -1.0, 1.0);
}

EmbeddingVector hashed_feature(std::string_view feature, std::size_t dimension) {
  std::uint64_t state = fnv1a64(feature);
  const double mag = 1.0 / std::sqrt(static_cast<double>(dimension));
  std::vector<double> v(dimension);
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < dimension; ++i) {
    if (i % 64 == 0) bits = splitmix64(state);
    v[i] = (bits & 1u) ? mag : -mag;
    bits >>= 1;
  }
  return EmbeddingVector(std::move(v));
}

HashedContextProvider::HashedContextProvider(std::size_t dimension) {
  if (dimension == 0) throw Error(ErrorCode::kConfig, "embedding dimension must be positive");
  descriptor_.kind = ProviderKind::kHashedContext;
  descriptor_.dimension = dimension;
  descriptor_.version = "hashed-context/1";
}

std::vector<EmbeddingVector> HashedContextProvider::embed_objects(const SceneGraph& graph) const {
  const std::size_t dim = descriptor_.dimension;
  const std::size_t n = graph.objects.size();
  std::vector<std::vector<std::string>> context(n);
  for (const auto& e : graph.edges) {
    auto s = graph.index_of(e.source);
    auto t = graph.index_of(e.target);
    if (s >= n || t >= n) throw Error(ErrorCode::kIntegrity, "edge references a missing object");
    context[s].push_back("ctx:out:" + e.relation + "|" + graph.objects[t].class_label);
    context[t].push_back("ctx:in:" + e.relation + "|" + graph.objects[s].class_label);
  }
  std::vector<EmbeddingVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& o = graph.objects[i];
    std::vector<double> acc = class_vector(o.class_label, dim);
    std::vector<std::string> attrs = o.attributes;
    std::sort(attrs.begin(), attrs.end());
    for (const auto& a : attrs) simd::axpy(kAttributeWeight, hashed_feature("attr:" + a, dim).values(), acc);
    std::sort(context[i].begin(), context[i].end());
    for (const auto& c : context[i]) simd::axpy(kContextWeight, hashed_feature(c, dim).values(), acc);
    out.emplace_back(unit(std::move(acc)));
  }
  return out;
}

std::string object_signature(const ObjectNode& node, std::size_t dimension) {
  std::vector<std::string> attrs = node.attributes;
  std::sort(attrs.begin(), attrs.end());
  return node.class_label + "|" + text::join_words(attrs, ",") + "|" + std::to_string(dimension);
}

FileBackedProvider FileBackedProvider::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open embedding file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kInput, "malformed embedding file " + path + ": " + ex.what());
  }
  auto p = from_json(j, "file:" + path);
  p.descriptor_.path = path;
  return p;
}

FileBackedProvider FileBackedProvider::from_json(const nlohmann::json& j, std::string version) {
  FileBackedProvider p;
  p.descriptor_.kind = ProviderKind::kFileBacked;
  p.descriptor_.version = std::move(version);
  const nlohmann::json& table = j.contains("vectors") ? j.at("vectors") : j;
  std::size_t dim = j.contains("dimension") ? j.at("dimension").get<std::size_t>() : 0;
  try {
    for (const auto& [key, arr] : table.items()) {
      auto values = arr.get<std::vector<double>>();
      if (dim == 0) dim = values.size();
      if (values.size() != dim) {
        throw Error(ErrorCode::kInput, "embedding for \"" + key + "\" has dimension " + std::to_string(values.size()) +
                                           ", expected " + std::to_string(dim));
      }
      p.table_.emplace(key, EmbeddingVector(std::move(values)));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kInput, std::string("malformed embedding table: ") + ex.what());
  }
  if (dim == 0) throw Error(ErrorCode::kInput, "embedding table is empty");
  p.descriptor_.dimension = dim;
  return p;
}

std::vector<EmbeddingVector> FileBackedProvider::embed_objects(const SceneGraph& graph) const {
  std::vector<EmbeddingVector> out;
  out.reserve(graph.objects.size());
  for (const auto& o : graph.objects) {
    auto sig = object_signature(o, descriptor_.dimension);
    auto it = table_.find(sig);
    if (it == table_.end()) {
      throw Error(ErrorCode::kMissingEmbedding, "no embedding for object " + std::to_string(o.id.value) + " (" + sig + ")");
    }
    out.push_back(it->second);
  }
  return out;
}

std::shared_ptr<const EmbeddingProvider> make_provider(const ProviderDescriptor& descriptor) {
  switch (descriptor.kind) {
    case ProviderKind::kHashedContext:
      return std::make_shared<HashedContextProvider>(descriptor.dimension);
    case ProviderKind::kFileBacked:
      return std::make_shared<FileBackedProvider>(FileBackedProvider::load(descriptor.path));
  }
  throw Error(ErrorCode::kConfig, "unknown provider kind");
}

EmbeddingVector embed_graph(const SceneGraph& graph, const EmbeddingProvider& provider) {
  if (graph.empty()) throw Error(ErrorCode::kEmptyGraph, "cannot embed an empty graph");
  auto vectors = provider.embed_objects(graph);
  std::vector<double> acc(vectors.front().dimension(), 0.0);
  for (const auto& v : vectors) simd::axpy(1.0, v.normalized().values(), acc);
  simd::scale(1.0 / static_cast<double>(vectors.size()), acc);
  return EmbeddingVector(unit(std::move(acc)));
}

}  // namespace sgc
