#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sgc/scene_graph.hpp"

namespace sgc {

class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t dimension() const { return values_.size(); }
  double norm() const { return norm_; }
  double squared_norm() const { return squared_norm_; }

  /// Unit-length copy. Throws kDegenerateVector for a zero vector.
  EmbeddingVector normalized() const;

  bool operator==(const EmbeddingVector& other) const { return values_ == other.values_; }

 private:
  std::vector<double> values_;
  double squared_norm_ = 0.0;
  double norm_ = 0.0;
};

/// Cosine similarity clamped to [-1, 1], computed as dot / sqrt(|a|^2 |b|^2)
/// so that cosine(v, v) is exactly 1. Throws kValidation on a dimension
/// mismatch and kDegenerateVector when either norm is zero.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

enum class ProviderKind { kHashedContext, kFileBacked };

struct ProviderDescriptor {
  ProviderKind kind = ProviderKind::kHashedContext;
  std::size_t dimension = 256;
  std::string version = "hashed-context/1";
  std::string path;  // sidecar file for kFileBacked
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual const ProviderDescriptor& descriptor() const = 0;
  /// One vector per object, index-aligned with graph.objects.
  virtual std::vector<EmbeddingVector> embed_objects(const SceneGraph& graph) const = 0;
};

/// Signed-hash feature vector: every component is +-1/sqrt(dimension), signs
/// drawn from a splitmix64 stream seeded by the FNV-1a hash of the feature.
EmbeddingVector hashed_feature(std::string_view feature, std::size_t dimension);

/// Object vector = normalize(c + 0.5 * sum(attributes) + 0.25 * sum(context)),
/// where c is the normalized sum of the class label's character trigrams and
/// context enumerates (direction, relation, neighbour class) for every
/// incident edge.
class HashedContextProvider final : public EmbeddingProvider {
 public:
  explicit HashedContextProvider(std::size_t dimension = 256);
  const ProviderDescriptor& descriptor() const override { return descriptor_; }
  std::vector<EmbeddingVector> embed_objects(const SceneGraph& graph) const override;

  static constexpr double kAttributeWeight = 0.5;
  static constexpr double kContextWeight = 0.25;

 private:
  ProviderDescriptor descriptor_;
};

/// "class|attr1,attr2|dim" with attributes in sorted order.
std::string object_signature(const ObjectNode& node, std::size_t dimension);

/// Lookup table keyed by object_signature, loaded from a JSON sidecar of the
/// form {"dimension": d, "vectors": {signature: [..]}} or a flat
/// {signature: [..]} map.
class FileBackedProvider final : public EmbeddingProvider {
 public:
  static FileBackedProvider load(const std::string& path);
  static FileBackedProvider from_json(const nlohmann::json& j, std::string version = "file/1");

  const ProviderDescriptor& descriptor() const override { return descriptor_; }
  std::vector<EmbeddingVector> embed_objects(const SceneGraph& graph) const override;

 private:
  ProviderDescriptor descriptor_;
  std::unordered_map<std::string, EmbeddingVector> table_;
};

std::shared_ptr<const EmbeddingProvider> make_provider(const ProviderDescriptor& descriptor);

/// L2-normalized mean of the L2-normalized object vectors. Throws kEmptyGraph.
EmbeddingVector embed_graph(const SceneGraph& graph, const EmbeddingProvider& provider);

}  // namespace sgc
