#pragma once

// Scene graph data model: objects with a class label and attribute set, labeled
// directed edges between them, and the list of segments the graph covers.

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace sgc {

struct NodeId {
  std::uint32_t value = 0;
  auto operator<=>(const NodeId&) const = default;
};

struct ObjectNode {
  NodeId id;
  std::string class_label;
  std::vector<std::string> attributes;  // sorted, unique, never contains class_label
  std::uint32_t merge_count = 0;

  bool operator==(const ObjectNode&) const = default;
};

struct Edge {
  NodeId source;
  std::string relation;
  NodeId target;

  auto operator<=>(const Edge&) const = default;
};

struct SceneGraph {
  std::vector<ObjectNode> objects;
  std::vector<Edge> edges;
  std::vector<std::string> provenance;

  bool empty() const noexcept { return objects.empty(); }
  const ObjectNode* find(NodeId id) const;
  std::size_t index_of(NodeId id) const;  // objects.size() when absent
  std::size_t degree(NodeId id) const;

  bool operator==(const SceneGraph&) const = default;
};

/// Builds an object with normalized labels. Throws kIntegrity when the class
/// label normalizes to an empty string.
ObjectNode make_object(NodeId id, std::string_view class_label,
                       const std::vector<std::string>& attributes, std::uint32_t merge_count = 0);

/// Incremental construction with normalization; build() returns canonical form.
class GraphBuilder {
 public:
  NodeId add_object(std::string_view class_label, const std::vector<std::string>& attributes = {},
                    std::uint32_t merge_count = 0);
  /// Self-loops are dropped, duplicate triples ignored.
  void add_edge(NodeId source, std::string_view relation, NodeId target);
  void add_provenance(std::string segment_id);
  SceneGraph build() const;
  /// The graph exactly as inserted, without canonical reordering.
  SceneGraph raw() const { return graph_; }

 private:
  SceneGraph graph_;
  std::uint32_t next_id_ = 0;
};

/// Throws kIntegrity naming the first violated structural invariant.
void validate(const SceneGraph& graph);

struct CanonicalResult {
  SceneGraph graph;
  std::map<NodeId, NodeId> id_map;  // input id -> canonical id
};

/// Sorts objects by (class, attributes, merge count, structural colour) and
/// renumbers ids 0..n-1 in that order; sorts edges by (source, relation,
/// target); drops self-loops and duplicate triples; sorts provenance.
/// Throws kIntegrity on dangling edge endpoints or duplicate ids.
CanonicalResult canonicalize_with_map(const SceneGraph& graph);
SceneGraph canonicalize(const SceneGraph& graph);

/// Node and edge lists concatenated with b's ids shifted past a's largest id.
/// No deduplication; not canonicalized.
SceneGraph disjoint_union(const SceneGraph& a, const SceneGraph& b);
/// The id offset disjoint_union applies to b.
std::uint32_t union_offset(const SceneGraph& a);

nlohmann::ordered_json to_json(const SceneGraph& graph);
/// Parses and normalizes; result is canonical. Throws kInput on schema errors.
SceneGraph graph_from_json(const nlohmann::json& j);

/// Compact JSON of the canonical form; the byte string that graph_hash digests.
std::string canonical_bytes(const SceneGraph& graph);

/// SHA-256 (hex) of canonical_bytes. Collisions between distinct canonical
/// forms occur with probability about 2^-128 for any realistic corpus.
std::string graph_hash(const SceneGraph& graph);

/// graph_hash of the empty graph (no objects, edges, or provenance).
inline constexpr std::string_view kEmptyGraphDigest =
    "207142fee7f281fae524e658d6081a23bbf07c7e278228dce8c5be2570de96fc";

std::string to_dot(const SceneGraph& graph);

}  // namespace sgc
