#pragma once

// Merging per-segment scene graphs into one video-level graph.
//
// Two graphs are merged by matching their objects with a maximum-similarity
// assignment over object embeddings, then fusing every matched pair whose
// cosine exceeds tau into one node carrying the union of both attribute sets.
// consolidate() repeats this on the most similar remaining pair of graphs
// until one graph is left.

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sgc/embedding.hpp"
#include "sgc/hungarian.hpp"
#include "sgc/scene_graph.hpp"

namespace sgc {

struct ConsolidationConfig {
  double tau = 0.9;
  std::optional<std::uint32_t> top_k;
  ProviderDescriptor provider;
  std::size_t max_iterations = 1'000'000;

  /// Throws kConfig unless tau is in (0, 1], top_k >= 1, and the provider
  /// dimension is positive.
  void validate() const;

  /// Concise single-sentence captions: subgraph extraction around the single
  /// most-merged node.
  static ConsolidationConfig short_caption_preset();
};

/// Keys: tau, top_k, max_iterations, provider.kind ("hashed" | "file"),
/// provider.path, provider.dimension. Missing keys keep their defaults.
ConsolidationConfig config_from_json(const nlohmann::json& j);
ConsolidationConfig load_config(const std::string& path);
nlohmann::ordered_json to_json(const ConsolidationConfig& cfg);

struct ObjectSnapshot {
  NodeId id;
  std::string class_label;
  std::vector<std::string> attributes;
  std::uint32_t merge_count = 0;

  bool operator==(const ObjectSnapshot&) const = default;
};

struct ObjectMerge {
  ObjectSnapshot source;  // ids are canonical ids within the source graph
  ObjectSnapshot target;  // ids are canonical ids within the target graph
  double score = 0.0;
  ObjectSnapshot merged;  // id is the canonical id within the result graph

  bool operator==(const ObjectMerge&) const = default;
};

struct MergeEvent {
  std::size_t iteration = 0;
  std::string source_digest;
  std::string target_digest;
  double graph_similarity = 0.0;
  std::vector<ObjectMerge> merges;
  std::string result_digest;

  bool operator==(const MergeEvent&) const = default;
};

struct MergeTrace {
  std::vector<MergeEvent> events;

  std::size_t object_merge_count() const;
  /// One JSON object per line.
  std::string to_jsonl() const;
  static MergeTrace from_jsonl(std::istream& in);

  bool operator==(const MergeTrace&) const = default;
};

/// Pairwise cosine of the two graphs' object embeddings (rows: gs objects).
SimilarityMatrix object_similarity(const SceneGraph& gs, const SceneGraph& gt, const EmbeddingProvider& provider);

AssignmentResult match_objects(const SceneGraph& gs, const SceneGraph& gt, const EmbeddingProvider& provider);

/// Pairs with score strictly above tau.
std::vector<MatchedPair> valid_matches(const AssignmentResult& assignment, double tau);

/// Fuses every valid match of (gs, gt) and returns the canonical merged graph
/// with a one-event trace. Edges incident to either parent, in both
/// directions, are redirected to the merged node; resulting self-loops and
/// duplicate triples are dropped. Throws kIntegrity for out-of-range or
/// repeated indices.
std::pair<SceneGraph, MergeTrace> merge_pair(const SceneGraph& gs, const SceneGraph& gt,
                                             const AssignmentResult& matches, const ConsolidationConfig& cfg);

struct ConsolidationResult {
  SceneGraph graph;
  MergeTrace trace;
};

/// Repeatedly merges the most similar pair of graphs (graph-embedding cosine;
/// ties broken by the smaller pair of content digests) until one remains.
/// Empty graphs are dropped up front but their provenance is kept.
ConsolidationResult consolidate(const std::vector<SceneGraph>& graphs, const ConsolidationConfig& cfg,
                                const EmbeddingProvider& provider);
ConsolidationResult consolidate(const std::vector<SceneGraph>& graphs, const ConsolidationConfig& cfg);

/// Re-applies a trace to the original inputs. Throws kIntegrity if a digest
/// recorded in the trace cannot be found or reproduced.
SceneGraph replay_trace(const std::vector<SceneGraph>& graphs, const MergeTrace& trace);

/// Ids of the nodes kept by extract_prioritized_subgraph, in the input graph's
/// id space.
std::vector<NodeId> select_prioritized_nodes(const SceneGraph& graph, std::uint32_t k);

/// The top-k nodes by (merge count desc, degree desc, class asc, id asc), every
/// edge incident to them, and those edges' endpoints. k >= node count returns
/// the whole graph.
SceneGraph extract_prioritized_subgraph(const SceneGraph& graph, std::uint32_t k);

}  // namespace sgc
