#pragma once
// Shared fixtures and independent oracles for the unit and acceptance suites.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sgc/caption_parser.hpp"
#include "sgc/consolidation.hpp"
#include "sgc/hungarian.hpp"
#include "sgc/scene_graph.hpp"

namespace sgc::testing {

std::string source_path(const std::string& relative);

struct AnnotatedCaption {
  std::string caption;
  SceneGraph expected;
};

/// tests/data/grammar_corpus.jsonl: {"caption", "objects":[{class, attributes}],
/// "edges":[[src_index, relation, dst_index]]}.
std::vector<AnnotatedCaption> load_grammar_corpus();

std::vector<SegmentCaptionRecord> load_records(const std::string& relative);
std::vector<SceneGraph> parse_records(const std::vector<SegmentCaptionRecord>& records);
std::vector<SceneGraph> demo12_graphs();

/// Exhaustive maximum over all one-to-one assignments of the smaller side,
/// summed in ascending row order.
double brute_force_max_total(const SimilarityMatrix& m);

SimilarityMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, bool quantized);

struct FuzzVocabulary {
  std::vector<std::string> classes{"man", "woman", "dog", "horse", "car", "tree"};
  std::vector<std::string> attributes{"red", "old", "small", "brown"};
  std::vector<std::string> relations{"ride", "near", "hold", "on"};
};

/// Random graph with 1..max_objects objects drawn from a small vocabulary so
/// that consolidation finds genuine matches.
SceneGraph random_graph(std::mt19937_64& rng, std::size_t max_objects, const FuzzVocabulary& vocab = {});

/// Two disconnected stars: hub A (merge count 4) with three leaves and hub B
/// (merge count 2) with two leaves. Returns the graph and the class labels of
/// cluster A.
struct TwoClusterFixture {
  SceneGraph graph;
  std::vector<std::string> cluster_a_classes;
};
TwoClusterFixture two_cluster_fixture();

/// Random graph the template realizer and parser agree on: isolated nodes and
/// out-stars from one subject to distinct leaves over unambiguous nouns.
SceneGraph random_expressible_graph(std::mt19937_64& rng);

std::vector<std::string> class_multiset(const SceneGraph& g);

}  // namespace sgc::testing
