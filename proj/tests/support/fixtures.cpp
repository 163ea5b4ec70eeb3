#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace sgc::testing {

std::string source_path(const std::string& relative) { return std::string(SGC_SOURCE_DIR) + "/" + relative; }

std::vector<AnnotatedCaption> load_grammar_corpus() {
  std::ifstream in(source_path("tests/data/grammar_corpus.jsonl"));
  if (!in) throw std::runtime_error("grammar corpus missing");
  std::vector<AnnotatedCaption> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    GraphBuilder b;
    std::vector<NodeId> ids;
    for (const auto& o : j.at("objects")) {
      ids.push_back(b.add_object(o.at("class").get<std::string>(), o.at("attributes").get<std::vector<std::string>>()));
    }
    for (const auto& e : j.at("edges")) {
      b.add_edge(ids.at(e.at(0).get<std::size_t>()), e.at(1).get<std::string>(), ids.at(e.at(2).get<std::size_t>()));
    }
    out.push_back(AnnotatedCaption{j.at("caption").get<std::string>(), b.build()});
  }
  return out;
}

std::vector<SegmentCaptionRecord> load_records(const std::string& relative) {
  std::ifstream in(source_path(relative));
  if (!in) throw std::runtime_error("missing " + relative);
  CaptionRecordReader reader(in);
  std::vector<SegmentCaptionRecord> out;
  while (auto r = reader.next()) out.push_back(*r);
  return out;
}

std::vector<SceneGraph> parse_records(const std::vector<SegmentCaptionRecord>& records) {
  std::vector<SceneGraph> out;
  for (const auto& r : records) out.push_back(parse_segment(r));
  return out;
}

std::vector<SceneGraph> demo12_graphs() { return parse_records(load_records("data/demo12.jsonl")); }

double brute_force_max_total(const SimilarityMatrix& m) {
  if (m.empty()) return 0.0;
  const bool transpose = m.rows() > m.cols();
  const std::size_t small = transpose ? m.cols() : m.rows();
  const std::size_t large = transpose ? m.rows() : m.cols();
  std::vector<std::size_t> perm(large);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    if (!transpose) {
      for (std::size_t r = 0; r < small; ++r) total += m(r, perm[r]);
    } else {
      // rows are the larger side: sum matched rows in ascending row order
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t c = 0; c < small; ++c) pairs.emplace_back(perm[c], c);
      std::sort(pairs.begin(), pairs.end());
      for (auto [r, c] : pairs) total += m(r, c);
    }
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

SimilarityMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, bool quantized) {
  SimilarityMatrix m(rows, cols);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> q(-8, 8);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = quantized ? q(rng) / 8.0 : u(rng);
  }
  return m;
}

namespace {

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

}  // namespace

SceneGraph random_graph(std::mt19937_64& rng, std::size_t max_objects, const FuzzVocabulary& vocab) {
  GraphBuilder b;
  std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_objects)(rng);
  std::vector<NodeId> ids;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> attrs;
    for (const auto& a : vocab.attributes) {
      if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) attrs.push_back(a);
    }
    ids.push_back(b.add_object(pick(rng, vocab.classes), attrs));
  }
  std::size_t m = std::uniform_int_distribution<std::size_t>(0, n)(rng);
  for (std::size_t k = 0; k < m && n > 1; ++k) {
    b.add_edge(pick(rng, ids), pick(rng, vocab.relations), pick(rng, ids));
  }
  b.add_provenance("fuzz" + std::to_string(rng() % 100000));
  return b.build();
}

TwoClusterFixture two_cluster_fixture() {
  GraphBuilder b;
  auto a = b.add_object("man", {}, 4);
  auto a1 = b.add_object("horse", {"brown"});
  auto a2 = b.add_object("hat");
  auto a3 = b.add_object("whip");
  b.add_edge(a, "ride", a1);
  b.add_edge(a, "wear", a2);
  b.add_edge(a, "hold", a3);
  auto hb = b.add_object("dog", {}, 2);
  auto b1 = b.add_object("ball");
  auto b2 = b.add_object("grass");
  b.add_edge(hb, "chase", b1);
  b.add_edge(hb, "run on", b2);
  return TwoClusterFixture{b.build(), {"hat", "horse", "man", "whip"}};
}

SceneGraph random_expressible_graph(std::mt19937_64& rng) {
  static const std::vector<std::string> nouns{"man", "woman", "horse", "car", "tree", "girl", "boy",
                                              "kitchen", "table", "bench", "guitar", "chef", "bird", "lake"};
  static const std::vector<std::string> attributes{"red", "old", "small", "brown", "young", "tall", "wooden"};
  static const std::vector<std::string> relations{"ride", "hold", "near", "on", "cook in", "sit on", "next to",
                                                  "look at", "play", "in front of"};
  GraphBuilder b;
  auto new_node = [&] {
    std::vector<std::string> attrs;
    if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) attrs.push_back(pick(rng, attributes));
    return b.add_object(pick(rng, nouns), attrs);
  };
  std::size_t components = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  for (std::size_t c = 0; c < components; ++c) {
    auto hub = new_node();
    std::size_t leaves = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
    for (std::size_t l = 0; l < leaves; ++l) b.add_edge(hub, pick(rng, relations), new_node());
  }
  return b.build();
}

std::vector<std::string> class_multiset(const SceneGraph& g) {
  std::vector<std::string> out;
  for (const auto& o : g.objects) out.push_back(o.class_label);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sgc::testing
