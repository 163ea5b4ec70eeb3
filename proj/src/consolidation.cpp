#include "sgc/consolidation.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "sgc/error.hpp"
#include "sgc/text.hpp"

namespace sgc {
namespace {

ObjectSnapshot snapshot(const ObjectNode& o) { return ObjectSnapshot{o.id, o.class_label, o.attributes, o.merge_count}; }

// The more-consolidated parent names the merged object; ties go to the
// lexicographically smaller label.
const std::string& merged_class(const ObjectNode& a, const ObjectNode& b) {
  if (a.merge_count != b.merge_count) return a.merge_count > b.merge_count ? a.class_label : b.class_label;
  return std::min(a.class_label, b.class_label);
}

struct Fusion {
  std::size_t source;
  std::size_t target;
  double score;
};

// Shared by merge_pair and trace replay: fuses the given index pairs.
std::pair<SceneGraph, MergeEvent> fuse(const SceneGraph& gs, const SceneGraph& gt, const std::vector<Fusion>& fusions) {
  std::set<std::size_t> seen_s, seen_t;
  for (const auto& f : fusions) {
    if (f.source >= gs.objects.size() || f.target >= gt.objects.size()) {
      throw Error(ErrorCode::kIntegrity, "match (" + std::to_string(f.source) + ", " + std::to_string(f.target) +
                                             ") is out of range for graphs of " + std::to_string(gs.objects.size()) +
                                             " and " + std::to_string(gt.objects.size()) + " objects");
    }
    if (!seen_s.insert(f.source).second || !seen_t.insert(f.target).second) {
      throw Error(ErrorCode::kIntegrity, "match (" + std::to_string(f.source) + ", " + std::to_string(f.target) +
                                             ") reuses an already matched object");
    }
  }

  const std::uint32_t offset = union_offset(gs);
  SceneGraph merged = disjoint_union(gs, gt);
  std::uint32_t next_id = union_offset(merged);

  std::map<NodeId, NodeId> redirect;
  std::set<NodeId> removed;
  std::vector<ObjectNode> fused_nodes;
  MergeEvent event;
  for (const auto& f : fusions) {
    const ObjectNode& p = gs.objects[f.source];
    const ObjectNode& q = gt.objects[f.target];
    ObjectNode m;
    m.id = NodeId{next_id++};
    m.class_label = merged_class(p, q);
    std::set<std::string> attrs(p.attributes.begin(), p.attributes.end());
    attrs.insert(q.attributes.begin(), q.attributes.end());
    attrs.erase(m.class_label);
    m.attributes.assign(attrs.begin(), attrs.end());
    m.merge_count = p.merge_count + q.merge_count + 1;

    NodeId q_union{q.id.value + offset};
    redirect[p.id] = m.id;
    redirect[q_union] = m.id;
    removed.insert(p.id);
    removed.insert(q_union);
    event.merges.push_back(ObjectMerge{snapshot(p), snapshot(q), f.score, snapshot(m)});
    fused_nodes.push_back(std::move(m));
  }

  std::erase_if(merged.objects, [&](const ObjectNode& o) { return removed.count(o.id) > 0; });
  merged.objects.insert(merged.objects.end(), fused_nodes.begin(), fused_nodes.end());
  for (auto& e : merged.edges) {
    if (auto it = redirect.find(e.source); it != redirect.end()) e.source = it->second;
    if (auto it = redirect.find(e.target); it != redirect.end()) e.target = it->second;
  }

  auto canon = canonicalize_with_map(merged);
  for (auto& m : event.merges) m.merged.id = canon.id_map.at(m.merged.id);
  event.source_digest = graph_hash(gs);
  event.target_digest = graph_hash(gt);
  event.result_digest = graph_hash(canon.graph);
  return {std::move(canon.graph), std::move(event)};
}

nlohmann::ordered_json snapshot_json(const ObjectSnapshot& s) {
  nlohmann::ordered_json j;
  j["id"] = s.id.value;
  j["class"] = s.class_label;
  j["attributes"] = s.attributes;
  j["merge_count"] = s.merge_count;
  return j;
}

ObjectSnapshot snapshot_from_json(const nlohmann::json& j) {
  return ObjectSnapshot{NodeId{j.at("id").get<std::uint32_t>()}, j.at("class").get<std::string>(),
                        j.at("attributes").get<std::vector<std::string>>(), j.at("merge_count").get<std::uint32_t>()};
}

struct Prepared {
  std::vector<SceneGraph> graphs;
  std::vector<std::string> empty_provenance;
};

Prepared prepare(const std::vector<SceneGraph>& inputs) {
  Prepared p;
  for (const auto& g : inputs) {
    if (g.empty()) {
      p.empty_provenance.insert(p.empty_provenance.end(), g.provenance.begin(), g.provenance.end());
    } else {
      p.graphs.push_back(canonicalize(g));
    }
  }
  return p;
}

SceneGraph finalize(SceneGraph g, const std::vector<std::string>& empty_provenance) {
  if (empty_provenance.empty()) return g;
  g.provenance.insert(g.provenance.end(), empty_provenance.begin(), empty_provenance.end());
  return canonicalize(g);
}

// The k highest-priority nodes: merge count desc, degree desc, class asc, id asc.
std::set<NodeId> priority_seeds(const SceneGraph& graph, std::uint32_t k) {
  if (k < 1) throw Error(ErrorCode::kConfig, "k must be at least 1");
  std::vector<std::size_t> degree(graph.objects.size(), 0);
  for (const auto& e : graph.edges) {
    auto s = graph.index_of(e.source);
    auto t = graph.index_of(e.target);
    if (s < degree.size()) ++degree[s];
    if (t < degree.size()) ++degree[t];
  }
  std::vector<std::size_t> order(graph.objects.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& oa = graph.objects[a];
    const auto& ob = graph.objects[b];
    if (oa.merge_count != ob.merge_count) return oa.merge_count > ob.merge_count;
    if (degree[a] != degree[b]) return degree[a] > degree[b];
    if (oa.class_label != ob.class_label) return oa.class_label < ob.class_label;
    return oa.id < ob.id;
  });
  std::set<NodeId> seeds;
  for (std::size_t r = 0; r < order.size() && r < k; ++r) seeds.insert(graph.objects[order[r]].id);
  return seeds;
}

}  // namespace

void ConsolidationConfig::validate() const {
  if (!(tau > 0.0 && tau <= 1.0)) throw Error(ErrorCode::kConfig, "tau must be in (0, 1], got " + std::to_string(tau));
  if (top_k && *top_k < 1) throw Error(ErrorCode::kConfig, "top_k must be at least 1");
  if (provider.dimension == 0 && provider.kind == ProviderKind::kHashedContext) {
    throw Error(ErrorCode::kConfig, "provider dimension must be positive");
  }
  if (provider.kind == ProviderKind::kFileBacked && provider.path.empty()) {
    throw Error(ErrorCode::kConfig, "file provider requires a path");
  }
  if (max_iterations == 0) throw Error(ErrorCode::kConfig, "max_iterations must be positive");
}

ConsolidationConfig ConsolidationConfig::short_caption_preset() {
  ConsolidationConfig cfg;
  cfg.top_k = 1;
  return cfg;
}

ConsolidationConfig config_from_json(const nlohmann::json& j) {
  ConsolidationConfig cfg;
  try {
    if (j.contains("tau")) cfg.tau = j.at("tau").get<double>();
    if (j.contains("top_k") && !j.at("top_k").is_null()) {
      auto k = j.at("top_k").get<std::int64_t>();
      if (k < 1) throw Error(ErrorCode::kConfig, "top_k must be at least 1");
      cfg.top_k = static_cast<std::uint32_t>(k);
    }
    if (j.contains("max_iterations")) cfg.max_iterations = j.at("max_iterations").get<std::size_t>();
    if (j.contains("provider")) {
      const auto& p = j.at("provider");
      auto kind = p.value("kind", std::string("hashed"));
      if (kind == "hashed" || kind == "hashed-context") {
        cfg.provider.kind = ProviderKind::kHashedContext;
      } else if (kind == "file" || kind == "file-backed") {
        cfg.provider.kind = ProviderKind::kFileBacked;
        cfg.provider.path = p.value("path", std::string());
        cfg.provider.version = "file:" + cfg.provider.path;
      } else {
        throw Error(ErrorCode::kConfig, "unknown provider kind \"" + kind + "\"");
      }
      if (p.contains("dimension")) cfg.provider.dimension = p.at("dimension").get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kConfig, std::string("malformed config: ") + ex.what());
  }
  cfg.validate();
  return cfg;
}

ConsolidationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open config file " + path);
  try {
    return config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kConfig, "malformed config file " + path + ": " + ex.what());
  }
}

nlohmann::ordered_json to_json(const ConsolidationConfig& cfg) {
  nlohmann::ordered_json j;
  j["tau"] = cfg.tau;
  j["top_k"] = cfg.top_k ? nlohmann::ordered_json(*cfg.top_k) : nlohmann::ordered_json(nullptr);
  j["max_iterations"] = cfg.max_iterations;
  nlohmann::ordered_json p;
  p["kind"] = cfg.provider.kind == ProviderKind::kHashedContext ? "hashed" : "file";
  p["dimension"] = cfg.provider.dimension;
  p["version"] = cfg.provider.version;
  if (!cfg.provider.path.empty()) p["path"] = cfg.provider.path;
  j["provider"] = std::move(p);
  return j;
}

std::size_t MergeTrace::object_merge_count() const {
  std::size_t n = 0;
  for (const auto& e : events) n += e.merges.size();
  return n;
}

std::string MergeTrace::to_jsonl() const {
  std::string out;
  for (const auto& e : events) {
    nlohmann::ordered_json j;
    j["iteration"] = e.iteration;
    j["source"] = e.source_digest;
    j["target"] = e.target_digest;
    j["graph_similarity"] = e.graph_similarity;
    j["merges"] = nlohmann::ordered_json::array();
    for (const auto& m : e.merges) {
      nlohmann::ordered_json jm;
      jm["score"] = m.score;
      jm["source"] = snapshot_json(m.source);
      jm["target"] = snapshot_json(m.target);
      jm["merged"] = snapshot_json(m.merged);
      j["merges"].push_back(std::move(jm));
    }
    j["result"] = e.result_digest;
    out += j.dump();
    out += '\n';
  }
  return out;
}

MergeTrace MergeTrace::from_jsonl(std::istream& in) {
  MergeTrace trace;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::collapse_lower(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      MergeEvent e;
      e.iteration = j.at("iteration").get<std::size_t>();
      e.source_digest = j.at("source").get<std::string>();
      e.target_digest = j.at("target").get<std::string>();
      e.graph_similarity = j.at("graph_similarity").get<double>();
      for (const auto& jm : j.at("merges")) {
        e.merges.push_back(ObjectMerge{snapshot_from_json(jm.at("source")), snapshot_from_json(jm.at("target")),
                                       jm.at("score").get<double>(), snapshot_from_json(jm.at("merged"))});
      }
      e.result_digest = j.at("result").get<std::string>();
      trace.events.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::kInput, "trace line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return trace;
}

SimilarityMatrix object_similarity(const SceneGraph& gs, const SceneGraph& gt, const EmbeddingProvider& provider) {
  auto vs = provider.embed_objects(gs);
  auto vt = provider.embed_objects(gt);
  SimilarityMatrix s(vs.size(), vt.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = 0; j < vt.size(); ++j) s(i, j) = cosine(vs[i], vt[j]);
  }
  return s;
}

AssignmentResult match_objects(const SceneGraph& gs, const SceneGraph& gt, const EmbeddingProvider& provider) {
  return hungarian_assign(object_similarity(gs, gt, provider));
}

std::vector<MatchedPair> valid_matches(const AssignmentResult& assignment, double tau) {
  std::vector<MatchedPair> out;
  for (const auto& p : assignment.pairs) {
    if (p.score > tau) out.push_back(p);
  }
  return out;
}

std::pair<SceneGraph, MergeTrace> merge_pair(const SceneGraph& gs, const SceneGraph& gt,
                                             const AssignmentResult& matches, const ConsolidationConfig& cfg) {
  std::vector<Fusion> fusions;
  for (const auto& p : valid_matches(matches, cfg.tau)) fusions.push_back(Fusion{p.source, p.target, p.score});
  auto [graph, event] = fuse(gs, gt, fusions);
  MergeTrace trace;
  trace.events.push_back(std::move(event));
  return {std::move(graph), std::move(trace)};
}

ConsolidationResult consolidate(const std::vector<SceneGraph>& inputs, const ConsolidationConfig& cfg,
                                const EmbeddingProvider& provider) {
  cfg.validate();
  Prepared prepared = prepare(inputs);
  ConsolidationResult result;
  if (prepared.graphs.empty()) {
    result.graph.provenance = prepared.empty_provenance;
    result.graph = canonicalize(result.graph);
    return result;
  }

  struct Entry {
    SceneGraph graph;
    std::string digest;
    EmbeddingVector embedding;
  };
  auto make_entry = [&](SceneGraph g) {
    Entry e;
    e.digest = graph_hash(g);
    e.embedding = embed_graph(g, provider);
    e.graph = std::move(g);
    return e;
  };
  std::vector<Entry> pool;
  pool.reserve(prepared.graphs.size());
  for (auto& g : prepared.graphs) pool.push_back(make_entry(std::move(g)));

  std::size_t iteration = 0;
  while (pool.size() > 1) {
    if (iteration >= cfg.max_iterations) {
      throw Error(ErrorCode::kLoopGuard, "consolidation exceeded " + std::to_string(cfg.max_iterations) + " iterations");
    }
    // Sorting by digest makes scan order, and hence tie-breaking, a function
    // of graph content rather than input position.
    std::stable_sort(pool.begin(), pool.end(), [](const Entry& a, const Entry& b) { return a.digest < b.digest; });
    std::size_t best_i = 0, best_j = 1;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (std::size_t j = i + 1; j < pool.size(); ++j) {
        double c = cosine(pool[i].embedding, pool[j].embedding);
        if (c > best) {
          best = c;
          best_i = i;
          best_j = j;
        }
      }
    }
    const SceneGraph& gs = pool[best_i].graph;
    const SceneGraph& gt = pool[best_j].graph;
    auto [merged, trace] = merge_pair(gs, gt, match_objects(gs, gt, provider), cfg);
    MergeEvent event = std::move(trace.events.front());
    event.iteration = iteration;
    event.graph_similarity = best;
    result.trace.events.push_back(std::move(event));

    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best_j));
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best_i));
    pool.push_back(make_entry(std::move(merged)));
    ++iteration;
  }
  result.graph = finalize(std::move(pool.front().graph), prepared.empty_provenance);
  return result;
}

ConsolidationResult consolidate(const std::vector<SceneGraph>& graphs, const ConsolidationConfig& cfg) {
  cfg.validate();
  auto provider = make_provider(cfg.provider);
  return consolidate(graphs, cfg, *provider);
}

SceneGraph replay_trace(const std::vector<SceneGraph>& inputs, const MergeTrace& trace) {
  Prepared prepared = prepare(inputs);
  std::multimap<std::string, SceneGraph> pool;
  for (auto& g : prepared.graphs) {
    auto digest = graph_hash(g);
    pool.emplace(std::move(digest), std::move(g));
  }
  auto take = [&](const std::string& digest) {
    auto it = pool.find(digest);
    if (it == pool.end()) throw Error(ErrorCode::kIntegrity, "trace references unknown graph " + digest);
    SceneGraph g = std::move(it->second);
    pool.erase(it);
    return g;
  };
  for (const auto& e : trace.events) {
    SceneGraph gs = take(e.source_digest);
    SceneGraph gt = take(e.target_digest);
    std::vector<Fusion> fusions;
    for (const auto& m : e.merges) {
      auto s = gs.index_of(m.source.id);
      auto t = gt.index_of(m.target.id);
      fusions.push_back(Fusion{s, t, m.score});
    }
    auto [merged, event] = fuse(gs, gt, fusions);
    if (event.result_digest != e.result_digest) {
      throw Error(ErrorCode::kIntegrity, "replay of iteration " + std::to_string(e.iteration) +
                                             " produced " + event.result_digest + ", trace records " + e.result_digest);
    }
    pool.emplace(event.result_digest, std::move(merged));
  }
  if (pool.size() > 1) throw Error(ErrorCode::kIntegrity, "trace leaves " + std::to_string(pool.size()) + " graphs unmerged");
  SceneGraph out = pool.empty() ? SceneGraph{} : std::move(pool.begin()->second);
  if (pool.empty()) {
    out.provenance = prepared.empty_provenance;
    return canonicalize(out);
  }
  return finalize(std::move(out), prepared.empty_provenance);
}

std::vector<NodeId> select_prioritized_nodes(const SceneGraph& graph, std::uint32_t k) {
  auto seeds = priority_seeds(graph, k);
  std::set<NodeId> out = seeds;
  for (const auto& e : graph.edges) {
    if (seeds.count(e.source) || seeds.count(e.target)) {
      out.insert(e.source);
      out.insert(e.target);
    }
  }
  return {out.begin(), out.end()};
}

SceneGraph extract_prioritized_subgraph(const SceneGraph& graph, std::uint32_t k) {
  if (k < 1) throw Error(ErrorCode::kConfig, "k must be at least 1");
  if (k >= graph.objects.size()) return canonicalize(graph);
  auto seeds = priority_seeds(graph, k);
  auto ids = select_prioritized_nodes(graph, k);
  std::set<NodeId> kept(ids.begin(), ids.end());
  SceneGraph sub;
  sub.provenance = graph.provenance;
  for (const auto& o : graph.objects) {
    if (kept.count(o.id)) sub.objects.push_back(o);
  }
  // Edges between two non-seed neighbours lie outside the one-hop extent.
  for (const auto& e : graph.edges) {
    if (seeds.count(e.source) || seeds.count(e.target)) sub.edges.push_back(e);
  }
  return canonicalize(sub);
}

}  // namespace sgc
