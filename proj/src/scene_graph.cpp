#include "sgc/scene_graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "sgc/digest.hpp"
#include "sgc/error.hpp"
#include "sgc/text.hpp"

namespace sgc {
namespace {

std::string edge_repr(const Edge& e) {
  return "(" + std::to_string(e.source.value) + " -" + e.relation + "-> " + std::to_string(e.target.value) + ")";
}

std::vector<std::string> normalized_attribute_set(const std::vector<std::string>& attrs,
                                                  std::string_view class_label) {
  std::vector<std::string> out;
  out.reserve(attrs.size());
  for (const auto& a : attrs) {
    auto n = text::normalize_attribute(a);
    if (!n.empty() && n != class_label) out.push_back(std::move(n));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Drops self-loops and duplicate triples, keeping first occurrences.
std::vector<Edge> clean_edges(const std::vector<Edge>& edges) {
  std::set<Edge> seen;
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.source == e.target) continue;
    if (seen.insert(e).second) out.push_back(e);
  }
  return out;
}

// Colour refinement over (label colour, labeled in/out neighbour colours).
// Nodes that end with distinct colours are structurally distinguishable, so
// their relative order no longer depends on the ids they arrived with.
std::vector<std::size_t> refine_colours(const SceneGraph& g, const std::vector<std::size_t>& initial,
                                        const std::vector<std::pair<std::size_t, std::size_t>>& endpoints) {
  const std::size_t n = g.objects.size();
  std::vector<std::size_t> colour = initial;
  std::size_t distinct = std::set<std::size_t>(colour.begin(), colour.end()).size();
  for (std::size_t round = 0; round < n; ++round) {
    using Signature = std::tuple<std::size_t, std::vector<std::tuple<int, std::string, std::size_t>>>;
    std::vector<Signature> sig(n);
    for (std::size_t i = 0; i < n; ++i) std::get<0>(sig[i]) = colour[i];
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      auto [s, t] = endpoints[k];
      std::get<1>(sig[s]).emplace_back(0, g.edges[k].relation, colour[t]);
      std::get<1>(sig[t]).emplace_back(1, g.edges[k].relation, colour[s]);
    }
    for (auto& s : sig) std::sort(std::get<1>(s).begin(), std::get<1>(s).end());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sig[a] < sig[b]; });
    std::vector<std::size_t> next(n);
    std::size_t rank = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k > 0 && sig[order[k]] != sig[order[k - 1]]) ++rank;
      next[order[k]] = rank;
    }
    std::size_t now = n == 0 ? 0 : rank + 1;
    colour = std::move(next);
    if (now == distinct) break;
    distinct = now;
  }
  return colour;
}

}  // namespace

const ObjectNode* SceneGraph::find(NodeId id) const {
  auto i = index_of(id);
  return i < objects.size() ? &objects[i] : nullptr;
}

std::size_t SceneGraph::index_of(NodeId id) const {
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].id == id) return i;
  }
  return objects.size();
}

std::size_t SceneGraph::degree(NodeId id) const {
  return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](const Edge& e) {
    return e.source == id || e.target == id;
  }));
}

ObjectNode make_object(NodeId id, std::string_view class_label, const std::vector<std::string>& attributes,
                       std::uint32_t merge_count) {
  ObjectNode node;
  node.id = id;
  node.class_label = text::normalize_class(class_label);
  if (node.class_label.empty()) {
    throw Error(ErrorCode::kIntegrity, "object " + std::to_string(id.value) + " has an empty class label");
  }
  node.attributes = normalized_attribute_set(attributes, node.class_label);
  node.merge_count = merge_count;
  return node;
}

NodeId GraphBuilder::add_object(std::string_view class_label, const std::vector<std::string>& attributes,
                                std::uint32_t merge_count) {
  NodeId id{next_id_++};
  graph_.objects.push_back(make_object(id, class_label, attributes, merge_count));
  return id;
}

void GraphBuilder::add_edge(NodeId source, std::string_view relation, NodeId target) {
  if (source == target) return;
  Edge e{source, text::normalize_relation(relation), target};
  if (e.relation.empty()) throw Error(ErrorCode::kIntegrity, "edge " + edge_repr(e) + " has an empty relation");
  if (std::find(graph_.edges.begin(), graph_.edges.end(), e) == graph_.edges.end()) graph_.edges.push_back(e);
}

void GraphBuilder::add_provenance(std::string segment_id) { graph_.provenance.push_back(std::move(segment_id)); }

SceneGraph GraphBuilder::build() const { return canonicalize(graph_); }

void validate(const SceneGraph& g) {
  std::set<NodeId> ids;
  for (const auto& o : g.objects) {
    if (!ids.insert(o.id).second) {
      throw Error(ErrorCode::kIntegrity, "duplicate object id " + std::to_string(o.id.value));
    }
    if (o.class_label.empty()) {
      throw Error(ErrorCode::kIntegrity, "object " + std::to_string(o.id.value) + " has an empty class label");
    }
    if (!std::is_sorted(o.attributes.begin(), o.attributes.end()) ||
        std::adjacent_find(o.attributes.begin(), o.attributes.end()) != o.attributes.end()) {
      throw Error(ErrorCode::kIntegrity, "object " + std::to_string(o.id.value) + " has unsorted or duplicate attributes");
    }
    if (std::binary_search(o.attributes.begin(), o.attributes.end(), o.class_label)) {
      throw Error(ErrorCode::kIntegrity, "object " + std::to_string(o.id.value) + " lists its class label as an attribute");
    }
  }
  std::set<Edge> triples;
  for (const auto& e : g.edges) {
    if (!ids.count(e.source) || !ids.count(e.target)) {
      throw Error(ErrorCode::kIntegrity, "edge " + edge_repr(e) + " references a missing object");
    }
    if (e.source == e.target) throw Error(ErrorCode::kIntegrity, "edge " + edge_repr(e) + " is a self-loop");
    if (e.relation.empty()) throw Error(ErrorCode::kIntegrity, "edge " + edge_repr(e) + " has an empty relation");
    if (!triples.insert(e).second) throw Error(ErrorCode::kIntegrity, "edge " + edge_repr(e) + " is duplicated");
  }
}

CanonicalResult canonicalize_with_map(const SceneGraph& input) {
  const std::size_t n = input.objects.size();
  std::unordered_map<std::uint32_t, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    if (!index.emplace(input.objects[i].id.value, i).second) {
      throw Error(ErrorCode::kIntegrity, "duplicate object id " + std::to_string(input.objects[i].id.value));
    }
  }
  SceneGraph g;
  g.objects = input.objects;
  for (auto& o : g.objects) {
    std::sort(o.attributes.begin(), o.attributes.end());
    o.attributes.erase(std::unique(o.attributes.begin(), o.attributes.end()), o.attributes.end());
  }
  g.edges = clean_edges(input.edges);
  std::vector<std::pair<std::size_t, std::size_t>> endpoints;
  endpoints.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    auto s = index.find(e.source.value);
    auto t = index.find(e.target.value);
    if (s == index.end() || t == index.end()) {
      throw Error(ErrorCode::kIntegrity, "edge " + edge_repr(e) + " references a missing object");
    }
    endpoints.emplace_back(s->second, t->second);
  }

  auto label_key = [&](std::size_t i) {
    const auto& o = g.objects[i];
    return std::tie(o.class_label, o.attributes, o.merge_count);
  };
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return label_key(a) < label_key(b); });
  std::vector<std::size_t> initial(n);
  for (std::size_t k = 0, rank = 0; k < n; ++k) {
    if (k > 0 && label_key(order[k]) != label_key(order[k - 1])) ++rank;
    initial[order[k]] = rank;
  }
  auto colour = refine_colours(g, initial, endpoints);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tuple(label_key(a), colour[a], g.objects[a].id) < std::tuple(label_key(b), colour[b], g.objects[b].id);
  });

  CanonicalResult out;
  out.graph.objects.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    ObjectNode o = g.objects[order[k]];
    NodeId fresh{static_cast<std::uint32_t>(k)};
    out.id_map.emplace(o.id, fresh);
    o.id = fresh;
    out.graph.objects.push_back(std::move(o));
  }
  out.graph.edges.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    out.graph.edges.push_back(Edge{out.id_map.at(e.source), e.relation, out.id_map.at(e.target)});
  }
  std::sort(out.graph.edges.begin(), out.graph.edges.end());
  out.graph.provenance = input.provenance;
  std::sort(out.graph.provenance.begin(), out.graph.provenance.end());
  out.graph.provenance.erase(std::unique(out.graph.provenance.begin(), out.graph.provenance.end()),
                             out.graph.provenance.end());
  return out;
}

SceneGraph canonicalize(const SceneGraph& graph) { return canonicalize_with_map(graph).graph; }

std::uint32_t union_offset(const SceneGraph& a) {
  std::uint32_t offset = 0;
  for (const auto& o : a.objects) offset = std::max(offset, o.id.value + 1);
  return offset;
}

SceneGraph disjoint_union(const SceneGraph& a, const SceneGraph& b) {
  const std::uint32_t offset = union_offset(a);
  SceneGraph out = a;
  out.objects.reserve(a.objects.size() + b.objects.size());
  for (auto o : b.objects) {
    o.id.value += offset;
    out.objects.push_back(std::move(o));
  }
  out.edges.reserve(a.edges.size() + b.edges.size());
  for (const auto& e : b.edges) {
    out.edges.push_back(Edge{NodeId{e.source.value + offset}, e.relation, NodeId{e.target.value + offset}});
  }
  out.provenance.insert(out.provenance.end(), b.provenance.begin(), b.provenance.end());
  return out;
}

nlohmann::ordered_json to_json(const SceneGraph& g) {
  nlohmann::ordered_json j;
  j["objects"] = nlohmann::ordered_json::array();
  for (const auto& o : g.objects) {
    nlohmann::ordered_json jo;
    jo["id"] = o.id.value;
    jo["class"] = o.class_label;
    jo["attributes"] = o.attributes;
    jo["merge_count"] = o.merge_count;
    j["objects"].push_back(std::move(jo));
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : g.edges) {
    nlohmann::ordered_json je;
    je["src"] = e.source.value;
    je["rel"] = e.relation;
    je["dst"] = e.target.value;
    j["edges"].push_back(std::move(je));
  }
  j["provenance"] = g.provenance;
  return j;
}

SceneGraph graph_from_json(const nlohmann::json& j) {
  try {
    SceneGraph g;
    for (const auto& jo : j.at("objects")) {
      std::vector<std::string> attrs;
      if (jo.contains("attributes")) attrs = jo.at("attributes").get<std::vector<std::string>>();
      g.objects.push_back(make_object(NodeId{jo.at("id").get<std::uint32_t>()}, jo.at("class").get<std::string>(),
                                      attrs, jo.value("merge_count", 0u)));
    }
    if (j.contains("edges")) {
      for (const auto& je : j.at("edges")) {
        Edge e{NodeId{je.at("src").get<std::uint32_t>()}, text::normalize_relation(je.at("rel").get<std::string>()),
               NodeId{je.at("dst").get<std::uint32_t>()}};
        if (e.relation.empty()) throw Error(ErrorCode::kIntegrity, "edge " + edge_repr(e) + " has an empty relation");
        g.edges.push_back(std::move(e));
      }
    }
    if (j.contains("provenance")) g.provenance = j.at("provenance").get<std::vector<std::string>>();
    return canonicalize(g);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kInput, std::string("malformed scene graph JSON: ") + ex.what());
  }
}

std::string canonical_bytes(const SceneGraph& graph) { return to_json(canonicalize(graph)).dump(); }

std::string graph_hash(const SceneGraph& graph) { return sha256_hex(canonical_bytes(graph)); }

std::string to_dot(const SceneGraph& g) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '\n') {
        out += "\\n";
        continue;
      }
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    return out + "\"";
  };
  std::ostringstream os;
  os << "digraph scene_graph {\n";
  os << "  node [shape=box];\n";
  for (const auto& o : g.objects) {
    std::string label = o.class_label;
    if (!o.attributes.empty()) label += "\n" + text::join_words(o.attributes, ", ");
    os << "  n" << o.id.value << " [label=" << quote(label)
       << ", tooltip=" << quote("merge_count=" + std::to_string(o.merge_count)) << "];\n";
  }
  for (const auto& e : g.edges) {
    os << "  n" << e.source.value << " -> n" << e.target.value << " [label=" << quote(e.relation) << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace sgc
