#include "sgc/g2t.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "sgc/digest.hpp"
#include "sgc/error.hpp"
#include "sgc/text.hpp"

namespace sgc {
namespace {

std::string noun_phrase(const ObjectNode& o) {
  std::vector<std::string> words = o.attributes;
  words.push_back(o.class_label);
  std::string body = text::join_words(words);
  return std::string(text::indefinite_article(body)) + " " + body;
}

std::string verb_phrase(const std::string& relation) {
  if (text::is_preposition_phrase(relation)) return "is " + relation;
  auto words = text::split_words(relation);
  if (words.empty()) return relation;
  words.front() = text::third_person(words.front());
  return text::join_words(words);
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

std::string_view token_role_name(TokenRole role) {
  switch (role) {
    case TokenRole::kObject: return "object";
    case TokenRole::kAttribute: return "attribute";
    case TokenRole::kRelation: return "relation";
    case TokenRole::kGlobal: return "global";
  }
  return "unknown";
}

std::string AttentionMask::to_base64() const {
  std::vector<std::uint8_t> bytes((n_ * n_ + 7) / 8, 0);
  for (std::size_t k = 0; k < n_ * n_; ++k) {
    if (bits_[k]) bytes[k / 8] |= static_cast<std::uint8_t>(0x80u >> (k % 8));
  }
  return base64_encode(bytes);
}

GraphEncoderInput linearize(const SceneGraph& graph, MaskPolicy policy) {
  GraphEncoderInput out;
  std::map<NodeId, std::size_t> object_token;
  std::map<NodeId, std::vector<std::size_t>> attribute_tokens;
  for (const auto& o : graph.objects) {
    object_token[o.id] = out.tokens.size();
    out.tokens.push_back(GraphToken{o.class_label, TokenRole::kObject, o.id.value});
    for (const auto& a : o.attributes) {
      attribute_tokens[o.id].push_back(out.tokens.size());
      out.tokens.push_back(GraphToken{a, TokenRole::kAttribute, o.id.value});
    }
  }
  std::vector<std::size_t> relation_token;
  for (std::size_t k = 0; k < graph.edges.size(); ++k) {
    relation_token.push_back(out.tokens.size());
    out.tokens.push_back(GraphToken{graph.edges[k].relation, TokenRole::kRelation, static_cast<std::uint32_t>(k)});
  }
  const std::size_t global = out.tokens.size();
  out.tokens.push_back(GraphToken{std::string(kGlobalToken), TokenRole::kGlobal, 0});

  const std::size_t n = out.tokens.size();
  out.mask = AttentionMask(n);
  auto& mask = out.mask;
  if (policy == MaskPolicy::kFull) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) mask.allow(i, j);
    }
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    mask.allow(i, i);
    mask.allow_both(i, global);
  }
  for (const auto& [id, attrs] : attribute_tokens) {
    for (auto a : attrs) mask.allow_both(a, object_token.at(id));
  }
  for (std::size_t k = 0; k < graph.edges.size(); ++k) {
    const auto& e = graph.edges[k];
    auto s = object_token.find(e.source);
    auto t = object_token.find(e.target);
    if (s == object_token.end() || t == object_token.end()) {
      throw Error(ErrorCode::kIntegrity, "edge " + std::to_string(k) + " references a missing object");
    }
    mask.allow_both(relation_token[k], s->second);
    mask.allow_both(relation_token[k], t->second);
    mask.allow_both(s->second, t->second);
    if (policy == MaskPolicy::kAttributesSeeRelations) {
      for (NodeId end : {e.source, e.target}) {
        if (auto it = attribute_tokens.find(end); it != attribute_tokens.end()) {
          for (auto a : it->second) mask.allow_both(a, relation_token[k]);
        }
      }
    }
  }
  return out;
}

std::string realize_template(const SceneGraph& graph) {
  const std::size_t n = graph.objects.size();
  if (n == 0) return {};
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::size_t> src(graph.edges.size()), dst(graph.edges.size());
  for (std::size_t k = 0; k < graph.edges.size(); ++k) {
    src[k] = graph.index_of(graph.edges[k].source);
    dst[k] = graph.index_of(graph.edges[k].target);
    if (src[k] >= n || dst[k] >= n) throw Error(ErrorCode::kIntegrity, "edge references a missing object");
    parent[find_root(parent, src[k])] = find_root(parent, dst[k]);
  }

  struct Component {
    std::uint32_t max_merge = 0;
    std::size_t first = 0;  // smallest member index
    std::vector<std::size_t> members;
    std::vector<std::size_t> edges;
  };
  std::map<std::size_t, Component> by_root;
  for (std::size_t i = 0; i < n; ++i) {
    auto& c = by_root[find_root(parent, i)];
    if (c.members.empty()) c.first = i;
    c.members.push_back(i);
    c.max_merge = std::max(c.max_merge, graph.objects[i].merge_count);
  }
  for (std::size_t k = 0; k < graph.edges.size(); ++k) by_root[find_root(parent, src[k])].edges.push_back(k);

  std::vector<Component> components;
  for (auto& [root, c] : by_root) components.push_back(std::move(c));
  std::sort(components.begin(), components.end(), [](const Component& a, const Component& b) {
    if (a.max_merge != b.max_merge) return a.max_merge > b.max_merge;
    return a.first < b.first;
  });

  std::vector<std::string> sentences;
  for (const auto& c : components) {
    if (c.edges.empty()) {
      sentences.push_back("there is " + noun_phrase(graph.objects[c.members.front()]));
      continue;
    }
    std::string sentence;
    std::size_t prev_subject = n;
    for (auto k : c.edges) {
      const auto& e = graph.edges[k];
      std::string clause;
      if (src[k] == prev_subject) {
        clause = verb_phrase(e.relation);
      } else {
        clause = noun_phrase(graph.objects[src[k]]) + " " + verb_phrase(e.relation);
      }
      clause += " " + noun_phrase(graph.objects[dst[k]]);
      sentence += sentence.empty() ? clause : " and " + clause;
      prev_subject = src[k];
    }
    sentences.push_back(std::move(sentence));
  }
  return text::join_words(sentences, ". ");
}

void DecodeParams::validate() const {
  if (beams < 1 || beams > 64) throw Error(ErrorCode::kValidation, "beams must be in [1, 64]");
  if (max_len < 1 || max_len > 4096) throw Error(ErrorCode::kValidation, "max_len must be in [1, 4096]");
  if (!(length_penalty >= 0.0 && length_penalty <= 10.0)) {
    throw Error(ErrorCode::kValidation, "length_penalty must be in [0, 10]");
  }
  if (!(repetition_penalty >= 1.0 && repetition_penalty <= 10.0)) {
    throw Error(ErrorCode::kValidation, "repetition_penalty must be in [1, 10]");
  }
}

nlohmann::ordered_json export_decoder_request(const GraphEncoderInput& input, const DecodeParams& params) {
  params.validate();
  if (input.mask.size() != input.tokens.size()) {
    throw Error(ErrorCode::kValidation, "mask dimension does not match token count");
  }
  nlohmann::ordered_json j;
  j["schema"] = kDecoderRequestSchema;
  j["tokens"] = nlohmann::ordered_json::array();
  for (const auto& t : input.tokens) {
    nlohmann::ordered_json jt;
    jt["text"] = t.text;
    jt["role"] = token_role_name(t.role);
    if (t.role != TokenRole::kGlobal) jt["owner"] = t.owner;
    j["tokens"].push_back(std::move(jt));
  }
  nlohmann::ordered_json mask;
  mask["dim"] = input.mask.size();
  mask["layout"] = "row-major";
  mask["bit_order"] = "msb-first";
  mask["data"] = input.mask.to_base64();
  j["mask"] = std::move(mask);
  nlohmann::ordered_json p;
  p["beams"] = params.beams;
  p["max_len"] = params.max_len;
  p["length_penalty"] = params.length_penalty;
  p["repetition_penalty"] = params.repetition_penalty;
  j["params"] = std::move(p);
  return j;
}

}  // namespace sgc
