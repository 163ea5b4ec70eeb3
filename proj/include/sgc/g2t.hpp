#pragma once

// Graph-to-text bridge: the token sequence and attention mask a graph encoder
// consumes, a deterministic template realizer, and the JSON request format for
// external decoders.

#include <cstdint>
#include <string>
#include <vector>

#include "sgc/scene_graph.hpp"

namespace sgc {

enum class TokenRole { kObject, kAttribute, kRelation, kGlobal };

std::string_view token_role_name(TokenRole role);

struct GraphToken {
  std::string text;
  TokenRole role;
  // Owning node id for object/attribute tokens; edge index for relation
  // tokens; unused for the global token.
  std::uint32_t owner = 0;

  bool operator==(const GraphToken&) const = default;
};

/// Square boolean matrix; allowed(i, j) means token i may attend to token j.
class AttentionMask {
 public:
  AttentionMask() = default;
  explicit AttentionMask(std::size_t n) : n_(n), bits_(n * n, false) {}

  std::size_t size() const { return n_; }
  bool allowed(std::size_t i, std::size_t j) const { return bits_[i * n_ + j]; }
  void allow(std::size_t i, std::size_t j) { bits_[i * n_ + j] = true; }
  void allow_both(std::size_t i, std::size_t j) {
    allow(i, j);
    allow(j, i);
  }

  /// Row-major bits packed MSB-first into bytes, base64 encoded.
  std::string to_base64() const;

  bool operator==(const AttentionMask&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<bool> bits_;
};

enum class MaskPolicy {
  kEdgeRestricted,            // default: attention only along graph edges
  kAttributesSeeRelations,    // also lets attribute tokens see their owner's relation tokens
  kFull,                      // unrestricted
};

struct GraphEncoderInput {
  std::vector<GraphToken> tokens;
  AttentionMask mask;
};

inline constexpr std::string_view kGlobalToken = "<global>";

/// Tokens in canonical node order (class token, then attribute tokens), then
/// one relation token per edge in canonical edge order, then the global token.
/// Mask: diagonal; attribute <-> owner object; relation <-> both endpoint
/// objects; object <-> object for nodes joined by an edge; global <-> all.
GraphEncoderInput linearize(const SceneGraph& graph, MaskPolicy policy = MaskPolicy::kEdgeRestricted);

/// One clause per edge, grouped into one sentence per connected component
/// (components by max merge count desc). Consecutive edges from the same
/// subject share it ("a man rides a horse and holds a whip"). Isolated nodes
/// become "there is a <noun>". Sentences are joined by ". ".
std::string realize_template(const SceneGraph& graph);

struct DecodeParams {
  std::uint32_t beams = 5;
  std::uint32_t max_len = 32;
  double length_penalty = 0.6;
  double repetition_penalty = 1.0;

  /// Short-caption decoding.
  static DecodeParams short_caption() { return {}; }
  /// Paragraph decoding: three beams, up to 400 tokens, repetition penalty 3.0.
  static DecodeParams paragraph() { return DecodeParams{3, 400, 1.0, 3.0}; }

  /// Throws kValidation unless beams in [1, 64], max_len in [1, 4096],
  /// length_penalty in [0, 10], repetition_penalty in [1, 10].
  void validate() const;
};

inline constexpr std::string_view kDecoderRequestSchema = "g2t-request/v1";

nlohmann::ordered_json export_decoder_request(const GraphEncoderInput& input, const DecodeParams& params);

}  // namespace sgc
