#pragma once

// Embedding-based caption scoring with greedy token matching: precision
// averages, over candidate tokens, the best cosine against any reference
// token; recall does the converse; F is their harmonic mean. No IDF weighting.

#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sgc/embedding.hpp"

namespace sgc {

struct TokenEmbeddingSet {
  std::vector<std::string> tokens;
  std::vector<EmbeddingVector> vectors;

  /// Throws kValidation on length mismatch and kDegenerateVector on a zero vector.
  void validate() const;
};

struct PrfScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool f1_undefined = false;  // precision + recall == 0; f1 reported as 0
};

/// Throws kEmptyInput when either set is empty.
PrfScore score_prf(const TokenEmbeddingSet& reference, const TokenEmbeddingSet& candidate);

/// Lowercased tokens split on whitespace and ASCII punctuation.
std::vector<std::string> tokenize_caption(std::string_view caption);

class WordEmbedder {
 public:
  virtual ~WordEmbedder() = default;
  virtual EmbeddingVector embed(const std::string& word) const = 0;
};

/// Whole-word hashed feature plus half-weighted character trigrams, normalized.
class HashedWordEmbedder final : public WordEmbedder {
 public:
  explicit HashedWordEmbedder(std::size_t dimension = 256) : dimension_(dimension) {}
  EmbeddingVector embed(const std::string& word) const override;

 private:
  std::size_t dimension_;
};

/// Word -> vector table from a JSON object; unknown words throw kMissingEmbedding.
class FileWordEmbedder final : public WordEmbedder {
 public:
  static FileWordEmbedder load(const std::string& path);
  static FileWordEmbedder from_json(const nlohmann::json& j);
  EmbeddingVector embed(const std::string& word) const override;

 private:
  std::unordered_map<std::string, EmbeddingVector> table_;
};

TokenEmbeddingSet embed_caption(std::string_view caption, const WordEmbedder& embedder);

nlohmann::ordered_json to_json(const PrfScore& score);

}  // namespace sgc
