#include "sgc/eval.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>

#include "sgc/error.hpp"
#include "sgc/simd/kernels.hpp"

namespace sgc {
namespace {

// mean over rows of the row-wise maximum of sim(row, col)
template <class Sim>
double mean_best(std::size_t rows, std::size_t cols, Sim sim) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cols; ++j) best = std::max(best, sim(i, j));
    sum += best;
  }
  return sum / static_cast<double>(rows);
}

}  // namespace

void TokenEmbeddingSet::validate() const {
  if (tokens.size() != vectors.size()) throw Error(ErrorCode::kValidation, "token and vector counts differ");
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].norm() == 0.0) {
      throw Error(ErrorCode::kDegenerateVector, "token \"" + tokens[i] + "\" has a zero vector");
    }
  }
}

PrfScore score_prf(const TokenEmbeddingSet& reference, const TokenEmbeddingSet& candidate) {
  if (reference.vectors.empty() || candidate.vectors.empty()) {
    throw Error(ErrorCode::kEmptyInput, "score_prf needs non-empty reference and candidate sets");
  }
  reference.validate();
  candidate.validate();
  PrfScore s;
  s.precision = mean_best(candidate.vectors.size(), reference.vectors.size(), [&](std::size_t c, std::size_t r) {
    return cosine(reference.vectors[r], candidate.vectors[c]);
  });
  s.recall = mean_best(reference.vectors.size(), candidate.vectors.size(), [&](std::size_t r, std::size_t c) {
    return cosine(reference.vectors[r], candidate.vectors[c]);
  });
  double denom = s.precision + s.recall;
  if (denom == 0.0) {
    s.f1 = 0.0;
    s.f1_undefined = true;
  } else {
    s.f1 = 2.0 * s.precision * s.recall / denom;
  }
  return s;
}

std::vector<std::string> tokenize_caption(std::string_view caption) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : caption) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c) || (std::ispunct(c) && ch != '\'' && ch != '-')) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

EmbeddingVector HashedWordEmbedder::embed(const std::string& word) const {
  std::vector<double> acc(dimension_, 0.0);
  simd::axpy(1.0, hashed_feature("word:" + word, dimension_).values(), acc);
  std::string padded = "#" + word + "#";
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    simd::axpy(0.5, hashed_feature("tri:" + padded.substr(i, 3), dimension_).values(), acc);
  }
  return EmbeddingVector(std::move(acc)).normalized();
}

FileWordEmbedder FileWordEmbedder::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open word vector file " + path);
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kInput, "malformed word vector file " + path + ": " + ex.what());
  }
}

FileWordEmbedder FileWordEmbedder::from_json(const nlohmann::json& j) {
  FileWordEmbedder e;
  for (const auto& [word, arr] : j.items()) e.table_.emplace(word, EmbeddingVector(arr.get<std::vector<double>>()));
  return e;
}

EmbeddingVector FileWordEmbedder::embed(const std::string& word) const {
  auto it = table_.find(word);
  if (it == table_.end()) throw Error(ErrorCode::kMissingEmbedding, "no vector for word \"" + word + "\"");
  return it->second;
}

TokenEmbeddingSet embed_caption(std::string_view caption, const WordEmbedder& embedder) {
  TokenEmbeddingSet set;
  set.tokens = tokenize_caption(caption);
  set.vectors.reserve(set.tokens.size());
  for (const auto& t : set.tokens) set.vectors.push_back(embedder.embed(t));
  return set;
}

nlohmann::ordered_json to_json(const PrfScore& score) {
  nlohmann::ordered_json j;
  j["P"] = score.precision;
  j["R"] = score.recall;
  j["F"] = score.f1;
  if (score.f1_undefined) j["F_undefined"] = true;
  return j;
}

}  // namespace sgc
