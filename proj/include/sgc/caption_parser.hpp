#pragma once

// Deterministic parser for a constrained English caption grammar.
//
// Grammar (per clause; clauses split on sentence punctuation, commas, and
// conjunctions such as "and"):
//
//   clause    := subject predicate? | "there" COPULA np-list
//   subject   := np | "he" | "she" | "they" | <elided: previous subject>
//   np        := DET* WORD+ (PREP np)*
//   predicate := COPULA PREP np               -> relation PREP
//              | COPULA VERB-ing [PREP] np     -> relation VERB [PREP]
//              | COPULA WORD+                  -> attributes of the subject
//              | VERB [PREP] np                -> relation VERB [PREP]
//              | VERB                          -> attribute VERB-ing
//
// Prepositional phrases attach to the nearest preceding noun phrase. A verb
// that requires an object and has none in a non-initial clause takes the
// previous clause's subject as its object ("... and a crowd watches").
// Anything outside the grammar is skipped and reported as a warning.

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgc/scene_graph.hpp"

namespace sgc {

struct IrEntity {
  std::string id;  // "e1", "e2", ...
  std::string head;
  std::vector<std::string> modifiers;

  bool operator==(const IrEntity&) const = default;
};

struct IrRelation {
  std::string subject;
  std::string predicate;
  std::string object;

  bool operator==(const IrRelation&) const = default;
};

struct SemanticIR {
  std::vector<IrEntity> entities;
  std::vector<IrRelation> relations;

  bool operator==(const SemanticIR&) const = default;
};

struct ParseWarning {
  std::string clause;
  std::string reason;
};

struct ParserOptions {
  std::size_t max_caption_chars = 2048;
};

/// Throws kEmptyInput for blank captions and kSizeLimit past the length cap.
SemanticIR parse_caption(std::string_view caption, std::vector<ParseWarning>* warnings = nullptr,
                         const ParserOptions& options = {});

/// One node per entity, one edge per relation; canonical. Throws kIntegrity
/// when a relation names an undeclared entity.
SceneGraph ir_to_graph(const SemanticIR& ir);

struct SegmentCaptionRecord {
  std::string segment_id;
  std::string caption;
  std::int64_t ordinal = 0;
};

struct SegmentWarning {
  std::string segment_id;
  std::string clause;
  std::string reason;
};

nlohmann::ordered_json to_json(const SegmentWarning& w);

SceneGraph parse_segment(const SegmentCaptionRecord& record, std::vector<SegmentWarning>* warnings = nullptr,
                         const ParserOptions& options = {});

/// Reads SegmentCaptionRecord JSONL one line at a time. Blank lines are
/// skipped; malformed lines throw kInput with the 1-based line number.
class CaptionRecordReader {
 public:
  explicit CaptionRecordReader(std::istream& in) : in_(in) {}
  std::optional<SegmentCaptionRecord> next();
  std::size_t line_number() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

SegmentCaptionRecord record_from_json(const nlohmann::json& j);

}  // namespace sgc
