#include "sgc/caption_parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "sgc/error.hpp"
#include "sgc/text.hpp"

namespace sgc {
namespace {

constexpr std::string_view kSentenceBreak = ".";

std::vector<std::string> tokenize(std::string_view caption) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (cur.size() > 2 && cur.compare(cur.size() - 2, 2, "'s") == 0) cur.resize(cur.size() - 2);
    while (!cur.empty() && (cur.back() == '-' || cur.back() == '\'')) cur.pop_back();
    while (!cur.empty() && (cur.front() == '-' || cur.front() == '\'')) cur.erase(cur.begin());
    if (!cur.empty()) tokens.push_back(cur);
    cur.clear();
  };
  for (char ch : caption) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || ch == '-' || ch == '\'' || c >= 0x80) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (ch == ',' || ch == ';') {
      flush();
      tokens.emplace_back(1, ch);
    } else if (ch == '.' || ch == '!' || ch == '?' || ch == ':') {
      flush();
      tokens.emplace_back(kSentenceBreak);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

bool is_numeral(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

class ClauseParser {
 public:
  ClauseParser(SemanticIR& ir, std::vector<ParseWarning>* warnings) : ir_(ir), warnings_(warnings) {}

  void begin_sentence() {
    prev_subject_.reset();
    first_clause_ = true;
  }

  void parse(const std::vector<std::string>& words) {
    if (words.empty()) return;
    words_ = &words;
    pos_ = 0;
    parse_clause();
    first_clause_ = false;
  }

 private:
  const std::string& at(std::size_t i) const { return (*words_)[i]; }
  bool done() const { return pos_ >= words_->size(); }
  std::string clause_text() const { return text::join_words(*words_); }

  void warn(std::string reason) {
    if (warnings_) warnings_->push_back(ParseWarning{clause_text(), std::move(reason)});
  }

  std::string new_entity(std::string head, std::vector<std::string> modifiers) {
    std::string id = "e" + std::to_string(ir_.entities.size() + 1);
    ir_.entities.push_back(IrEntity{id, std::move(head), std::move(modifiers)});
    return id;
  }

  IrEntity& entity(const std::string& id) {
    return ir_.entities.at(static_cast<std::size_t>(std::stoul(id.substr(1))) - 1);
  }

  void skip_adverbs() {
    while (!done() && text::is_adverb(at(pos_))) ++pos_;
  }

  bool is_verb_form(std::string_view w) const { return text::lookup_verb(w).has_value(); }

  bool is_function_word(std::string_view w) const {
    return text::is_determiner(w) || text::is_copula(w) || text::is_clause_break(w) ||
           text::is_subject_pronoun(w) || text::is_object_pronoun(w) || text::is_adverb(w) ||
           text::match_preposition(*words_, pos_) > 0;
  }

  // A noun phrase can start here (determiner or content word).
  bool np_starts(bool in_predicate) const {
    if (done()) return false;
    const auto& w = at(pos_);
    if (text::is_determiner(w) || is_numeral(w)) {
      // "her" alone is an object pronoun; followed by a word it is a determiner.
      return w != "her" || pos_ + 1 < words_->size();
    }
    if (is_function_word(w)) return false;
    if (!in_predicate) return true;
    return !is_verb_form(w) || text::is_noun(w);
  }

  // np := DET* WORD+ (PREP np)*. Returns the entity id, or nullopt when no
  // content word follows the determiners.
  std::optional<std::string> parse_np(bool in_predicate) {
    while (!done() && (text::is_determiner(at(pos_)) || is_numeral(at(pos_)))) ++pos_;
    std::vector<std::string> content;
    while (!done()) {
      const auto& w = at(pos_);
      if (is_function_word(w)) break;
      if (!content.empty() && is_verb_form(w) && !(in_predicate && text::is_noun(w))) break;
      content.push_back(w);
      ++pos_;
    }
    if (content.empty()) return std::nullopt;
    std::string head = text::singularize(content.back());
    content.pop_back();
    std::string id = new_entity(std::move(head), std::move(content));
    while (!done()) {
      std::size_t plen = text::match_preposition(*words_, pos_);
      if (plen == 0) break;
      std::size_t save = pos_;
      pos_ += plen;
      if (!np_starts(in_predicate)) {
        pos_ = save;
        break;
      }
      std::vector<std::string> prep(words_->begin() + static_cast<std::ptrdiff_t>(save),
                                    words_->begin() + static_cast<std::ptrdiff_t>(pos_));
      auto pp = parse_np(in_predicate);
      if (!pp) {
        pos_ = save;
        break;
      }
      ir_.relations.push_back(IrRelation{id, text::join_words(prep), *pp});
    }
    return id;
  }

  void parse_clause() {
    std::optional<std::string> previous = prev_subject_;
    const auto& w0 = at(0);

    if (w0 == "there" && words_->size() > 1 && text::is_copula(at(1))) {
      pos_ = 2;
      if (!parse_np(true)) warn("existential clause without a noun phrase");
      finish();
      return;
    }

    std::optional<std::string> subject;
    if (text::is_subject_pronoun(w0)) {
      subject = new_entity("person", {});
      pos_ = 1;
    } else if (text::is_object_pronoun(w0) && !(w0 == "her" && words_->size() > 1 && np_starts(false))) {
      warn("unresolved pronoun subject");
      return;
    } else if (!first_clause_ && previous && (text::is_copula(w0) || is_verb_form(w0))) {
      subject = previous;  // elided subject: "... and waves"
    } else {
      subject = parse_np(false);
      if (!subject) {
        warn("no noun phrase recognized");
        return;
      }
    }
    prev_subject_ = subject;
    parse_predicate(*subject, previous);
  }

  void parse_predicate(const std::string& subject, const std::optional<std::string>& previous) {
    skip_adverbs();
    if (done()) return;

    if (text::is_copula(at(pos_))) {
      ++pos_;
      skip_adverbs();
      if (done()) {
        warn("copula without complement");
        return;
      }
      if (auto v = text::lookup_verb(at(pos_)); v && v->form == text::VerbForm::kProgressive) {
        ++pos_;
        parse_verb_phrase(subject, v->base, previous);
        return;
      }
      if (std::size_t plen = text::match_preposition(*words_, pos_); plen > 0) {
        std::string prep = text::join_words({words_->begin() + static_cast<std::ptrdiff_t>(pos_),
                                             words_->begin() + static_cast<std::ptrdiff_t>(pos_ + plen)});
        pos_ += plen;
        attach_object(subject, prep);
        return;
      }
      if (text::is_determiner(at(pos_))) {
        warn("predicate nominal is outside the grammar");
        pos_ = words_->size();
        return;
      }
      while (!done() && !is_function_word(at(pos_))) entity(subject).modifiers.push_back(at(pos_++));
      finish();
      return;
    }

    if (auto v = text::lookup_verb(at(pos_))) {
      ++pos_;
      parse_verb_phrase(subject, v->base, previous);
      return;
    }

    warn("no predicate recognized");
    pos_ = words_->size();
  }

  void parse_verb_phrase(const std::string& subject, const std::string& verb,
                         const std::optional<std::string>& previous) {
    skip_adverbs();
    if (std::size_t plen = text::match_preposition(*words_, pos_); plen > 0) {
      std::size_t save = pos_;
      pos_ += plen;
      if (np_starts(true)) {
        std::string rel = verb;
        for (std::size_t k = save; k < save + plen; ++k) rel += " " + at(k);
        attach_object(subject, rel);
        return;
      }
      pos_ = save + plen;
      entity(subject).modifiers.push_back(text::progressive(verb));
      finish();
      return;
    }
    if (np_starts(true)) {
      attach_object(subject, verb);
      return;
    }
    if (!done() && text::is_object_pronoun(at(pos_))) {
      warn("unresolved pronoun object");
      pos_ = words_->size();
      return;
    }
    if (!first_clause_ && previous && *previous != subject && text::verb_requires_object(verb)) {
      ir_.relations.push_back(IrRelation{subject, verb, *previous});
    } else {
      entity(subject).modifiers.push_back(text::progressive(verb));
    }
    finish();
  }

  void attach_object(const std::string& subject, const std::string& relation) {
    skip_adverbs();
    if (!done() && text::is_object_pronoun(at(pos_)) && !np_starts(true)) {
      warn("unresolved pronoun object");
      pos_ = words_->size();
      return;
    }
    auto object = parse_np(true);
    if (!object) {
      warn("relation \"" + relation + "\" without an object");
      pos_ = words_->size();
      return;
    }
    ir_.relations.push_back(IrRelation{subject, relation, *object});
    finish();
  }

  void finish() {
    skip_adverbs();
    if (!done()) {
      warn("unparsed trailing words");
      pos_ = words_->size();
    }
  }

  SemanticIR& ir_;
  std::vector<ParseWarning>* warnings_;
  const std::vector<std::string>* words_ = nullptr;
  std::size_t pos_ = 0;
  std::optional<std::string> prev_subject_;
  bool first_clause_ = true;
};

}  // namespace

SemanticIR parse_caption(std::string_view caption, std::vector<ParseWarning>* warnings,
                         const ParserOptions& options) {
  if (text::collapse_lower(caption).empty()) throw Error(ErrorCode::kEmptyInput, "caption is empty");
  if (caption.size() > options.max_caption_chars) {
    throw Error(ErrorCode::kSizeLimit, "caption has " + std::to_string(caption.size()) +
                                           " characters, limit is " + std::to_string(options.max_caption_chars));
  }
  SemanticIR ir;
  ClauseParser parser(ir, warnings);
  parser.begin_sentence();
  std::vector<std::string> clause;
  for (const auto& tok : tokenize(caption)) {
    if (tok == kSentenceBreak) {
      parser.parse(clause);
      clause.clear();
      parser.begin_sentence();
    } else if (text::is_clause_break(tok)) {
      parser.parse(clause);
      clause.clear();
    } else {
      clause.push_back(tok);
    }
  }
  parser.parse(clause);
  return ir;
}

SceneGraph ir_to_graph(const SemanticIR& ir) {
  GraphBuilder builder;
  std::map<std::string, NodeId> ids;
  for (const auto& e : ir.entities) {
    if (!ids.emplace(e.id, builder.add_object(e.head, e.modifiers)).second) {
      throw Error(ErrorCode::kIntegrity, "entity id " + e.id + " declared twice");
    }
  }
  for (const auto& r : ir.relations) {
    auto s = ids.find(r.subject);
    auto o = ids.find(r.object);
    if (s == ids.end() || o == ids.end()) {
      throw Error(ErrorCode::kIntegrity,
                  "relation (" + r.subject + ", " + r.predicate + ", " + r.object + ") references an undeclared entity");
    }
    builder.add_edge(s->second, r.predicate, o->second);
  }
  return builder.build();
}

nlohmann::ordered_json to_json(const SegmentWarning& w) {
  nlohmann::ordered_json j;
  j["segment_id"] = w.segment_id;
  j["clause"] = w.clause;
  j["reason"] = w.reason;
  return j;
}

SceneGraph parse_segment(const SegmentCaptionRecord& record, std::vector<SegmentWarning>* warnings,
                         const ParserOptions& options) {
  std::vector<ParseWarning> local;
  auto graph = ir_to_graph(parse_caption(record.caption, &local, options));
  graph.provenance = {record.segment_id};
  if (warnings) {
    for (auto& w : local) warnings->push_back(SegmentWarning{record.segment_id, std::move(w.clause), std::move(w.reason)});
  }
  return graph;
}

SegmentCaptionRecord record_from_json(const nlohmann::json& j) {
  SegmentCaptionRecord r;
  r.segment_id = j.at("segment_id").get<std::string>();
  r.caption = j.at("caption").get<std::string>();
  r.ordinal = j.value("ordinal", std::int64_t{0});
  if (r.segment_id.empty()) throw Error(ErrorCode::kInput, "segment_id is empty");
  if (r.ordinal < 0) throw Error(ErrorCode::kInput, "ordinal is negative");
  return r;
}

std::optional<SegmentCaptionRecord> CaptionRecordReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (text::collapse_lower(line).empty()) continue;
    try {
      return record_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::kInput, "line " + std::to_string(line_) + ": " + ex.what());
    } catch (const Error& ex) {
      throw Error(ErrorCode::kInput, "line " + std::to_string(line_) + ": " + ex.what());
    }
  }
  return std::nullopt;
}

}  // namespace sgc
