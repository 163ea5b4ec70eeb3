#pragma once

// String normalization and the small closed-class English lexicon shared by the
// caption parser, the graph model, and the template realizer.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sgc::text {

/// Lowercases ASCII, trims, and collapses internal whitespace runs to one space.
std::string collapse_lower(std::string_view s);

std::vector<std::string> split_words(std::string_view s);
std::string join_words(const std::vector<std::string>& words, std::string_view sep = " ");

/// Plural to singular for irregular nouns and the bundled noun list. Unknown
/// words are returned unchanged.
std::string singularize(std::string_view word);

std::string normalize_class(std::string_view s);
std::string normalize_attribute(std::string_view s);
/// Lowercased and collapsed; a leading third-person verb is reduced to its base.
std::string normalize_relation(std::string_view s);

enum class VerbForm { kBase, kThirdPerson, kProgressive };

struct VerbLookup {
  std::string base;
  VerbForm form;
};

/// Resolves an inflected verb token against the bundled verb list.
std::optional<VerbLookup> lookup_verb(std::string_view word);
bool verb_requires_object(std::string_view base);
std::string third_person(std::string_view base);
std::string progressive(std::string_view base);

bool is_determiner(std::string_view word);
bool is_copula(std::string_view word);
bool is_subject_pronoun(std::string_view word);
bool is_object_pronoun(std::string_view word);
bool is_clause_break(std::string_view word);
bool is_adverb(std::string_view word);
bool is_noun(std::string_view word);

/// Longest preposition (possibly multi-word, e.g. "in front of") starting at
/// words[pos]; returns the number of words consumed, 0 if none.
std::size_t match_preposition(const std::vector<std::string>& words, std::size_t pos);
bool is_preposition_phrase(std::string_view phrase);

/// "a" or "an" for the word that follows the article.
std::string_view indefinite_article(std::string_view next_word);

}  // namespace sgc::text
