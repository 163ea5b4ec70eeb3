#include "sgc/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace sgc::text {
namespace {

struct VerbEntry {
  std::string_view base;
  bool doubles = false;     // final consonant doubles before -ing ("sit" -> "sitting")
  bool transitive = false;  // an elided object refers back to the previous subject
};

constexpr VerbEntry kVerbs[] = {
    {"bake"}, {"bark"}, {"bend"}, {"bite"}, {"blow"}, {"bounce"}, {"brush"},
    {"build"}, {"carry", false, true}, {"catch", false, true},
    {"chase", false, true}, {"chat", true}, {"check"}, {"chop", true},
    {"clap", true}, {"clean"}, {"climb"}, {"close"}, {"cook"}, {"crash"}, {"crawl"},
    {"cross"}, {"cry"}, {"cut", true, true}, {"dance"}, {"dig", true},
    {"dive"}, {"drag", true}, {"draw"}, {"drink"}, {"drive"}, {"drop", true},
    {"eat"}, {"enter"}, {"examine", false, true}, {"face"}, {"fall"},
    {"feed", false, true}, {"fill"}, {"fix"}, {"float"}, {"fly"},
    {"fold"}, {"follow", false, true}, {"gather"}, {"grab", true, true},
    {"greet", false, true}, {"grill"}, {"hang"}, {"help", false, true},
    {"hit", true}, {"hold", false, true}, {"hug", true, true}, {"jog", true},
    {"jump"}, {"kick"}, {"kiss", false, true}, {"kneel"}, {"knit", true},
    {"laugh"}, {"lean"}, {"lie"}, {"lift", false, true}, {"listen"},
    {"look"}, {"mix"}, {"move"}, {"observe", false, true}, {"open"},
    {"paint"}, {"park"}, {"pass"}, {"perform"}, {"pet", true, true},
    {"pick"}, {"place"}, {"plant"}, {"play"}, {"point"}, {"pour"},
    {"prepare"}, {"pull", false, true}, {"push", false, true}, {"put", true},
    {"race"}, {"reach"}, {"read"}, {"relax"}, {"rest"}, {"ride", false, true},
    {"roll"}, {"row"}, {"run", true}, {"sail"}, {"serve"}, {"sew"},
    {"shake"}, {"shop", true}, {"show"}, {"sing"}, {"sit", true}, {"skate"},
    {"ski"}, {"sleep"}, {"slice"}, {"slide"}, {"smile"}, {"speak"},
    {"spin", true}, {"splash"}, {"stand"}, {"stare"}, {"step", true},
    {"stir", true}, {"stop", true}, {"surf"}, {"sweep"}, {"swim", true},
    {"swing"}, {"talk"}, {"taste"}, {"teach"}, {"throw", false, true},
    {"tie"}, {"touch", false, true}, {"train"}, {"type"}, {"use", false, true},
    {"wait"}, {"walk"}, {"wash"}, {"watch", false, true}, {"water"},
    {"wave"}, {"wear", false, true}, {"work"}, {"wrap", true}, {"write"},
    {"yell"},
};

std::string third_person_rule(std::string_view base) {
  std::string s(base);
  auto ends = [&](std::string_view suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
  };
  if (s == "have") return "has";
  if (ends("s") || ends("sh") || ends("ch") || ends("x") || ends("z") || ends("o")) return s + "es";
  if (s.size() >= 2 && s.back() == 'y' && std::string_view("aeiou").find(s[s.size() - 2]) == std::string_view::npos) {
    return s.substr(0, s.size() - 1) + "ies";
  }
  return s + "s";
}

std::string progressive_rule(const VerbEntry& v) {
  std::string s(v.base);
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "ie") == 0) return s.substr(0, s.size() - 2) + "ying";
  if (v.doubles) return s + s.back() + "ing";
  if (s.size() >= 2 && s.back() == 'e' && s[s.size() - 2] != 'e' && s[s.size() - 2] != 'y' &&
      s[s.size() - 2] != 'o') {
    return s.substr(0, s.size() - 1) + "ing";
  }
  return s + "ing";
}

struct VerbTables {
  std::unordered_map<std::string, VerbLookup> forms;
  std::unordered_map<std::string, const VerbEntry*> by_base;
};

const VerbTables& verb_tables() {
  static const VerbTables tables = [] {
    VerbTables t;
    for (const auto& v : kVerbs) {
      std::string base(v.base);
      t.by_base.emplace(base, &v);
      t.forms.emplace(third_person_rule(v.base), VerbLookup{base, VerbForm::kThirdPerson});
      t.forms.emplace(progressive_rule(v), VerbLookup{base, VerbForm::kProgressive});
      t.forms.emplace(base, VerbLookup{base, VerbForm::kBase});
    }
    return t;
  }();
  return tables;
}

const std::unordered_map<std::string_view, std::string_view>& irregular_plurals() {
  static const std::unordered_map<std::string_view, std::string_view> m = {
      {"men", "man"},         {"women", "woman"},   {"children", "child"},
      {"people", "person"},   {"feet", "foot"},     {"teeth", "tooth"},
      {"mice", "mouse"},      {"geese", "goose"},   {"knives", "knife"},
      {"leaves", "leaf"},     {"wolves", "wolf"},   {"shelves", "shelf"},
      {"loaves", "loaf"},     {"halves", "half"},   {"wives", "wife"},
      {"lives", "life"},      {"oxen", "ox"},       {"sheep", "sheep"},
      {"fish", "fish"},       {"deer", "deer"},     {"police", "police"},
      {"boys", "boy"},        {"girls", "girl"},    {"kids", "kid"},
      {"ladies", "lady"},     {"babies", "baby"},   {"puppies", "puppy"},
      {"berries", "berry"},   {"cherries", "cherry"}, {"candies", "candy"},
      {"skies", "sky"},       {"cities", "city"},   {"parties", "party"},
      {"scarves", "scarf"},   {"dresses", "dress"}, {"glasses", "glass"},
      {"buses", "bus"},       {"boxes", "box"},     {"dishes", "dish"},
      {"brushes", "brush"},   {"benches", "bench"}, {"couches", "couch"},
      {"sandwiches", "sandwich"}, {"watches", "watch"}, {"potatoes", "potato"},
      {"tomatoes", "tomato"}, {"horses", "horse"},  {"houses", "house"},
      {"beaches", "beach"},   {"coaches", "coach"}, {"matches", "match"},
      {"waves", "wave"},      {"cookies", "cookie"}, {"movies", "movie"},
      {"stairs", "stair"},    {"pans", "pan"},
  };
  return m;
}

// Nouns whose regular plural is reduced by stripping "s".
constexpr std::string_view kNouns[] = {
    "animal", "apple", "arm", "audience", "ball", "balloon", "banana", "bag",
    "bank", "bed", "bench", "bicycle", "bike", "bird", "blanket", "board",
    "boat", "book", "boot", "bottle", "bowl", "box", "boy", "branch", "bread",
    "bridge", "brush", "bucket", "building", "bus", "cake", "camera", "candle",
    "canoe", "cap", "car", "card", "carrot", "cat", "chair", "chef", "child",
    "city", "cliff", "clock", "cloud", "coat", "computer", "counter", "court",
    "cow", "crowd", "cup", "curtain", "cyclist", "desk", "dish", "dog",
    "door", "dress", "drum", "duck", "egg", "elephant", "face", "fence",
    "field", "fire", "flag", "floor", "flower", "food", "forest", "fork",
    "friend", "frisbee", "fruit", "game", "garden", "gift", "girl", "glass",
    "glove", "goal", "grass", "group", "guitar", "gym", "hair", "hand", "hat",
    "head", "helmet", "hill", "horse", "house", "instrument", "jacket",
    "kayak", "keyboard", "kid", "kitchen", "kite", "knife", "ladder", "lake",
    "lamp", "laptop", "leaf", "leg", "light", "man", "map", "mat", "meal",
    "microphone", "mirror", "motorcycle", "mountain", "mouse", "mug",
    "musician", "net", "newspaper", "ocean", "onion", "orange", "oven",
    "painting", "pan", "paper", "park", "path", "pen", "pencil", "person",
    "phone", "piano", "picture", "pillow", "pizza", "plant", "plate",
    "player", "pool", "pot", "puppy", "racket", "rider", "river", "road",
    "rock", "roof", "room", "rope", "runner", "sand", "sandwich", "scarf",
    "screen", "sea", "seat", "shirt", "shoe", "shop", "shore", "sidewalk",
    "sign", "singer", "sink", "skateboard", "ski", "sky", "snow", "sofa",
    "soldier", "spoon", "stage", "stair", "station", "stick", "stone",
    "stove", "street", "student", "sun", "surfboard", "swimmer", "table",
    "teacher", "team", "tent", "toy", "track", "train", "tray", "tree",
    "truck", "umbrella", "vegetable", "wall", "watch", "water", "wave",
    "wheel", "window", "woman", "worker", "yard",
};

const std::unordered_set<std::string_view>& noun_set() {
  static const std::unordered_set<std::string_view> s(std::begin(kNouns), std::end(kNouns));
  return s;
}

const std::unordered_set<std::string_view> kDeterminers = {
    "a", "an", "the", "this", "that", "these", "those", "some", "several",
    "many", "few", "his", "her", "their", "its", "our", "my", "your",
    "another", "each", "every", "one", "two", "three", "four", "five", "six",
    "seven", "eight", "nine", "ten", "eleven", "twelve", "both", "all",
};

const std::unordered_set<std::string_view> kCopulas = {"is", "are", "was", "were", "be"};
const std::unordered_set<std::string_view> kSubjectPronouns = {"he", "she", "they"};
const std::unordered_set<std::string_view> kObjectPronouns = {"him", "her", "them", "it", "it's", "itself", "themselves"};
const std::unordered_set<std::string_view> kClauseBreaks = {"and", "while", "but", "then", "or", ",", ";"};
const std::unordered_set<std::string_view> kAdverbs = {
    "slowly", "quickly", "happily", "carefully", "together", "again", "here",
    "there", "away", "outside", "inside", "around", "alone", "back", "very",
    "nearby", "closely", "loudly", "gently", "still",
};

// Longest entries first so greedy matching picks "in front of" over "in".
const std::vector<std::vector<std::string_view>>& prepositions() {
  static const std::vector<std::vector<std::string_view>> p = [] {
    std::vector<std::vector<std::string_view>> v = {
        {"in", "front", "of"}, {"on", "top", "of"}, {"next", "to"},
        {"close", "to"},       {"out", "of"},       {"inside", "of"},
        {"in"},   {"on"},      {"at"},     {"with"},   {"near"},   {"under"},
        {"over"}, {"behind"},  {"beside"}, {"into"},   {"onto"},   {"from"},
        {"of"},   {"by"},      {"through"}, {"across"}, {"along"}, {"above"},
        {"below"}, {"between"}, {"toward"}, {"towards"}, {"around"}, {"up"},
        {"down"}, {"inside"},  {"outside"}, {"against"}, {"to"},   {"for"},
        {"beneath"}, {"past"},
    };
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return v;
  }();
  return p;
}

}  // namespace

std::string collapse_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> words;
  std::string cur;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

std::string join_words(const std::vector<std::string>& words, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.append(sep);
    out.append(words[i]);
  }
  return out;
}

std::string singularize(std::string_view word) {
  const auto& irr = irregular_plurals();
  if (auto it = irr.find(word); it != irr.end()) return std::string(it->second);
  const auto& nouns = noun_set();
  if (nouns.count(word)) return std::string(word);
  std::string w(word);
  if (w.size() > 3 && w.compare(w.size() - 3, 3, "ies") == 0) {
    std::string stem = w.substr(0, w.size() - 3) + "y";
    if (nouns.count(stem)) return stem;
  }
  if (w.size() > 2 && w.compare(w.size() - 2, 2, "es") == 0) {
    std::string stem = w.substr(0, w.size() - 2);
    if (nouns.count(stem)) return stem;
  }
  if (w.size() > 1 && w.back() == 's') {
    std::string stem = w.substr(0, w.size() - 1);
    if (nouns.count(stem)) return stem;
  }
  return w;
}

std::string normalize_class(std::string_view s) {
  auto words = split_words(collapse_lower(s));
  if (words.empty()) return {};
  words.back() = singularize(words.back());
  return join_words(words);
}

std::string normalize_attribute(std::string_view s) { return collapse_lower(s); }

std::string normalize_relation(std::string_view s) {
  auto words = split_words(collapse_lower(s));
  if (words.empty()) return {};
  if (auto v = lookup_verb(words.front()); v && v->form == VerbForm::kThirdPerson) {
    words.front() = v->base;
  }
  return join_words(words);
}

std::optional<VerbLookup> lookup_verb(std::string_view word) {
  const auto& forms = verb_tables().forms;
  if (auto it = forms.find(std::string(word)); it != forms.end()) return it->second;
  return std::nullopt;
}

bool verb_requires_object(std::string_view base) {
  const auto& by_base = verb_tables().by_base;
  auto it = by_base.find(std::string(base));
  return it != by_base.end() && it->second->transitive;
}

std::string third_person(std::string_view base) { return third_person_rule(base); }

std::string progressive(std::string_view base) {
  const auto& by_base = verb_tables().by_base;
  if (auto it = by_base.find(std::string(base)); it != by_base.end()) return progressive_rule(*it->second);
  return progressive_rule(VerbEntry{base});
}

bool is_determiner(std::string_view w) { return kDeterminers.count(w) > 0; }
bool is_copula(std::string_view w) { return kCopulas.count(w) > 0; }
bool is_subject_pronoun(std::string_view w) { return kSubjectPronouns.count(w) > 0; }
bool is_object_pronoun(std::string_view w) { return kObjectPronouns.count(w) > 0; }
bool is_clause_break(std::string_view w) { return kClauseBreaks.count(w) > 0; }
bool is_adverb(std::string_view w) { return kAdverbs.count(w) > 0; }
bool is_noun(std::string_view w) { return noun_set().count(w) > 0 || irregular_plurals().count(w) > 0; }

std::size_t match_preposition(const std::vector<std::string>& words, std::size_t pos) {
  for (const auto& prep : prepositions()) {
    if (pos + prep.size() > words.size()) continue;
    bool ok = true;
    for (std::size_t k = 0; k < prep.size() && ok; ++k) ok = words[pos + k] == prep[k];
    if (ok) return prep.size();
  }
  return 0;
}

bool is_preposition_phrase(std::string_view phrase) {
  auto words = split_words(phrase);
  return !words.empty() && match_preposition(words, 0) == words.size();
}

std::string_view indefinite_article(std::string_view next_word) {
  if (next_word.empty()) return "a";
  char c = static_cast<char>(std::tolower(static_cast<unsigned char>(next_word.front())));
  // "u" words like "umbrella" take "an"; "uniform"/"used" style exceptions are rare in captions.
  return std::string_view("aeiou").find(c) != std::string_view::npos ? "an" : "a";
}

}  // namespace sgc::text
