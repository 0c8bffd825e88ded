#include "modality/wordclass.hpp"

#include <fstream>
#include <istream>
#include <unordered_set>

#include "modality/errors.hpp"
#include "modality/ingest.hpp"

namespace modality {

const char* to_string(WordClass c) {
  switch (c) {
    case WordClass::noun: return "noun";
    case WordClass::pronoun: return "pronoun";
    case WordClass::verb: return "verb";
    case WordClass::adverb: return "adverb";
    case WordClass::adjective: return "adjective";
    case WordClass::conjunction: return "conjunction";
    case WordClass::other: return "other";
    case WordClass::unknown: return "unknown";
  }
  return "unknown";
}

std::optional<WordClass> word_class_from_string(std::string_view name) {
  for (size_t i = 0; i < kWordClassCount; ++i) {
    WordClass c = static_cast<WordClass>(i);
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

Lexicon load_lexicon(std::istream& in, std::string label) {
  Lexicon lex;
  lex.label = std::move(label);

  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    auto err = [&](const std::string& what) {
      return IoError("lexicon '" + lex.label + "' line " +
                     std::to_string(line_no) + ": " + what);
    };

    size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw err("expected exactly two tab-separated fields");
    }
    std::string word = line.substr(0, tab);
    std::string class_name = line.substr(tab + 1);

    // Keys must match the cleaned form exactly, or lookups of cleaned
    // corpus words would silently miss them.
    CleanResult cleaned = clean_word(word);
    if (cleaned.status != CleanStatus::accepted || cleaned.word != word) {
      throw err("word '" + word + "' is not a cleaned lowercase word");
    }
    auto cls = word_class_from_string(class_name);
    if (!cls) throw err("unknown word class '" + class_name + "'");
    if (*cls == WordClass::unknown) {
      throw err("'unknown' is reserved for words absent from the lexicon");
    }

    auto [it, inserted] = lex.entries.insert_or_assign(std::move(word), *cls);
    if (!inserted) ++lex.overrides;
  }
  if (in.bad()) throw IoError("read error in lexicon '" + lex.label + "'");
  return lex;
}

Lexicon load_lexicon_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("no such lexicon: " + path.string());
  return load_lexicon(in, path.stem().string());
}

namespace {

void tally(const std::string& word, const Lexicon& lex, ClassProfile& out) {
  auto it = lex.entries.find(word);
  WordClass c = (it == lex.entries.end()) ? WordClass::unknown : it->second;
  out.counts[static_cast<size_t>(c)] += 1;
  out.total += 1;
}

}  // namespace

ClassProfile classify_population(const Population& pop, const Lexicon& lex) {
  ClassProfile profile;
  profile.source_label = pop.source_label;
  for (const auto& e : pop.entries) tally(e.word, lex, profile);
  return profile;
}

std::pair<ClassProfile, ClassProfile> nonmatching_class_profile(
    const Population& a, const Population& b, const Lexicon& lex) {
  std::unordered_set<std::string_view> words_a, words_b;
  words_a.reserve(a.entries.size() * 2);
  words_b.reserve(b.entries.size() * 2);
  for (const auto& e : a.entries) words_a.insert(e.word);
  for (const auto& e : b.entries) words_b.insert(e.word);

  ClassProfile only_a, only_b;
  only_a.source_label = a.source_label;
  only_b.source_label = b.source_label;
  for (const auto& e : a.entries) {
    if (!words_b.count(e.word)) tally(e.word, lex, only_a);
  }
  for (const auto& e : b.entries) {
    if (!words_a.count(e.word)) tally(e.word, lex, only_b);
  }
  return {std::move(only_a), std::move(only_b)};
}

}  // namespace modality
