#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>

#include "modality/frequency.hpp"

namespace modality {

enum class WordClass : uint8_t {
  noun,
  pronoun,
  verb,
  adverb,
  adjective,
  conjunction,
  other,
  unknown,
};

inline constexpr size_t kWordClassCount = 8;

const char* to_string(WordClass c);
std::optional<WordClass> word_class_from_string(std::string_view name);

// One class per word. English words straddle classes ("run"); a
// single-count-per-word profile forces picking the most common usage,
// which is what the bundled lexicon does.
struct Lexicon {
  std::unordered_map<std::string, WordClass> entries;
  std::string label;
  uint64_t overrides = 0;  // how many entries were overridden by later lines
};

// Loads TSV "word<TAB>class" ('#' comments allowed). Later duplicates
// override earlier ones and are counted in `overrides`. Keys must already
// be cleaned lowercase words; a malformed line or unknown class name
// throws IoError naming the line.
Lexicon load_lexicon(std::istream& in, std::string label);
Lexicon load_lexicon_file(const std::filesystem::path& path);

struct ClassProfile {
  std::array<uint64_t, kWordClassCount> counts{};
  uint64_t total = 0;
  std::string source_label;

  uint64_t count(WordClass c) const {
    return counts[static_cast<size_t>(c)];
  }
};

// Counts each population word's class once (by word type, unweighted by
// frequency). Words absent from the lexicon count as `unknown`.
ClassProfile classify_population(const Population& pop, const Lexicon& lex);

// Profiles of the words only in A and the words only in B, respectively.
std::pair<ClassProfile, ClassProfile> nonmatching_class_profile(
    const Population& a, const Population& b, const Lexicon& lex);

}  // namespace modality
