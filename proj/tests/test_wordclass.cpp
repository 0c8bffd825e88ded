#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>
#include <string>

#include "modality/errors.hpp"
#include "modality/frequency.hpp"
#include "modality/ingest.hpp"
#include "modality/wordclass.hpp"
#include "testutil.hpp"

using namespace modality;

namespace {

Lexicon lexicon_from(const std::string& text, const std::string& label = "t") {
  std::istringstream in(text);
  return load_lexicon(in, label);
}

Population make_pop(std::initializer_list<std::pair<const char*, uint64_t>>
                        rows) {
  FrequencyTable table;
  for (const auto& [word, count] : rows) table.add(word, count);
  return top_k(table, static_cast<uint32_t>(rows.size()), "pop");
}

}  // namespace

TEST_CASE("word class names round-trip") {
  for (size_t i = 0; i < kWordClassCount; ++i) {
    WordClass c = static_cast<WordClass>(i);
    auto back = word_class_from_string(to_string(c));
    REQUIRE(back.has_value());
    CHECK(*back == c);
  }
  CHECK(!word_class_from_string("article").has_value());
  CHECK(!word_class_from_string("Noun").has_value());
  CHECK(!word_class_from_string("").has_value());
}

TEST_CASE("load_lexicon reads entries, comments and blank lines") {
  Lexicon lex = lexicon_from(
      "# header comment\n"
      "dog\tnoun\n"
      "\n"
      "run\tverb\n"
      "quickly\tadverb\n");
  CHECK(lex.entries.size() == 3);
  CHECK(lex.entries.at("dog") == WordClass::noun);
  CHECK(lex.entries.at("run") == WordClass::verb);
  CHECK(lex.entries.at("quickly") == WordClass::adverb);
  CHECK(lex.overrides == 0);
  CHECK(lex.label == "t");
}

TEST_CASE("load_lexicon lets later lines override and counts them") {
  Lexicon lex = lexicon_from("run\tnoun\nrun\tverb\n");
  CHECK(lex.entries.size() == 1);
  CHECK(lex.entries.at("run") == WordClass::verb);
  CHECK(lex.overrides == 1);
}

TEST_CASE("load_lexicon accepts CRLF line endings") {
  Lexicon lex = lexicon_from("dog\tnoun\r\ncat\tnoun\r\n");
  CHECK(lex.entries.size() == 2);
}

TEST_CASE("load_lexicon rejects malformed lines with the line number") {
  auto expect_error = [](const std::string& text, const char* fragment,
                         const char* line_no) {
    try {
      lexicon_from(text);
      FAIL_CHECK("expected IoError for: " << text);
    } catch (const IoError& e) {
      std::string msg = e.what();
      CHECK(msg.find(fragment) != std::string::npos);
      CHECK(msg.find(std::string("line ") + line_no) != std::string::npos);
    }
  };

  expect_error("dog\tnoun\njusttheword\n", "two tab-separated", "2");
  expect_error("a\tb\tc\n", "two tab-separated", "1");
  expect_error("dog\tcanine\n", "unknown word class", "1");
  expect_error("dog\tnoun\nsox\tunknown\n", "reserved", "2");
  // Keys must already be in cleaned form, or population lookups miss them.
  expect_error("Dog\tnoun\n", "not a cleaned lowercase word", "1");
  expect_error("aaa\tnoun\n", "not a cleaned lowercase word", "1");
  expect_error("don't\tother\n", "not a cleaned lowercase word", "1");
  expect_error("\tnoun\n", "not a cleaned lowercase word", "1");
}

TEST_CASE("load_lexicon_file errors on missing files") {
  CHECK_THROWS_AS(load_lexicon_file("/nonexistent/lex.tsv"), IoError);
}

TEST_CASE("bundled lexicon loads clean") {
  Lexicon lex = load_lexicon_file(testutil::lexicon_path());
  CHECK(lex.label == "english_core");
  CHECK(lex.entries.size() > 5000);
  CHECK(lex.overrides == 0);

  // Spot-check one word per class.
  CHECK(lex.entries.at("dog") == WordClass::noun);
  CHECK(lex.entries.at("i") == WordClass::pronoun);
  CHECK(lex.entries.at("run") == WordClass::verb);
  CHECK(lex.entries.at("quickly") == WordClass::adverb);
  CHECK(lex.entries.at("big") == WordClass::adjective);
  CHECK(lex.entries.at("and") == WordClass::conjunction);
  CHECK(lex.entries.at("the") == WordClass::other);
  CHECK(lex.entries.at("not") == WordClass::adverb);

  // Every key must be a cleaned word (guaranteed by the loader, asserted
  // here against the bundled file as shipped).
  for (const auto& [word, cls] : lex.entries) {
    (void)cls;
    CleanResult cleaned = clean_word(word);
    REQUIRE(cleaned.status == CleanStatus::accepted);
    REQUIRE(cleaned.word == word);
  }
}

TEST_CASE("classify_population counts each word type once") {
  Lexicon lex = lexicon_from(
      "dog\tnoun\ncat\tnoun\nrun\tverb\nquickly\tadverb\n");
  Population pop = make_pop({{"dog", 100}, {"cat", 1}, {"run", 50},
                             {"zzyzx", 7}});
  ClassProfile profile = classify_population(pop, lex);

  CHECK(profile.source_label == "pop");
  CHECK(profile.total == 4);
  CHECK(profile.count(WordClass::noun) == 2);  // dog + cat, counts ignored
  CHECK(profile.count(WordClass::verb) == 1);
  CHECK(profile.count(WordClass::adverb) == 0);
  CHECK(profile.count(WordClass::unknown) == 1);  // zzyzx absent
}

TEST_CASE("nonmatching_class_profile splits by exclusive words") {
  Lexicon lex = lexicon_from(
      "dog\tnoun\ncat\tnoun\nrun\tverb\nbig\tadjective\nthe\tother\n");
  Population a = make_pop({{"the", 9}, {"dog", 5}, {"run", 2}});
  Population b = make_pop({{"the", 8}, {"cat", 4}, {"big", 3}});

  auto [only_a, only_b] = nonmatching_class_profile(a, b, lex);
  CHECK(only_a.total == 2);  // dog, run ("the" is shared)
  CHECK(only_a.count(WordClass::noun) == 1);
  CHECK(only_a.count(WordClass::verb) == 1);
  CHECK(only_b.total == 2);  // cat, big
  CHECK(only_b.count(WordClass::noun) == 1);
  CHECK(only_b.count(WordClass::adjective) == 1);
  CHECK(only_a.source_label == "pop");

  // Totals reconcile with the match count: k - shared on each side.
  CHECK(only_a.total == a.entries.size() - 1);
  CHECK(only_b.total == b.entries.size() - 1);
}

TEST_CASE("nonmatching profile of identical populations is empty") {
  Lexicon lex = lexicon_from("dog\tnoun\ncat\tnoun\n");
  Population a = make_pop({{"dog", 5}, {"cat", 2}});
  auto [only_a, only_b] = nonmatching_class_profile(a, a, lex);
  CHECK(only_a.total == 0);
  CHECK(only_b.total == 0);
}
