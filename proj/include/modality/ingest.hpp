#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "modality/frequency.hpp"

namespace modality {

enum class CorpusKind { ngram, twitter, irc, transcript, plain };

const char* to_string(CorpusKind kind);
// Throws UsageError on an unrecognized name.
CorpusKind corpus_kind_from_string(std::string_view name);

// Audit counters for one ingest run. Token counters are weighted by record
// count for the ngram kind (a rejected gram with count 500 adds 500).
struct CleanReport {
  uint64_t lines_read = 0;
  uint64_t tokens_emitted = 0;
  uint64_t tokens_rejected_nonletter = 0;
  uint64_t tokens_rejected_repeat = 0;
  uint64_t records_dropped_linkonly = 0;   // twitter only
  uint64_t records_dropped_duplicate = 0;  // twitter only
  uint64_t lines_malformed = 0;            // ngram only
  uint64_t bytes_replaced = 0;             // invalid UTF-8 bytes replaced
};

enum class CleanStatus { accepted, rejected_nonletter, rejected_repeat };

struct CleanResult {
  CleanStatus status = CleanStatus::rejected_nonletter;
  std::string word;  // filled only when accepted
};

// Lowercases ASCII letters and accepts the token iff it then consists
// solely of a-z with no run of 3+ identical consecutive letters.
CleanResult clean_word(std::string_view raw);

enum class NgramParseStatus { record, comment, malformed };

struct NgramRecord {
  NgramParseStatus status = NgramParseStatus::malformed;
  std::string_view gram;
  uint64_t count = 0;
};

// Parses one tab-separated 1-gram line. ngram_cols selects the layout:
// 2 = "gram<TAB>count", 5 = "gram<TAB>year<TAB>match_count<TAB>page_count
// <TAB>volume_count" (count taken from column 3). '#'-prefixed lines are
// comments, so a persisted FrequencyTable re-ingests cleanly.
NgramRecord parse_ngram_record(std::string_view line, int ngram_cols = 2);

// Tokens of one chat message body with any leading addressing prefix
// (first whitespace token ending in ':') dropped.
std::vector<std::string_view> parse_irc_line(std::string_view line);

// Removes a leading "[timestamp]" and "<nick>" wrapper when present, for
// logs that still carry them.
std::string_view irc_strip_wrapper(std::string_view line);

// True for tokens that look like links: http://, https:// or www. prefix,
// case-insensitively.
bool is_url_token(std::string_view token);

// Replaces every byte that is not part of a valid UTF-8 sequence
// (RFC 3629: no surrogates, nothing above U+10FFFF, no overlong forms)
// with U+FFFD and returns how many bytes were replaced. The scan re-syncs
// one byte after each failure, so each offending byte counts once.
uint64_t replace_invalid_utf8(std::string& line);

struct IngestOptions {
  int ngram_cols = 2;             // 2 or 5
  bool irc_strip_wrapper = false;
};

struct IngestResult {
  FrequencyTable table;
  CleanReport report;
};

// Streams a corpus line by line into a FrequencyTable; memory stays
// proportional to the number of unique cleaned words. Kind selects the
// per-line rule set; see CleanReport for everything that is counted.
IngestResult ingest_corpus(std::istream& in, CorpusKind kind,
                           const IngestOptions& options = {});

// ingest_corpus over a file. Throws IoError when the file cannot be opened.
IngestResult ingest_file(const std::filesystem::path& path, CorpusKind kind,
                         const IngestOptions& options = {});

}  // namespace modality
