#include "modality/ingest.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <unordered_set>

#include "modality/errors.hpp"
#include "modality/rng.hpp"

namespace modality {

namespace {

constexpr std::string_view kReplacementChar = "\xEF\xBF\xBD";  // U+FFFD

bool is_space_byte(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u == ' ' || u == '\t' || u == '\n' || u == '\r' || u == '\f' ||
         u == '\v';
}

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> tokens;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space_byte(text[i])) ++i;
    size_t start = i;
    while (i < text.size() && !is_space_byte(text[i])) ++i;
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  return tokens;
}

// Strict uint64 parse: nonempty, all digits, no overflow.
bool parse_count(std::string_view field, uint64_t& out) {
  if (field.empty()) return false;
  for (char c : field) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

const char* to_string(CorpusKind kind) {
  switch (kind) {
    case CorpusKind::ngram: return "ngram";
    case CorpusKind::twitter: return "twitter";
    case CorpusKind::irc: return "irc";
    case CorpusKind::transcript: return "transcript";
    case CorpusKind::plain: return "plain";
  }
  return "?";
}

CorpusKind corpus_kind_from_string(std::string_view name) {
  if (name == "ngram") return CorpusKind::ngram;
  if (name == "twitter") return CorpusKind::twitter;
  if (name == "irc") return CorpusKind::irc;
  if (name == "transcript") return CorpusKind::transcript;
  if (name == "plain") return CorpusKind::plain;
  throw UsageError("unknown corpus kind '" + std::string(name) +
                   "' (expected ngram, twitter, irc, transcript or plain)");
}

CleanResult clean_word(std::string_view raw) {
  CleanResult result;
  if (raw.empty()) {
    result.status = CleanStatus::rejected_nonletter;
    return result;
  }
  std::string lowered;
  lowered.reserve(raw.size());
  for (char c : raw) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + ('a' - 'A'));
    if (c < 'a' || c > 'z') {
      result.status = CleanStatus::rejected_nonletter;
      return result;
    }
    lowered.push_back(c);
  }
  for (size_t i = 2; i < lowered.size(); ++i) {
    if (lowered[i] == lowered[i - 1] && lowered[i] == lowered[i - 2]) {
      result.status = CleanStatus::rejected_repeat;
      return result;
    }
  }
  result.status = CleanStatus::accepted;
  result.word = std::move(lowered);
  return result;
}

NgramRecord parse_ngram_record(std::string_view line, int ngram_cols) {
  NgramRecord rec;
  if (!line.empty() && line.front() == '#') {
    rec.status = NgramParseStatus::comment;
    return rec;
  }
  auto fields = split_tabs(line);
  size_t want = ngram_cols == 5 ? 5 : 2;
  size_t count_field = ngram_cols == 5 ? 2 : 1;
  if (fields.size() != want) {
    rec.status = NgramParseStatus::malformed;
    return rec;
  }
  uint64_t count = 0;
  if (!parse_count(fields[count_field], count)) {
    rec.status = NgramParseStatus::malformed;
    return rec;
  }
  rec.status = NgramParseStatus::record;
  rec.gram = fields[0];
  rec.count = count;
  return rec;
}

std::vector<std::string_view> parse_irc_line(std::string_view line) {
  auto tokens = split_whitespace(line);
  if (!tokens.empty() && tokens.front().size() >= 1 &&
      tokens.front().back() == ':') {
    tokens.erase(tokens.begin());
  }
  return tokens;
}

std::string_view irc_strip_wrapper(std::string_view line) {
  size_t i = 0;
  auto skip_spaces = [&] {
    while (i < line.size() && is_space_byte(line[i])) ++i;
  };
  skip_spaces();
  if (i < line.size() && line[i] == '[') {
    size_t close = line.find(']', i);
    if (close == std::string_view::npos) return line.substr(i);
    i = close + 1;
    skip_spaces();
  }
  if (i < line.size() && line[i] == '<') {
    size_t close = line.find('>', i);
    if (close == std::string_view::npos) return line.substr(i);
    i = close + 1;
    skip_spaces();
  }
  return line.substr(i);
}

bool is_url_token(std::string_view token) {
  auto has_prefix = [&](std::string_view prefix) {
    if (token.size() < prefix.size()) return false;
    for (size_t i = 0; i < prefix.size(); ++i) {
      char c = token[i];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + ('a' - 'A'));
      if (c != prefix[i]) return false;
    }
    return true;
  };
  return has_prefix("http://") || has_prefix("https://") ||
         has_prefix("www.");
}

uint64_t replace_invalid_utf8(std::string& line) {
  const unsigned char* bytes =
      reinterpret_cast<const unsigned char*>(line.data());
  const size_t n = line.size();

  // Fast path: pure ASCII needs no rewrite.
  bool ascii = true;
  for (size_t i = 0; i < n; ++i) {
    if (bytes[i] >= 0x80) {
      ascii = false;
      break;
    }
  }
  if (ascii) return 0;

  std::string out;
  out.reserve(n);
  uint64_t replaced = 0;
  size_t i = 0;
  while (i < n) {
    unsigned char b0 = bytes[i];
    if (b0 < 0x80) {
      out.push_back(static_cast<char>(b0));
      ++i;
      continue;
    }
    size_t need;
    unsigned char lo, hi;  // allowed range of the first continuation byte
    if (b0 >= 0xC2 && b0 <= 0xDF) {
      need = 1; lo = 0x80; hi = 0xBF;
    } else if (b0 == 0xE0) {
      need = 2; lo = 0xA0; hi = 0xBF;
    } else if ((b0 >= 0xE1 && b0 <= 0xEC) || b0 == 0xEE || b0 == 0xEF) {
      need = 2; lo = 0x80; hi = 0xBF;
    } else if (b0 == 0xED) {
      need = 2; lo = 0x80; hi = 0x9F;
    } else if (b0 == 0xF0) {
      need = 3; lo = 0x90; hi = 0xBF;
    } else if (b0 >= 0xF1 && b0 <= 0xF3) {
      need = 3; lo = 0x80; hi = 0xBF;
    } else if (b0 == 0xF4) {
      need = 3; lo = 0x80; hi = 0x8F;
    } else {
      out.append(kReplacementChar);
      ++replaced;
      ++i;
      continue;
    }
    bool ok = i + need < n;
    if (ok) {
      for (size_t j = 1; j <= need; ++j) {
        unsigned char c = bytes[i + j];
        unsigned char lo_j = (j == 1) ? lo : 0x80;
        unsigned char hi_j = (j == 1) ? hi : 0xBF;
        if (c < lo_j || c > hi_j) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      out.append(line, i, need + 1);
      i += need + 1;
    } else {
      // Replace just the lead byte and re-examine what follows it.
      out.append(kReplacementChar);
      ++replaced;
      ++i;
    }
  }
  line = std::move(out);
  return replaced;
}

namespace {

// Shared token path for the non-ngram kinds: one occurrence per token.
void consume_token(std::string_view token, FrequencyTable& table,
                   CleanReport& report) {
  CleanResult cleaned = clean_word(token);
  switch (cleaned.status) {
    case CleanStatus::accepted:
      table.add(cleaned.word, 1);
      report.tokens_emitted += 1;
      break;
    case CleanStatus::rejected_nonletter:
      report.tokens_rejected_nonletter += 1;
      break;
    case CleanStatus::rejected_repeat:
      report.tokens_rejected_repeat += 1;
      break;
  }
}

void consume_ngram_line(std::string_view line, const IngestOptions& options,
                        FrequencyTable& table, CleanReport& report) {
  NgramRecord rec = parse_ngram_record(line, options.ngram_cols);
  switch (rec.status) {
    case NgramParseStatus::comment:
      return;
    case NgramParseStatus::malformed:
      report.lines_malformed += 1;
      return;
    case NgramParseStatus::record:
      break;
  }
  // All counters are weighted by the record count; a count of zero
  // contributes nothing anywhere.
  CleanResult cleaned = clean_word(rec.gram);
  switch (cleaned.status) {
    case CleanStatus::accepted:
      table.add(cleaned.word, rec.count);
      report.tokens_emitted += rec.count;
      break;
    case CleanStatus::rejected_nonletter:
      report.tokens_rejected_nonletter += rec.count;
      break;
    case CleanStatus::rejected_repeat:
      report.tokens_rejected_repeat += rec.count;
      break;
  }
}

}  // namespace

IngestResult ingest_corpus(std::istream& in, CorpusKind kind,
                           const IngestOptions& options) {
  IngestResult result;
  FrequencyTable& table = result.table;
  CleanReport& report = result.report;

  // Duplicate-tweet detection keeps 8 bytes per unique tweet rather than
  // the text itself; a 64-bit hash collision (odds ~n^2/2^65) would only
  // drop one real tweet as a duplicate.
  std::unordered_set<uint64_t> seen_tweets;

  std::string line;
  while (std::getline(in, line)) {
    report.lines_read += 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    report.bytes_replaced += replace_invalid_utf8(line);

    switch (kind) {
      case CorpusKind::ngram:
        consume_ngram_line(line, options, table, report);
        break;

      case CorpusKind::twitter: {
        auto tokens = split_whitespace(line);
        bool link_only = !tokens.empty();
        for (auto t : tokens) {
          if (!is_url_token(t)) {
            link_only = false;
            break;
          }
        }
        // Link-only tweets are discarded before uniqueness is considered,
        // so a repeated link-only tweet never counts as a duplicate.
        if (link_only) {
          report.records_dropped_linkonly += 1;
          break;
        }
        uint64_t h = rng::fnv1a64(line);
        if (!seen_tweets.insert(h).second) {
          report.records_dropped_duplicate += 1;
          break;
        }
        for (auto t : tokens) consume_token(t, table, report);
        break;
      }

      case CorpusKind::irc: {
        std::string_view body = line;
        if (options.irc_strip_wrapper) body = irc_strip_wrapper(body);
        for (auto t : parse_irc_line(body)) consume_token(t, table, report);
        break;
      }

      case CorpusKind::transcript:
      case CorpusKind::plain:
        for (auto t : split_whitespace(line)) consume_token(t, table, report);
        break;
    }
  }

  if (in.bad()) {
    throw IoError("read failure after " + std::to_string(report.lines_read) +
                  " lines");
  }
  return result;
}

IngestResult ingest_file(const std::filesystem::path& path, CorpusKind kind,
                         const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("no such input: " + path.string());
  }
  return ingest_corpus(in, kind, options);
}

}  // namespace modality
