#include "modality/io.hpp"

#include <cerrno>
#include <charconv>
#include <cinttypes>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <system_error>

#include "modality/errors.hpp"
#include "modality/rng.hpp"

namespace modality::io {

namespace {

namespace fs = std::filesystem;

// Fixed-width helpers so every platform and libc prints the same bytes.
std::string format(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  char buf[64];
  int n = std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return std::string(buf, static_cast<size_t>(n));
}

}  // namespace

uint64_t fnv1a64_bytes(std::string_view data) {
  return rng::fnv1a64(data);
}

uint64_t fnv1a64_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for checksum: " + path.string());
  uint64_t hash = 0xCBF29CE484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001B3ULL;
    }
  }
  if (in.bad()) throw IoError("read error while checksumming: " + path.string());
  return hash;
}

std::string to_hex16(uint64_t value) {
  return format("%016" PRIx64, value);
}

void atomic_write_file(const fs::path& path, std::string_view content) {
  fs::path parent = path.parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec) {
      throw IoError("cannot create directory " + parent.string() + ": " +
                    ec.message());
    }
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write: " + tmp.string());
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot move " + tmp.string() + " into place: " +
                  ec.message());
  }
}

std::string frequency_table_to_tsv(const FrequencyTable& table) {
  std::string out;
  out += "#total=" + std::to_string(table.total) +
         "\t#unique=" + std::to_string(table.unique()) + "\n";
  auto rows = ranked_entries(table);
  for (const auto& [word, count] : rows) {
    out += word;
    out += '\t';
    out += std::to_string(count);
    out += '\n';
  }
  return out;
}

void write_frequency_table(const fs::path& path, const FrequencyTable& table) {
  atomic_write_file(path, frequency_table_to_tsv(table));
}

FrequencyTable read_frequency_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("no such table: " + path.string());

  auto err = [&](uint64_t line_no, const std::string& what) {
    return IoError("table " + path.string() + " line " +
                   std::to_string(line_no) + ": " + what);
  };

  std::string line;
  if (!std::getline(in, line)) throw err(1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  uint64_t declared_total = 0, declared_unique = 0;
  if (std::sscanf(line.c_str(), "#total=%" SCNu64 "\t#unique=%" SCNu64,
                  &declared_total, &declared_unique) != 2) {
    throw err(1, "malformed header '" + line + "'");
  }

  FrequencyTable table;
  uint64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos) throw err(line_no, "expected word\\tcount");
    std::string word = line.substr(0, tab);
    uint64_t count = 0;
    const char* first = line.c_str() + tab + 1;
    const char* last = line.c_str() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, count);
    if (ec != std::errc() || ptr != last || first == last) {
      throw err(line_no, "bad count '" + line.substr(tab + 1) + "'");
    }
    if (table.entries.count(word)) throw err(line_no, "duplicate word '" + word + "'");
    table.add(word, count);
  }
  if (in.bad()) throw IoError("read error in table: " + path.string());
  if (table.total != declared_total) {
    throw IoError("table " + path.string() + ": header total " +
                  std::to_string(declared_total) + " != sum of rows " +
                  std::to_string(table.total));
  }
  if (table.unique() != declared_unique) {
    throw IoError("table " + path.string() + ": header unique " +
                  std::to_string(declared_unique) + " != rows " +
                  std::to_string(table.unique()));
  }
  return table;
}

json clean_report_json(const CleanReport& report) {
  json j;
  j["lines_read"] = report.lines_read;
  j["tokens_emitted"] = report.tokens_emitted;
  j["tokens_rejected_nonletter"] = report.tokens_rejected_nonletter;
  j["tokens_rejected_repeat"] = report.tokens_rejected_repeat;
  j["records_dropped_linkonly"] = report.records_dropped_linkonly;
  j["records_dropped_duplicate"] = report.records_dropped_duplicate;
  j["lines_malformed"] = report.lines_malformed;
  j["bytes_replaced"] = report.bytes_replaced;
  return j;
}

json population_json(const Population& pop) {
  json j;
  j["source"] = pop.source_label;
  j["k"] = pop.k;
  j["table_total"] = pop.table_total;
  json entries = json::array();
  for (const auto& e : pop.entries) {
    json row;
    row["rank"] = e.rank;
    row["word"] = e.word;
    row["count"] = e.raw_count;
    row["freq"] = e.freq;
    entries.push_back(std::move(row));
  }
  j["entries"] = std::move(entries);
  return j;
}

std::string cdf_to_csv(const CdfSeries& series) {
  std::string out = "rank,cumulative\n";
  for (const auto& p : series.points) {
    out += std::to_string(p.rank);
    out += ',';
    out += format("%.12g", p.cumulative);
    out += '\n';
  }
  return out;
}

json fit_json(const DoubleExpFit& fit) {
  json j;
  j["model"] = "double_exponential";
  j["a1"] = fit.a1;
  j["r1"] = fit.r1;
  j["a2"] = fit.a2;
  j["r2"] = fit.r2;
  j["rss"] = fit.rss;
  return j;
}

json fit_json(const PowerLawFitResult& fit) {
  json j;
  j["model"] = "power_law";
  j["a"] = fit.model.a;
  j["b"] = fit.model.b;
  j["rss"] = fit.rss;
  return j;
}

json fit_json(const LinearFit& fit) {
  json j;
  j["model"] = "linear";
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["first_rank"] = fit.first_rank;
  j["last_rank"] = fit.last_rank;
  return j;
}

std::string match_matrix_csv(const MatchMatrix& matrix) {
  std::string out = "population";
  for (const auto& label : matrix.labels) {
    out += ',';
    out += label;
  }
  out += '\n';
  for (size_t i = 0; i < matrix.labels.size(); ++i) {
    out += matrix.labels[i];
    for (size_t j = 0; j < matrix.labels.size(); ++j) {
      out += ',';
      out += std::to_string(matrix.counts[i][j]);
    }
    out += '\n';
  }
  return out;
}

std::string confusion_csv(const ConfusionMatrix& matrix) {
  std::string out = "source";
  for (const auto& label : matrix.labels) {
    out += ',';
    out += label;
  }
  out += '\n';
  for (size_t s = 0; s < matrix.labels.size(); ++s) {
    out += matrix.labels[s];
    uint64_t row_total = matrix.sims_per_source[s];
    for (size_t p = 0; p < matrix.labels.size(); ++p) {
      double frac = row_total == 0
                        ? 0.0
                        : static_cast<double>(matrix.counts[s][p]) /
                              static_cast<double>(row_total);
      out += ',';
      out += format("%.6f", frac);
    }
    out += '\n';
  }
  return out;
}

json confusion_meta_json(const ConfusionMatrix& matrix) {
  json j;
  j["m"] = matrix.m;
  j["total_sims"] = matrix.total_sims;
  j["seed"] = matrix.seed;
  j["labels"] = matrix.labels;
  j["sims_per_source"] = matrix.sims_per_source;
  json counts = json::array();
  for (const auto& row : matrix.counts) counts.push_back(row);
  j["counts"] = std::move(counts);
  return j;
}

std::string similarity_curve_csv(const SimilarityCurve& curve) {
  std::string out = "population,m,index\n";
  for (size_t s = 0; s < curve.labels.size(); ++s) {
    for (size_t mi = 0; mi < curve.m_values.size(); ++mi) {
      out += curve.labels[s];
      out += ',';
      out += std::to_string(curve.m_values[mi]);
      out += ',';
      out += format("%.6f", curve.index[s][mi]);
      out += '\n';
    }
  }
  return out;
}

std::string class_profile_csv(const ClassProfile& profile) {
  std::string out = "class,count\n";
  for (size_t i = 0; i < kWordClassCount; ++i) {
    WordClass c = static_cast<WordClass>(i);
    out += to_string(c);
    out += ',';
    out += std::to_string(profile.count(c));
    out += '\n';
  }
  return out;
}

}  // namespace modality::io
