#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace modality {

// Word-occurrence counts for one corpus. Counts are 64-bit: headline words
// in trillion-token corpora overflow 32 bits by orders of magnitude.
struct FrequencyTable {
  std::unordered_map<std::string, uint64_t> entries;
  uint64_t total = 0;

  uint64_t unique() const { return entries.size(); }

  void add(std::string_view word, uint64_t count) {
    if (count == 0) return;
    entries[std::string(word)] += count;
    total += count;
  }
};

// One ranked word of a top-K population.
struct PopulationEntry {
  uint32_t rank = 0;  // 1-based
  std::string word;
  uint64_t raw_count = 0;
  double freq = 0.0;  // raw_count / sum of the K raw counts
};

// The K most frequent words of a corpus with frequencies renormalized to
// sum to 1 over just those K words.
struct Population {
  std::vector<PopulationEntry> entries;
  uint32_t k = 0;
  std::string source_label;
  uint64_t table_total = 0;  // total of the table the population came from
};

struct CdfPoint {
  uint32_t rank = 0;
  double cumulative = 0.0;
};

struct CdfSeries {
  std::vector<CdfPoint> points;
};

// Ordering used everywhere a table is ranked: descending count, then
// ascending word. The lexicographic tiebreak makes rank assignment (and the
// cut at K) deterministic.
bool rank_order(const std::pair<std::string, uint64_t>& a,
                const std::pair<std::string, uint64_t>& b);

// All table entries sorted by rank_order.
std::vector<std::pair<std::string, uint64_t>> ranked_entries(
    const FrequencyTable& table);

// The K highest-count words with renormalized frequencies.
// Throws AnalysisError when the table has fewer than K unique words.
Population top_k(const FrequencyTable& table, uint32_t K,
                 std::string source_label = "");

// Cumulative population-internal mass: point r = sum of freq over ranks <= r.
CdfSeries cdf(const Population& pop);

// Cumulative mass against the whole table's total, truncated at max_rank.
// The final point reaches 1 only when max_rank covers every unique word.
CdfSeries cdf_full(const FrequencyTable& table, uint32_t max_rank);

// Per-word sum of a list of tables.
FrequencyTable merge(const std::vector<FrequencyTable>& tables);

}  // namespace modality
