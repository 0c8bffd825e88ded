#include "modality/frequency.hpp"

#include <algorithm>

#include "modality/errors.hpp"

namespace modality {

bool rank_order(const std::pair<std::string, uint64_t>& a,
                const std::pair<std::string, uint64_t>& b) {
  if (a.second != b.second) return a.second > b.second;
  return a.first < b.first;
}

std::vector<std::pair<std::string, uint64_t>> ranked_entries(
    const FrequencyTable& table) {
  std::vector<std::pair<std::string, uint64_t>> rows(table.entries.begin(),
                                                     table.entries.end());
  std::sort(rows.begin(), rows.end(), rank_order);
  return rows;
}

Population top_k(const FrequencyTable& table, uint32_t K,
                 std::string source_label) {
  if (K == 0) throw AnalysisError("population size K must be >= 1");
  if (table.unique() < K) {
    std::string who =
        source_label.empty() ? "table" : "corpus '" + source_label + "'";
    throw AnalysisError(who + " has " + std::to_string(table.unique()) +
                        " unique words, fewer than K=" + std::to_string(K));
  }

  std::vector<std::pair<std::string, uint64_t>> rows(table.entries.begin(),
                                                     table.entries.end());
  // Only the top K need full ordering; everything below the cut is dropped.
  std::nth_element(rows.begin(), rows.begin() + K - 1, rows.end(), rank_order);
  rows.resize(K);
  std::sort(rows.begin(), rows.end(), rank_order);

  uint64_t sum_top = 0;
  for (const auto& [word, count] : rows) sum_top += count;

  Population pop;
  pop.k = K;
  pop.source_label = std::move(source_label);
  pop.table_total = table.total;
  pop.entries.reserve(K);
  double denom = static_cast<double>(sum_top);
  uint32_t rank = 1;
  for (auto& [word, count] : rows) {
    PopulationEntry e;
    e.rank = rank++;
    e.word = std::move(word);
    e.raw_count = count;
    e.freq = static_cast<double>(count) / denom;
    pop.entries.push_back(std::move(e));
  }
  return pop;
}

CdfSeries cdf(const Population& pop) {
  CdfSeries series;
  series.points.reserve(pop.entries.size());
  double acc = 0.0;
  for (const auto& e : pop.entries) {
    acc += e.freq;
    series.points.push_back({e.rank, acc});
  }
  return series;
}

CdfSeries cdf_full(const FrequencyTable& table, uint32_t max_rank) {
  auto rows = ranked_entries(table);
  size_t limit = std::min<size_t>(max_rank, rows.size());
  CdfSeries series;
  series.points.reserve(limit);
  // Integer cumulative counts divided per point: no accumulation drift and
  // the final point is exactly 1 when the whole table is covered.
  uint64_t cum = 0;
  double total = static_cast<double>(table.total);
  for (size_t i = 0; i < limit; ++i) {
    cum += rows[i].second;
    series.points.push_back(
        {static_cast<uint32_t>(i + 1), static_cast<double>(cum) / total});
  }
  return series;
}

FrequencyTable merge(const std::vector<FrequencyTable>& tables) {
  FrequencyTable out;
  for (const auto& t : tables) {
    for (const auto& [word, count] : t.entries) out.add(word, count);
  }
  return out;
}

}  // namespace modality
