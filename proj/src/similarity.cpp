#include "modality/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "modality/errors.hpp"
#include "modality/rng.hpp"

namespace modality {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Indices of the maximum score, in ascending order. Scores compare with
// plain ==: every path that produces them performs the identical
// floating-point operations in the identical order, so equal-by-value is
// equal-by-construction. -inf == -inf holds, so an all-foreign sample
// yields the full index set and the caller can detect it.
void argmax_set(const std::vector<double>& scores,
                std::vector<size_t>& out) {
  out.clear();
  double best = scores[0];
  for (size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > best) best = scores[i];
  }
  for (size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] == best) out.push_back(i);
  }
}

}  // namespace

MatchResult matching_words(const Population& a, const Population& b) {
  std::unordered_set<std::string_view> words_a;
  words_a.reserve(a.entries.size() * 2);
  for (const auto& e : a.entries) words_a.insert(e.word);

  MatchResult result;
  for (const auto& e : b.entries) {
    if (words_a.count(e.word)) result.shared.push_back(e.word);
  }
  std::sort(result.shared.begin(), result.shared.end());
  result.count = static_cast<uint32_t>(result.shared.size());
  return result;
}

MatchMatrix match_matrix(const std::vector<Population>& pops) {
  const size_t n = pops.size();
  MatchMatrix matrix;
  matrix.labels.reserve(n);
  for (const auto& p : pops) matrix.labels.push_back(p.source_label);
  matrix.counts.assign(n, std::vector<uint32_t>(n, 0));
  for (size_t i = 0; i < n; ++i) {
    matrix.counts[i][i] = static_cast<uint32_t>(pops[i].entries.size());
    for (size_t j = i + 1; j < n; ++j) {
      uint32_t c = matching_words(pops[i], pops[j]).count;
      matrix.counts[i][j] = c;
      matrix.counts[j][i] = c;
    }
  }
  return matrix;
}

int classify_sample(const std::vector<std::string>& words,
                    const std::vector<Population>& pops,
                    uint64_t tiebreak_seed, TieMode tie) {
  if (words.empty()) throw AnalysisError("classify_sample on empty sample");
  if (pops.size() < 2) {
    throw AnalysisError("classify_sample needs >= 2 populations");
  }

  std::vector<std::unordered_map<std::string_view, double>> logf(pops.size());
  for (size_t p = 0; p < pops.size(); ++p) {
    logf[p].reserve(pops[p].entries.size() * 2);
    for (const auto& e : pops[p].entries) {
      logf[p][e.word] = std::log(e.freq);
    }
  }

  // Sum per population in sample-word order — the same operation order the
  // Monte Carlo path uses, so both paths agree bit for bit.
  std::vector<double> scores(pops.size(), 0.0);
  for (const auto& w : words) {
    for (size_t p = 0; p < pops.size(); ++p) {
      auto it = logf[p].find(w);
      scores[p] += (it == logf[p].end()) ? kNegInf : it->second;
    }
  }

  std::vector<size_t> best;
  argmax_set(scores, best);
  if (scores[best.front()] == kNegInf) return -1;  // foreign everywhere
  if (best.size() == 1) return static_cast<int>(best.front());
  if (tie == TieMode::first_label) return static_cast<int>(best.front());
  uint64_t pick = rng::draw(rng::stream_key(tiebreak_seed, "tie"), 0, 0);
  return static_cast<int>(best[pick % best.size()]);
}

ConfusionMatrix run_confusion(const std::vector<Population>& pops, uint32_t m,
                              uint64_t total_sims, uint64_t seed, int threads,
                              TieMode tie) {
  const size_t P = pops.size();
  if (P < 2) throw AnalysisError("confusion run needs >= 2 populations");
  if (m == 0) throw AnalysisError("words per simulation must be >= 1");
  if (total_sims == 0) throw AnalysisError("total_sims must be >= 1");
  const size_t K = pops[0].entries.size();
  for (const auto& p : pops) {
    if (p.entries.size() != K) {
      throw AnalysisError("populations must share one K; '" +
                          p.source_label + "' has " +
                          std::to_string(p.entries.size()) + ", expected " +
                          std::to_string(K));
    }
  }

  // logf[s][p*K + k]: log frequency in population p of source s's k-th
  // word; -inf when absent. Flat per-source tables keep the hot loop to
  // array indexing.
  std::vector<std::vector<double>> logf(P);
  {
    std::vector<std::unordered_map<std::string_view, double>> maps(P);
    for (size_t p = 0; p < P; ++p) {
      maps[p].reserve(K * 2);
      for (const auto& e : pops[p].entries) {
        maps[p][e.word] = std::log(e.freq);
      }
    }
    for (size_t s = 0; s < P; ++s) {
      logf[s].assign(P * K, kNegInf);
      for (size_t k = 0; k < K; ++k) {
        std::string_view w = pops[s].entries[k].word;
        for (size_t p = 0; p < P; ++p) {
          auto it = maps[p].find(w);
          if (it != maps[p].end()) logf[s][p * K + k] = it->second;
        }
      }
    }
  }

  const uint64_t key = rng::stream_key(seed, "confusion");

  // Every simulation index is an independent function of (key, i), so the
  // partition into worker blocks cannot change any tally.
  auto run_block = [&](uint64_t begin, uint64_t end,
                       std::vector<std::vector<uint64_t>>& counts,
                       std::vector<uint64_t>& per_source) {
    std::vector<double> scores(P);
    std::vector<size_t> best;
    std::vector<uint32_t> word_idx(m);
    for (uint64_t i = begin; i < end; ++i) {
      size_t s = static_cast<size_t>(rng::draw(key, i, 0) % P);
      for (uint32_t j = 0; j < m; ++j) {
        word_idx[j] = static_cast<uint32_t>(rng::draw(key, i, 1 + j) % K);
      }
      std::fill(scores.begin(), scores.end(), 0.0);
      const double* table = logf[s].data();
      for (uint32_t j = 0; j < m; ++j) {
        size_t k = word_idx[j];
        for (size_t p = 0; p < P; ++p) scores[p] += table[p * K + k];
      }
      argmax_set(scores, best);
      size_t pred;
      if (best.size() == 1 || tie == TieMode::first_label) {
        pred = best.front();
      } else {
        pred = best[rng::draw(key, i, 1 + m) % best.size()];
      }
      counts[s][pred] += 1;
      per_source[s] += 1;
    }
  };

  ConfusionMatrix matrix;
  matrix.m = m;
  for (const auto& p : pops) matrix.labels.push_back(p.source_label);
  matrix.counts.assign(P, std::vector<uint64_t>(P, 0));
  matrix.sims_per_source.assign(P, 0);
  matrix.total_sims = total_sims;
  matrix.seed = seed;

  int workers = std::max(1, threads);
  if (static_cast<uint64_t>(workers) > total_sims) {
    workers = static_cast<int>(total_sims);
  }
  if (workers == 1) {
    run_block(0, total_sims, matrix.counts, matrix.sims_per_source);
  } else {
    std::vector<std::vector<std::vector<uint64_t>>> counts(
        workers, std::vector<std::vector<uint64_t>>(
                     P, std::vector<uint64_t>(P, 0)));
    std::vector<std::vector<uint64_t>> per_source(
        workers, std::vector<uint64_t>(P, 0));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    uint64_t chunk = total_sims / workers;
    uint64_t rem = total_sims % workers;
    uint64_t begin = 0;
    for (int w = 0; w < workers; ++w) {
      uint64_t len = chunk + (static_cast<uint64_t>(w) < rem ? 1 : 0);
      uint64_t end = begin + len;
      pool.emplace_back(run_block, begin, end, std::ref(counts[w]),
                        std::ref(per_source[w]));
      begin = end;
    }
    for (auto& t : pool) t.join();
    for (int w = 0; w < workers; ++w) {
      for (size_t s = 0; s < P; ++s) {
        matrix.sims_per_source[s] += per_source[w][s];
        for (size_t p = 0; p < P; ++p) {
          matrix.counts[s][p] += counts[w][s][p];
        }
      }
    }
  }
  return matrix;
}

double similarity_index(const std::vector<uint64_t>& row, size_t s) {
  if (row.size() < 2) throw AnalysisError("similarity index needs >= 2 cells");
  if (s >= row.size()) throw AnalysisError("similarity index row out of range");
  uint64_t n_s = 0;
  for (uint64_t v : row) n_s += v;
  if (n_s == 0) throw AnalysisError("similarity index of an empty tally row");

  double diff_sum = 0.0;
  for (size_t j = 0; j < row.size(); ++j) {
    if (j == s) continue;
    diff_sum += static_cast<double>(static_cast<int64_t>(row[s]) -
                                    static_cast<int64_t>(row[j]));
  }
  double mu_d = diff_sum / static_cast<double>(row.size() - 1);
  return 1.0 - mu_d / static_cast<double>(n_s);
}

SimilarityCurve similarity_curve(const std::vector<Population>& pops,
                                 const std::vector<uint32_t>& m_values,
                                 uint64_t total_sims, uint64_t seed,
                                 int threads,
                                 std::vector<ConfusionMatrix>* out_matrices) {
  if (m_values.empty()) throw AnalysisError("no m values given");

  SimilarityCurve curve;
  for (const auto& p : pops) curve.labels.push_back(p.source_label);
  curve.m_values = m_values;
  curve.index.assign(pops.size(), std::vector<double>(m_values.size(), 0.0));

  for (size_t mi = 0; mi < m_values.size(); ++mi) {
    // Each m gets its own derived stream so the per-m runs are independent
    // and adding an m value never perturbs the others.
    uint64_t m_seed =
        rng::stream_key(seed, "curve_m" + std::to_string(m_values[mi]));
    ConfusionMatrix cm =
        run_confusion(pops, m_values[mi], total_sims, m_seed, threads);
    for (size_t s = 0; s < pops.size(); ++s) {
      curve.index[s][mi] = similarity_index(cm.counts[s], s);
    }
    if (out_matrices) out_matrices->push_back(std::move(cm));
  }
  return curve;
}

}  // namespace modality
