#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "modality/frequency.hpp"

namespace modality {

// Pairwise shared-word counts between populations.
struct MatchMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<uint32_t>> counts;  // symmetric, diagonal = K
};

struct MatchResult {
  uint32_t count = 0;
  std::vector<std::string> shared;  // sorted
};

// How classification ties are resolved. `random` splits uniformly over the
// tied populations from the seeded stream; `first_label` always picks the
// tied population with the lowest index (debugging aid).
enum class TieMode { random, first_label };

// Tally grid of one Monte Carlo confusion run: counts[source][predicted].
struct ConfusionMatrix {
  uint32_t m = 0;  // words per simulation
  std::vector<std::string> labels;
  std::vector<std::vector<uint64_t>> counts;
  std::vector<uint64_t> sims_per_source;
  uint64_t total_sims = 0;
  uint64_t seed = 0;
};

// Similarity Index per population as a function of m.
struct SimilarityCurve {
  std::vector<std::string> labels;
  std::vector<uint32_t> m_values;
  std::vector<std::vector<double>> index;  // [population][m_value]
};

// Count and sorted set of words the two populations share.
MatchResult matching_words(const Population& a, const Population& b);

// Full pairwise grid over a population list.
MatchMatrix match_matrix(const std::vector<Population>& pops);

// Classifies a sample of words as the population where the product of the
// words' normalized frequencies is highest (summed in log space; a word
// absent from a population scores it -infinity). Ties are broken via
// tiebreak_seed under the given mode. Returns the population index, or -1
// when every population scores -infinity (sample words foreign to all).
int classify_sample(const std::vector<std::string>& words,
                    const std::vector<Population>& pops,
                    uint64_t tiebreak_seed, TieMode tie = TieMode::random);

// Runs total_sims simulations: each picks a source population uniformly,
// draws m word TYPES uniformly with replacement from the source's K words
// (not frequency-weighted), classifies the sample against all populations
// simultaneously, and tallies [source][predicted]. Bit-identical for a
// fixed seed at any thread count. Requires >= 2 populations of equal K.
ConfusionMatrix run_confusion(const std::vector<Population>& pops, uint32_t m,
                              uint64_t total_sims, uint64_t seed,
                              int threads = 1, TieMode tie = TieMode::random);

// Similarity Index of source row s: 1 - mu_d / n_s, where n_s is the row
// total and mu_d is the mean over other populations j of
// counts[s][s] - counts[s][j]. 1 when the row is flat (indistinguishable
// populations), 0 when everything lands on the diagonal.
double similarity_index(const std::vector<uint64_t>& row, size_t s);

// run_confusion per m (each m gets its own derived seed) mapped through
// similarity_index. When out_matrices is non-null the per-m matrices are
// appended to it in m order.
SimilarityCurve similarity_curve(
    const std::vector<Population>& pops, const std::vector<uint32_t>& m_values,
    uint64_t total_sims, uint64_t seed, int threads = 1,
    std::vector<ConfusionMatrix>* out_matrices = nullptr);

}  // namespace modality
