#pragma once

#include <cstdint>
#include <vector>

#include "modality/frequency.hpp"

namespace modality {

// Rank-frequency model f(r) proportional to 1 / (a + r)^b.
struct PowerLawModel {
  double a = 6.0;
  double b = 1.6;
};

// Fit of C(n) = A1*(1 - e^(-r1*n)) + A2*(1 - e^(-r2*n)) to a CDF series.
// Rates are reported with r1 >= r2.
struct DoubleExpFit {
  double a1 = 0.0;
  double r1 = 0.0;
  double a2 = 0.0;
  double r2 = 0.0;
  double rss = 0.0;

  double value(double n) const;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  uint32_t first_rank = 0;
  uint32_t last_rank = 0;
};

struct PowerLawFitResult {
  PowerLawModel model;
  double rss = 0.0;  // residual sum of squares in log-frequency space
};

struct DiversityReport {
  double rmsd = 0.0;
  double rmsd_lower = 0.0;  // ranks 1..K/2
  double rmsd_upper = 0.0;  // ranks K/2+1..K
  uint32_t rank_at_50 = 0;  // smallest rank with cumulative mass >= 1/2
};

// Normalized model frequencies for ranks 1..K. Requires a > -1, b >= 0.
std::vector<double> power_law_frequencies(const PowerLawModel& model,
                                          uint32_t K);

// Least-squares fit of the Levenberg-Marquardt kind over a fixed 3x3 grid
// of rate starts, amplitudes starting at half the final series value each.
// Throws AnalysisError when no start converges (message carries the best
// rss reached).
DoubleExpFit fit_double_exponential(const CdfSeries& series);

// Ordinary least squares over the last window_len points of the series.
LinearFit fit_final_slope(const CdfSeries& series, uint32_t window_len);

// Fits log f(r) = c - b*log(a + r) by exhaustive search over a (coarse grid
// plus golden-section refinement; the problem is non-convex in a) with b
// and c solved in closed form per candidate a.
PowerLawFitResult fit_power_law(const std::vector<double>& freqs);
PowerLawFitResult fit_power_law(const Population& pop);

// RMSD of a frequency vector from the uniform vector of the same length.
double rmsd_from_uniform(const std::vector<double>& freqs);

// Diversity metrics of a population. K must be even (the lower/upper halves
// are otherwise undefined). rank_at_50 is computed on raw counts in exact
// integer arithmetic, so a perfectly uniform population lands on K/2.
DiversityReport diversity_report(const Population& pop);

// Samples `draws` words from power_law_frequencies(model, K) and counts
// them. Words are named w0001..wK (width grows past 9999). Deterministic
// for a fixed seed regardless of threading anywhere else in the program.
FrequencyTable generate_zipf_corpus(const PowerLawModel& model, uint32_t K,
                                    uint64_t draws, uint64_t seed);

}  // namespace modality
