#include "modality/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "modality/errors.hpp"
#include "modality/rng.hpp"

namespace modality {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------- power law

// For a fixed offset a, the model log f(r) = c - b*log(a+r) is linear in
// (b, c), so the best (b, c) and the residual are closed-form OLS.
struct ProfileFit {
  double b = 0.0;
  double c = 0.0;
  double sse = 0.0;
};

ProfileFit profile_fit_for_a(double a, const std::vector<double>& logf) {
  const size_t n = logf.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double x = std::log(a + static_cast<double>(i + 1));
    double y = logf[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double dn = static_cast<double>(n);
  double denom = dn * sxx - sx * sx;
  ProfileFit fit;
  if (std::abs(denom) < 1e-300) {
    // All x equal (cannot happen for n >= 2 with distinct ranks, but keep
    // the guard); fall back to a flat fit through the mean.
    fit.b = 0.0;
    fit.c = sy / dn;
  } else {
    double slope = (dn * sxy - sx * sy) / denom;
    fit.b = -slope;
    fit.c = (sy - slope * sx) / dn;
  }
  double sse = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double x = std::log(a + static_cast<double>(i + 1));
    double r = logf[i] - (fit.c - fit.b * x);
    sse += r * r;
  }
  fit.sse = sse;
  return fit;
}

// ------------------------------------------------------- double exponential

struct DampedFitState {
  double p[4];  // a1, r1, a2, r2
  double rss = kInf;
  bool converged = false;
};

double double_exp_rss(const double p[4], const CdfSeries& series) {
  double rss = 0.0;
  for (const auto& pt : series.points) {
    double n = static_cast<double>(pt.rank);
    double model = p[0] * (1.0 - std::exp(-p[1] * n)) +
                   p[2] * (1.0 - std::exp(-p[3] * n));
    double r = pt.cumulative - model;
    rss += r * r;
  }
  return rss;
}

// Solve (A + lambda*diag(A)) x = g for a 4x4 symmetric A via Gaussian
// elimination with partial pivoting. Returns false on a (near) singular
// system, which the caller treats as a failed step.
bool solve_damped_4x4(const double A[4][4], const double g[4], double lambda,
                      double x[4]) {
  double M[4][5];
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) M[i][j] = A[i][j];
    M[i][i] += lambda * A[i][i];
    M[i][4] = g[i];
  }
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 4; ++row) {
      if (std::abs(M[row][col]) > std::abs(M[pivot][col])) pivot = row;
    }
    if (std::abs(M[pivot][col]) < 1e-300) return false;
    if (pivot != col) {
      for (int j = col; j < 5; ++j) std::swap(M[pivot][j], M[col][j]);
    }
    for (int row = col + 1; row < 4; ++row) {
      double f = M[row][col] / M[col][col];
      for (int j = col; j < 5; ++j) M[row][j] -= f * M[col][j];
    }
  }
  for (int i = 3; i >= 0; --i) {
    double acc = M[i][4];
    for (int j = i + 1; j < 4; ++j) acc -= M[i][j] * x[j];
    x[i] = acc / M[i][i];
  }
  return true;
}

// Levenberg-Marquardt from one start. Steps that leave the valid region
// (negative amplitudes, non-positive rates) count as failed and raise the
// damping, which shrinks the step until it fits.
DampedFitState damped_fit_from(double a1, double r1, double a2, double r2,
                               const CdfSeries& series) {
  DampedFitState st;
  st.p[0] = a1;
  st.p[1] = r1;
  st.p[2] = a2;
  st.p[3] = r2;
  st.rss = double_exp_rss(st.p, series);

  double lambda = 1e-3;
  const int max_iter = 10000;
  for (int iter = 0; iter < max_iter; ++iter) {
    // Accumulate J^T J and J^T residual.
    double A[4][4] = {};
    double g[4] = {};
    for (const auto& pt : series.points) {
      double n = static_cast<double>(pt.rank);
      double e1 = std::exp(-st.p[1] * n);
      double e2 = std::exp(-st.p[3] * n);
      double model = st.p[0] * (1.0 - e1) + st.p[2] * (1.0 - e2);
      double resid = pt.cumulative - model;
      double J[4] = {1.0 - e1, st.p[0] * n * e1, 1.0 - e2, st.p[2] * n * e2};
      for (int i = 0; i < 4; ++i) {
        g[i] += J[i] * resid;
        for (int j = 0; j < 4; ++j) A[i][j] += J[i] * J[j];
      }
    }

    bool stepped = false;
    while (lambda < 1e12) {
      double delta[4];
      if (solve_damped_4x4(A, g, lambda, delta)) {
        double cand[4];
        for (int i = 0; i < 4; ++i) cand[i] = st.p[i] + delta[i];
        bool valid = cand[0] >= 0.0 && cand[2] >= 0.0 && cand[1] > 1e-12 &&
                     cand[3] > 1e-12;
        if (valid) {
          double cand_rss = double_exp_rss(cand, series);
          if (cand_rss <= st.rss) {
            double drop = st.rss - cand_rss;
            for (int i = 0; i < 4; ++i) st.p[i] = cand[i];
            double prev = st.rss;
            st.rss = cand_rss;
            lambda = std::max(lambda * 0.3, 1e-12);
            stepped = true;
            if (drop <= 1e-12 * std::max(prev, 1e-30)) {
              st.converged = true;
              return st;
            }
            break;
          }
        }
      }
      lambda *= 3.0;
    }
    if (!stepped) {
      // Damping maxed out without an acceptable step: a stationary point.
      st.converged = true;
      return st;
    }
    if (st.rss < 1e-30) {
      st.converged = true;
      return st;
    }
  }
  return st;  // iteration cap, not converged
}

}  // namespace

double DoubleExpFit::value(double n) const {
  return a1 * (1.0 - std::exp(-r1 * n)) + a2 * (1.0 - std::exp(-r2 * n));
}

std::vector<double> power_law_frequencies(const PowerLawModel& model,
                                          uint32_t K) {
  if (!(model.a > -1.0)) {
    throw AnalysisError("power-law offset a must be > -1");
  }
  if (!(model.b >= 0.0)) {
    throw AnalysisError("power-law exponent b must be >= 0");
  }
  if (K == 0) throw AnalysisError("K must be >= 1");
  std::vector<double> f(K);
  double z = 0.0;
  for (uint32_t r = 1; r <= K; ++r) {
    double w = std::pow(model.a + static_cast<double>(r), -model.b);
    f[r - 1] = w;
    z += w;
  }
  for (double& x : f) x /= z;
  return f;
}

DoubleExpFit fit_double_exponential(const CdfSeries& series) {
  if (series.points.size() < 8) {
    throw AnalysisError("double-exponential fit needs >= 8 points, have " +
                        std::to_string(series.points.size()));
  }

  const double final_value = series.points.back().cumulative;
  const double half = final_value / 2.0;
  const double r1_starts[] = {0.05, 0.1, 0.2};
  const double r2_starts[] = {0.005, 0.01, 0.02};

  DampedFitState best;
  bool any_converged = false;
  double best_rss_seen = kInf;
  for (double r1 : r1_starts) {
    for (double r2 : r2_starts) {
      DampedFitState st = damped_fit_from(half, r1, half, r2, series);
      best_rss_seen = std::min(best_rss_seen, st.rss);
      if (!st.converged) continue;
      if (!any_converged || st.rss < best.rss) {
        best = st;
        any_converged = true;
      }
    }
  }
  if (!any_converged) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6e", best_rss_seen);
    throw AnalysisError(
        std::string("double-exponential fit did not converge from any "
                    "start (best rss ") +
        buf + ")");
  }

  DoubleExpFit fit;
  fit.a1 = best.p[0];
  fit.r1 = best.p[1];
  fit.a2 = best.p[2];
  fit.r2 = best.p[3];
  fit.rss = best.rss;
  if (fit.r1 < fit.r2) {
    std::swap(fit.a1, fit.a2);
    std::swap(fit.r1, fit.r2);
  }
  return fit;
}

LinearFit fit_final_slope(const CdfSeries& series, uint32_t window_len) {
  const size_t n = series.points.size();
  if (window_len < 2) {
    throw AnalysisError("final-slope window must cover >= 2 points");
  }
  if (window_len > n) {
    throw AnalysisError("final-slope window " + std::to_string(window_len) +
                        " exceeds series length " + std::to_string(n));
  }
  size_t first = n - window_len;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = first; i < n; ++i) {
    double x = static_cast<double>(series.points[i].rank);
    double y = series.points[i].cumulative;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double dn = static_cast<double>(window_len);
  double denom = dn * sxx - sx * sx;
  LinearFit fit;
  fit.slope = (dn * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / dn;
  fit.first_rank = series.points[first].rank;
  fit.last_rank = series.points[n - 1].rank;
  return fit;
}

PowerLawFitResult fit_power_law(const std::vector<double>& freqs) {
  if (freqs.size() < 3) {
    throw AnalysisError("power-law fit needs >= 3 frequencies");
  }
  std::vector<double> logf;
  logf.reserve(freqs.size());
  for (double f : freqs) {
    if (!(f > 0.0)) {
      throw AnalysisError("power-law fit requires positive frequencies");
    }
    logf.push_back(std::log(f));
  }

  // Coarse scan over the offset, then golden-section refinement around the
  // best grid point. The grid spans well past the useful range: offsets
  // beyond ~50 are indistinguishable from larger-b flat fits for K <= 1e4.
  const double a_min = -0.95;
  const double a_max = 50.0;
  const double step = 0.05;
  double best_a = a_min;
  double best_sse = kInf;
  for (double a = a_min; a <= a_max + 1e-9; a += step) {
    double sse = profile_fit_for_a(a, logf).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best_a = a;
    }
  }

  double lo = std::max(a_min, best_a - step);
  double hi = std::min(a_max, best_a + step);
  const double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = profile_fit_for_a(x1, logf).sse;
  double f2 = profile_fit_for_a(x2, logf).sse;
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = profile_fit_for_a(x1, logf).sse;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = profile_fit_for_a(x2, logf).sse;
    }
  }
  double a = (lo + hi) / 2.0;
  ProfileFit fit = profile_fit_for_a(a, logf);

  PowerLawFitResult result;
  result.model.a = a;
  result.model.b = fit.b;
  result.rss = fit.sse;
  return result;
}

PowerLawFitResult fit_power_law(const Population& pop) {
  std::vector<double> freqs;
  freqs.reserve(pop.entries.size());
  for (const auto& e : pop.entries) freqs.push_back(e.freq);
  return fit_power_law(freqs);
}

double rmsd_from_uniform(const std::vector<double>& freqs) {
  if (freqs.empty()) throw AnalysisError("rmsd of an empty vector");
  double uniform = 1.0 / static_cast<double>(freqs.size());
  double acc = 0.0;
  for (double f : freqs) {
    double d = f - uniform;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(freqs.size()));
}

DiversityReport diversity_report(const Population& pop) {
  const size_t K = pop.entries.size();
  if (K == 0 || K % 2 != 0) {
    throw AnalysisError("diversity report needs an even population size, "
                        "have " + std::to_string(K));
  }
  std::vector<double> freqs;
  freqs.reserve(K);
  for (const auto& e : pop.entries) freqs.push_back(e.freq);

  DiversityReport report;
  report.rmsd = rmsd_from_uniform(freqs);
  std::vector<double> lower(freqs.begin(), freqs.begin() + K / 2);
  std::vector<double> upper(freqs.begin() + K / 2, freqs.end());
  // Halves are measured against the whole population's uniform level, not
  // re-normalized within the half.
  double uniform = 1.0 / static_cast<double>(K);
  auto half_rmsd = [uniform](const std::vector<double>& part) {
    double acc = 0.0;
    for (double f : part) {
      double d = f - uniform;
      acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(part.size()));
  };
  report.rmsd_lower = half_rmsd(lower);
  report.rmsd_upper = half_rmsd(upper);

  // Exact integer comparison: cumulative raw count r covers half the
  // population mass iff 2*cum >= sum. No floating-point rounding can move
  // the crossover rank.
  uint64_t sum = 0;
  for (const auto& e : pop.entries) sum += e.raw_count;
  uint64_t cum = 0;
  for (const auto& e : pop.entries) {
    cum += e.raw_count;
    if (cum >= sum - cum) {
      report.rank_at_50 = e.rank;
      break;
    }
  }
  return report;
}

FrequencyTable generate_zipf_corpus(const PowerLawModel& model, uint32_t K,
                                    uint64_t draws, uint64_t seed) {
  std::vector<double> freqs = power_law_frequencies(model, K);
  std::vector<double> cum(K);
  double acc = 0.0;
  for (uint32_t i = 0; i < K; ++i) {
    acc += freqs[i];
    cum[i] = acc;
  }

  std::vector<uint64_t> counts(K, 0);
  const uint64_t key = rng::stream_key(seed, "zipf");
  for (uint64_t i = 0; i < draws; ++i) {
    double u = rng::uniform01(key, i, 0);
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    size_t idx = static_cast<size_t>(it - cum.begin());
    if (idx >= K) idx = K - 1;
    counts[idx] += 1;
  }

  int width = 4;
  for (uint64_t v = 10000; v <= K; v *= 10) ++width;
  width = std::min(width, 10);  // uint32_t K never needs more digits

  FrequencyTable table;
  char name[32];
  for (uint32_t i = 0; i < K; ++i) {
    if (counts[i] == 0) continue;
    std::snprintf(name, sizeof(name), "w%0*u", width, i + 1);
    table.add(name, counts[i]);
  }
  return table;
}

}  // namespace modality
