#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sosim/types.hpp"

namespace sosim {

enum class Opinion { kPositive, kNegative };

// POSITIVE iff round-half-up(rating) >= threshold. Rounding first keeps the
// integer partition (>= 6 positive, <= 5 negative on a 10-level scale) total
// for the fractional ratings produced by multi-sample averaging.
Opinion classify(double rating, double threshold);

struct McoStep {
  int round = 0;  // 1-based round in the full sequence, warm-ups included
  double pos = 0.0;
  double neg = 0.0;
  double mco = 0.0;
};

// Majority-conforming-opinion sequence over sequence rounds 1..T. Each
// reported round k >= start_round carries the cumulative positive/negative
// proportions over rounds 1..k and their max; rounds before start_round are
// counted but not reported. Trend analysis starts at round m (the warm-up
// length), so the first reported proportions rest on m samples instead of
// one -- the warm-up prefix damps early volatility in both the displayed
// climate and the trend window.
struct McoSeries {
  std::string movie_id;
  int start_round = 1;
  std::vector<McoStep> steps;
};

// Throws SequenceTooShort when the sequence has fewer than start_round
// events.
McoSeries mco_series(const RatingSequence& seq, double threshold,
                     int start_round);

struct MannKendallResult {
  long long s = 0;
  double p_value = 1.0;  // two-sided normal approximation, tie-corrected
};

// Mann-Kendall S over the MCO values: the signed count of concordant minus
// discordant ordered pairs. Computed in O(n log n) with a Fenwick tree over
// the rank-compressed values; the tests hold it to the O(n^2) pair-sum
// definition. Variance 0 (all values tied) reports p = 1.
// Throws SeriesTooShort for n < 2.
MannKendallResult mann_kendall_s(const McoSeries& series);
MannKendallResult mann_kendall_s(std::span<const double> values);

// Spearman rank correlation of the MCO values against time: Pearson
// correlation of average ranks. Equals the classic 1 - 6*sum(d^2)/(n(n^2-1))
// form exactly when the values are tie-free.
// Throws SeriesTooShort (n < 2) and ConstantSeries (all values tied).
double spearman_rho(const McoSeries& series);
double spearman_rho(std::span<const double> values);

// Average ranks (1-based, ties share the mean rank).
std::vector<double> average_ranks(std::span<const double> values);

// The last l rating values of the sequence, in step order.
// Throws SequenceTooShort when the sequence has fewer than l events.
std::vector<double> late_window(const RatingSequence& seq, int l);

// Excess kurtosis with population moments: mean((x-mu)/sigma)^4 - 3.
// Throws ZeroVariance when sigma == 0 and SeriesTooShort for n < 2.
double excess_kurtosis(std::span<const double> values);

// Interquartile range with linear interpolation at positions q*(n-1).
double iqr(std::span<const double> values);

// Absolute deviation of a rating from the collective climate it observed.
double rating_distance(double rating, double history_avg);

// Per-movie metric bundle. `spearman` and `kurtosis_late` are empty when
// undefined (constant MCO series / zero-variance window); reports encode
// that as NA rather than coercing to a number.
struct MetricReport {
  std::string movie_id;
  long long mann_kendall_s = 0;
  std::optional<double> mk_p_value;
  std::optional<double> spearman;
  std::optional<double> kurtosis_late;
  double iqr_late = 0.0;
  int n_trend = 0;
  int l_window = 0;
};

}  // namespace sosim
