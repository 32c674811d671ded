#include "sosim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sosim/errors.hpp"
#include "sosim/numeric.hpp"

namespace sosim {

Opinion classify(double rating, double threshold) {
  return static_cast<double>(round_half_up(rating)) >= threshold
             ? Opinion::kPositive
             : Opinion::kNegative;
}

McoSeries mco_series(const RatingSequence& seq, double threshold,
                     int start_round) {
  const int total = static_cast<int>(seq.events.size());
  if (start_round < 1) start_round = 1;
  if (total < start_round)
    throw SequenceTooShort("mco_series: sequence " + seq.movie_id + " has " +
                           std::to_string(total) + " rounds, start_round " +
                           std::to_string(start_round));

  McoSeries out{seq.movie_id, start_round, {}};
  out.steps.reserve(static_cast<std::size_t>(total - start_round + 1));
  int positives = 0;
  for (int k = 1; k <= total; ++k) {
    const RatingEvent& e = seq.events[static_cast<std::size_t>(k - 1)];
    if (classify(e.rating, threshold) == Opinion::kPositive) ++positives;
    if (k < start_round) continue;  // counted, not reported
    const double pos = static_cast<double>(positives) / k;
    const double neg = 1.0 - pos;  // every rating is positive or negative
    out.steps.push_back({k, pos, neg, std::max(pos, neg)});
  }
  return out;
}

namespace {

std::vector<double> mco_values(const McoSeries& series) {
  std::vector<double> v;
  v.reserve(series.steps.size());
  for (const McoStep& s : series.steps) v.push_back(s.mco);
  return v;
}

// 1-based Fenwick tree over compressed ranks.
class Fenwick {
 public:
  explicit Fenwick(int n) : tree_(static_cast<std::size_t>(n) + 1, 0) {}

  void add(int i) {
    for (; i < static_cast<int>(tree_.size()); i += i & -i) ++tree_[static_cast<std::size_t>(i)];
  }

  int prefix(int i) const {  // count of inserted ranks <= i
    int s = 0;
    for (; i > 0; i -= i & -i) s += tree_[static_cast<std::size_t>(i)];
    return s;
  }

 private:
  std::vector<int> tree_;
};

}  // namespace

MannKendallResult mann_kendall_s(std::span<const double> values) {
  const int n = static_cast<int>(values.size());
  if (n < 2) throw SeriesTooShort("mann_kendall_s: need at least 2 points");

  // Rank-compress: equal doubles share a rank.
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const int distinct = static_cast<int>(sorted.size());

  Fenwick bit(distinct);
  long long s = 0;
  std::vector<long long> tie_count(static_cast<std::size_t>(distinct), 0);
  for (int t = 0; t < n; ++t) {
    const int rank = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(),
                                                       values[static_cast<std::size_t>(t)]) -
                                      sorted.begin()) +
                     1;
    const int below = bit.prefix(rank - 1);   // earlier values < current
    const int at_or_below = bit.prefix(rank);
    const int above = t - at_or_below;        // earlier values > current
    s += below - above;
    bit.add(rank);
    ++tie_count[static_cast<std::size_t>(rank - 1)];
  }

  // Normal approximation with tie-corrected variance.
  const double nn = n;
  double var = nn * (nn - 1.0) * (2.0 * nn + 5.0);
  for (long long t : tie_count) {
    const double td = static_cast<double>(t);
    var -= td * (td - 1.0) * (2.0 * td + 5.0);
  }
  var /= 18.0;

  MannKendallResult result;
  result.s = s;
  if (var <= 0.0) {
    result.p_value = 1.0;
    return result;
  }
  double z = 0.0;
  if (s > 0)
    z = (static_cast<double>(s) - 1.0) / std::sqrt(var);
  else if (s < 0)
    z = (static_cast<double>(s) + 1.0) / std::sqrt(var);
  result.p_value = std::erfc(std::abs(z) / std::sqrt(2.0));
  return result;
}

MannKendallResult mann_kendall_s(const McoSeries& series) {
  return mann_kendall_s(mco_values(series));
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });

  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) share the average 1-based rank
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw SeriesTooShort("spearman_rho: need at least 2 points");

  const std::vector<double> vr = average_ranks(values);
  const double mean_rank = (static_cast<double>(n) + 1.0) / 2.0;

  double num = 0.0, dv = 0.0, dt = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = vr[i] - mean_rank;                       // value rank dev
    const double b = static_cast<double>(i) + 1.0 - mean_rank;  // time rank dev
    num += a * b;
    dv += a * a;
    dt += b * b;
  }
  if (dv == 0.0)
    throw ConstantSeries("spearman_rho: all values tied, rho undefined");
  return num / std::sqrt(dv * dt);
}

double spearman_rho(const McoSeries& series) {
  return spearman_rho(mco_values(series));
}

std::vector<double> late_window(const RatingSequence& seq, int l) {
  if (l < 1) throw SequenceTooShort("late_window: l must be positive");
  if (static_cast<std::size_t>(l) > seq.events.size())
    throw SequenceTooShort("late_window: sequence " + seq.movie_id + " has " +
                           std::to_string(seq.events.size()) +
                           " events, window " + std::to_string(l));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(l));
  for (std::size_t i = seq.events.size() - static_cast<std::size_t>(l);
       i < seq.events.size(); ++i)
    out.push_back(seq.events[i].rating);
  return out;
}

double excess_kurtosis(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw SeriesTooShort("excess_kurtosis: need at least 2 values");

  const double mu = mean(values);
  double var = 0.0;
  for (double x : values) var += (x - mu) * (x - mu);
  var /= static_cast<double>(n);
  if (var == 0.0) throw ZeroVariance("excess_kurtosis: all values equal");

  const double sigma = std::sqrt(var);
  double fourth = 0.0;
  for (double x : values) {
    const double z = (x - mu) / sigma;
    fourth += z * z * z * z;
  }
  return fourth / static_cast<double>(n) - 3.0;
}

double iqr(std::span<const double> values) {
  if (values.empty()) return 0.0;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
  };
  return quantile(0.75) - quantile(0.25);
}

double rating_distance(double rating, double history_avg) {
  return std::abs(rating - history_avg);
}

}  // namespace sosim
