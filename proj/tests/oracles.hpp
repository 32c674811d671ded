// Independent reference implementations the tests hold the library to.
// Everything here is written from the plain definitions, deliberately not
// sharing code with the library paths it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracles {

// Mann-Kendall S as the literal O(n^2) pair sum.
inline long long brute_mann_kendall(const std::vector<double>& v) {
  long long s = 0;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    for (std::size_t t = k + 1; t < v.size(); ++t) {
      if (v[t] > v[k])
        ++s;
      else if (v[t] < v[k])
        --s;
    }
  }
  return s;
}

// Average ranks by counting: rank_i = #less + (#equal - 1)/2 + 1.
inline std::vector<double> counting_ranks(const std::vector<double>& v) {
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t less = 0, equal = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) ++less;
      if (v[j] == v[i]) ++equal;
    }
    ranks[i] = static_cast<double>(less) +
               (static_cast<double>(equal) - 1.0) / 2.0 + 1.0;
  }
  return ranks;
}

// Spearman rho as Pearson over counting ranks vs time, computed with
// explicit mean passes.
inline double rank_pearson(const std::vector<double>& v) {
  const std::size_t n = v.size();
  const std::vector<double> r = counting_ranks(v);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i + 1);

  double mr = 0.0, mt = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mr += r[i];
    mt += t[i];
  }
  mr /= static_cast<double>(n);
  mt /= static_cast<double>(n);

  double cov = 0.0, vr = 0.0, vt = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (r[i] - mr) * (t[i] - mt);
    vr += (r[i] - mr) * (r[i] - mr);
    vt += (t[i] - mt) * (t[i] - mt);
  }
  return cov / std::sqrt(vr * vt);
}

// The classic d^2 closed form; valid only for tie-free values.
inline double spearman_d2(const std::vector<double>& v) {
  const std::size_t n = v.size();
  const std::vector<double> r = counting_ranks(v);
  double sum_d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = r[i] - static_cast<double>(i + 1);
    sum_d2 += d * d;
  }
  const double nn = static_cast<double>(n);
  return 1.0 - 6.0 * sum_d2 / (nn * (nn * nn - 1.0));
}

// Excess kurtosis straight from the definition, accumulated in long double.
inline double kurtosis_definition(const std::vector<double>& v) {
  const long double n = static_cast<long double>(v.size());
  long double mu = 0.0L;
  for (double x : v) mu += x;
  mu /= n;
  long double var = 0.0L;
  for (double x : v) var += (x - mu) * (x - mu);
  var /= n;
  const long double sigma = std::sqrt(var);
  long double fourth = 0.0L;
  for (double x : v) {
    const long double z = (x - mu) / sigma;
    fourth += z * z * z * z;
  }
  return static_cast<double>(fourth / n - 3.0L);
}

// Quartiles with explicit floor/ceil interpolation at q*(n-1).
inline double iqr_definition(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  auto quant = [&](double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const double lo = std::floor(pos);
    const double hi = std::ceil(pos);
    const double a = v[static_cast<std::size_t>(lo)];
    const double b = v[static_cast<std::size_t>(hi)];
    return a + (pos - lo) * (b - a);
  };
  return quant(0.75) - quant(0.25);
}

// Cumulative positive proportion recounted from scratch per reported step:
// counts always run from the first rated round, reporting starts later.
inline std::vector<double> recount_pos(const std::vector<int>& rounded,
                                       double threshold, int start_round) {
  std::vector<double> pos;
  for (std::size_t k = static_cast<std::size_t>(start_round);
       k <= rounded.size(); ++k) {
    int count = 0;
    for (std::size_t t = 1; t <= k; ++t)
      if (static_cast<double>(rounded[t - 1]) >= threshold) ++count;
    pos.push_back(static_cast<double>(count) / static_cast<double>(k));
  }
  return pos;
}

}  // namespace oracles
