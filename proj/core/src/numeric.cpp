#include "sosim/numeric.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sosim {

long long round_half_up(double x) {
  const double f = std::floor(x);
  return static_cast<long long>(f) + ((x - f) >= 0.5 ? 1 : 0);
}

double mean(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double mean(std::span<const int> values) {
  double sum = 0.0;
  for (int v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

namespace {

// Decompose the shortest round-trip decimal form of |value| into a digit
// string plus the exponent of its first digit (value ~ 0.digits * 10^exp10).
struct DecimalParts {
  bool negative = false;
  std::string digits;  // no leading/trailing zeros unless value == 0
  int exp10 = 0;       // digits[0] has place value 10^(exp10 - 1)
};

DecimalParts decompose(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  assert(res.ec == std::errc());
  std::string s(buf, res.ptr);

  DecimalParts out;
  std::size_t i = 0;
  if (i < s.size() && s[i] == '-') {
    out.negative = true;
    ++i;
  }
  std::string int_part, frac_part;
  int exp_part = 0;
  for (; i < s.size() && s[i] != '.' && s[i] != 'e' && s[i] != 'E'; ++i)
    int_part += s[i];
  if (i < s.size() && s[i] == '.') {
    ++i;
    for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) frac_part += s[i];
  }
  if (i < s.size()) exp_part = std::atoi(s.c_str() + i + 1);

  std::string digits = int_part + frac_part;
  int exp10 = static_cast<int>(int_part.size()) + exp_part;
  std::size_t lead = 0;
  while (lead < digits.size() && digits[lead] == '0') ++lead;
  digits.erase(0, lead);
  exp10 -= static_cast<int>(lead);
  while (!digits.empty() && digits.back() == '0') digits.pop_back();
  if (digits.empty()) {
    out.digits = "0";
    out.exp10 = 1;
  } else {
    out.digits = std::move(digits);
    out.exp10 = exp10;
  }
  return out;
}

}  // namespace

std::string format_fixed_half_up(double value, int decimals) {
  if (decimals < 0) throw std::invalid_argument("decimals must be >= 0");
  if (!std::isfinite(value))
    throw std::invalid_argument("cannot format non-finite value");

  DecimalParts p = decompose(value);

  // Kept digits: everything with place value >= 10^-decimals.
  const int keep = p.exp10 + decimals;
  std::string kept;
  bool round_up = false;
  if (keep <= 0) {
    round_up = (keep == 0) && !p.digits.empty() && p.digits[0] >= '5' &&
               p.digits != "0";
    kept = "0";
  } else {
    kept = p.digits.substr(0, static_cast<std::size_t>(keep));
    while (static_cast<int>(kept.size()) < keep) kept += '0';
    if (static_cast<std::size_t>(keep) < p.digits.size())
      round_up = p.digits[static_cast<std::size_t>(keep)] >= '5';
  }
  if (round_up) {
    int i = static_cast<int>(kept.size()) - 1;
    for (; i >= 0; --i) {
      if (kept[i] != '9') {
        ++kept[i];
        break;
      }
      kept[i] = '0';
    }
    if (i < 0) kept.insert(kept.begin(), '1');
  }

  // kept now holds the rounded digits ending at place 10^-decimals.
  std::string out;
  if (p.negative && kept.find_first_not_of('0') != std::string::npos)
    out += '-';
  const int int_len = static_cast<int>(kept.size()) - decimals;
  if (int_len <= 0) {
    out += '0';
  } else {
    out += kept.substr(0, static_cast<std::size_t>(int_len));
  }
  if (decimals > 0) {
    out += '.';
    std::string frac =
        int_len >= 0 ? kept.substr(static_cast<std::size_t>(std::max(int_len, 0)))
                     : std::string(static_cast<std::size_t>(-int_len), '0') + kept;
    frac.resize(static_cast<std::size_t>(decimals), '0');
    out += frac;
  }
  return out;
}

std::string format_sig6(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value,
                           std::chars_format::general, 6);
  assert(res.ec == std::errc());
  return std::string(buf, res.ptr);
}

}  // namespace sosim
