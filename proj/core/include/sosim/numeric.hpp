#pragma once

#include <span>
#include <string>
#include <vector>

namespace sosim {

// Round to the nearest integer, halves away from zero toward +inf
// (round-half-up). Exact for every representable input: no `x + 0.5`
// detour that could shift the half boundary.
long long round_half_up(double x);

// Arithmetic mean, summed left to right. Callers that need replay-stable
// results rely on that fixed order.
double mean(std::span<const double> values);
double mean(std::span<const int> values);

// Fixed-point decimal string with exactly `decimals` fractional digits,
// rounded half-up in decimal space. Works on the shortest round-trip
// decimal form of `value`, so format_fixed_half_up(6.55, 1) == "6.6"
// even though the binary double sits just below 6.55.
std::string format_fixed_half_up(double value, int decimals);

// Shortest locale-independent rendering at 6 significant digits; used by
// every report writer so outputs are byte-stable across platforms.
std::string format_sig6(double value);

}  // namespace sosim
