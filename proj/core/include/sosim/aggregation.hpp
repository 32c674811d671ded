#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sosim/types.hpp"

namespace sosim {

// Distribution of a rating history over the M integer levels.
// mass[m-1] is the weighted fraction of ratings binned to level m.
struct OpinionHistogram {
  RatingScale scale;
  std::vector<double> mass;

  double at(int level) const { return mass.at(static_cast<std::size_t>(level - 1)); }
};

// Weighted aggregation rule. UNIFORM weights every rating equally (the
// "average rating rule"); CUSTOM carries one strictly positive weight per
// rating in the history.
struct WeightRule {
  enum class Kind { kUniform, kCustom };

  Kind kind = Kind::kUniform;
  std::vector<double> weights;  // CUSTOM only, length == history length

  static WeightRule uniform() { return {}; }
  static WeightRule custom(std::vector<double> w) {
    return {Kind::kCustom, std::move(w)};
  }
};

// Weighted level histogram of a rating history. Fractional ratings are
// binned by rounding half-up to the nearest integer level before the
// indicator test; the weights never are.
// Throws EmptyHistory, WeightLengthMismatch, NonPositiveWeight.
OpinionHistogram histogram(std::span<const double> history,
                           const RatingScale& scale, const WeightRule& rule);

// Collective opinion climate: sum over levels of m * mass[m]. Under the
// UNIFORM rule with integer ratings this is exactly the arithmetic mean of
// the history. Throws EmptyHistory.
double climate(std::span<const double> history, const RatingScale& scale,
               const WeightRule& rule);

// Renders a climate value the way prompts display it: fixed-point,
// `decimals` fractional digits, round-half-up.
std::string format_climate_for_prompt(double value, int decimals);

}  // namespace sosim
