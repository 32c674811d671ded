#include "sosim/aggregation.hpp"

#include <algorithm>

#include "sosim/errors.hpp"
#include "sosim/numeric.hpp"

namespace sosim {

OpinionHistogram histogram(std::span<const double> history,
                           const RatingScale& scale, const WeightRule& rule) {
  if (history.empty()) throw EmptyHistory("histogram: history is empty");

  const bool custom = rule.kind == WeightRule::Kind::kCustom;
  if (custom && rule.weights.size() != history.size())
    throw WeightLengthMismatch("histogram: " +
                               std::to_string(rule.weights.size()) +
                               " weights for " +
                               std::to_string(history.size()) + " ratings");
  if (custom)
    for (double w : rule.weights)
      if (!(w > 0.0)) throw NonPositiveWeight("histogram: weight <= 0");

  OpinionHistogram h{scale,
                     std::vector<double>(static_cast<std::size_t>(scale.levels_max), 0.0)};
  double total = 0.0;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const double w = custom ? rule.weights[i] : 1.0;
    long long level = round_half_up(history[i]);
    level = std::clamp<long long>(level, 1, scale.levels_max);
    h.mass[static_cast<std::size_t>(level - 1)] += w;
    total += w;
  }
  for (double& m : h.mass) m /= total;
  return h;
}

double climate(std::span<const double> history, const RatingScale& scale,
               const WeightRule& rule) {
  const OpinionHistogram h = histogram(history, scale, rule);
  double value = 0.0;
  for (int m = 1; m <= scale.levels_max; ++m)
    value += m * h.mass[static_cast<std::size_t>(m - 1)];
  return value;
}

std::string format_climate_for_prompt(double value, int decimals) {
  return format_fixed_half_up(value, decimals);
}

}  // namespace sosim
