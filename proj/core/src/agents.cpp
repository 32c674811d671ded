#include "sosim/agents.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "sosim/errors.hpp"
#include "sosim/numeric.hpp"
#include "sosim/rng.hpp"

namespace sosim {

std::string render_prompt(const AgentContext& ctx,
                          const ScenarioConfig& scenario) {
  if (scenario.use_persona && !ctx.persona)
    throw MissingPersona("render_prompt: scenario expects a persona");
  if (!scenario.use_persona && ctx.persona)
    throw MissingPersona("render_prompt: context carries an unexpected persona");
  if (!scenario.use_history && ctx.history_avg_display)
    throw MissingHistory(
        "render_prompt: context carries history the scenario disables");

  const int m_max = scenario.scale.levels_max;
  const std::string max_s = std::to_string(m_max);
  const std::string mid_s = std::to_string((m_max + 1) / 2);

  std::string genres;
  for (std::size_t i = 0; i < ctx.movie.genres.size(); ++i) {
    if (i > 0) genres += ", ";
    genres += ctx.movie.genres[i];
  }

  std::string out = "Please provide your rating for the movie.\n\n";
  if (scenario.use_persona) {
    out += "# Your Character Profile\nYou are " + ctx.persona->description +
           "\n\n";
  }
  out += "# Movie Information\nTitle: " + ctx.movie.title + "\nGenres: " +
         genres + "\nOverview: " + ctx.movie.overview + "\n";
  if (ctx.history_avg_display) {
    out += "Movie average rating: " + *ctx.history_avg_display + " (1-" +
           max_s + ")\n";
  }
  // The bare template carries an extra blank line before the rating block.
  if (!scenario.use_persona && !scenario.use_history) out += "\n";
  out += "\n# Rating Principle\nRate the above movie on an integer scale from 1 to " +
         max_s + ", where:\n\n- 1 = Awful/Abysmal (unwatchable)\n- " + mid_s +
         " = Mediocre/Unsure (forgettable)\n- " + max_s +
         " = Perfect/Masterpiece (flawless)\n\n# Output Principle\n"
         "Provide only a single integer (1-" +
         max_s + ") without extra text.\n";
  return out;
}

namespace {

double parse_history_display(const AgentContext& ctx) {
  if (!ctx.history_avg_display)
    throw MissingHistory("synthetic_rate: conformist needs a history value");
  return std::strtod(ctx.history_avg_display->c_str(), nullptr);
}

}  // namespace

int synthetic_rate(const SyntheticPolicy& policy, const AgentContext& ctx) {
  const double u = ctx.persona ? stable_unit_hash(ctx.persona->persona_id) : 0.0;
  const double persona_base =
      policy.base_rating + policy.persona_hash_spread * u;

  double target = 0.0;
  switch (policy.kind) {
    case SyntheticPolicy::Kind::kPositivityPrior:
      target = policy.base_rating;
      break;
    case SyntheticPolicy::Kind::kPersonaPrior:
      target = persona_base;
      break;
    case SyntheticPolicy::Kind::kConformist: {
      const double lambda = policy.conformity_weight;
      target = (1.0 - lambda) * persona_base + lambda * parse_history_display(ctx);
      break;
    }
  }

  if (policy.noise_sd > 0.0) {
    SplitMix64 rng(ctx.rng_seed);
    target += rng.next_gaussian(0.0, policy.noise_sd);
  }

  const long long rounded = round_half_up(target);
  return static_cast<int>(
      std::clamp<long long>(rounded, 1, ctx.scale.levels_max));
}

int parse_rating(const std::string& response_text, const RatingScale& scale) {
  const std::size_t n = response_text.size();
  std::size_t i = 0;
  while (i < n) {
    if (std::isdigit(static_cast<unsigned char>(response_text[i]))) {
      std::size_t j = i;
      long long value = 0;
      bool overflow = false;
      while (j < n && std::isdigit(static_cast<unsigned char>(response_text[j]))) {
        if (!overflow) {
          value = value * 10 + (response_text[j] - '0');
          if (value > scale.levels_max) overflow = true;
        }
        ++j;
      }
      if (!overflow && value >= 1 && value <= scale.levels_max)
        return static_cast<int>(value);
      i = j;
    } else {
      ++i;
    }
  }
  throw NoRatingFound("parse_rating: no integer in [1, " +
                      std::to_string(scale.levels_max) + "] in: " +
                      response_text.substr(0, 120));
}

SyntheticAgent::SyntheticAgent(SyntheticPolicy policy) : policy_(policy) {}

std::vector<int> SyntheticAgent::rate(const AgentContext& ctx,
                                      const ScenarioConfig& /*scenario*/,
                                      int n_samples) {
  std::vector<int> samples;
  samples.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    AgentContext sample_ctx = ctx;
    sample_ctx.rng_seed =
        derive_seed(ctx.rng_seed, "sample", static_cast<std::uint64_t>(i));
    samples.push_back(synthetic_rate(policy_, sample_ctx));
  }
  return samples;
}

SyntheticPolicy::Kind synthetic_kind_from_id(const std::string& backend_id) {
  if (backend_id == "synthetic:positivity_prior")
    return SyntheticPolicy::Kind::kPositivityPrior;
  if (backend_id == "synthetic:persona_prior")
    return SyntheticPolicy::Kind::kPersonaPrior;
  if (backend_id == "synthetic:conformist")
    return SyntheticPolicy::Kind::kConformist;
  throw ConfigError("unknown synthetic backend id: " + backend_id);
}

}  // namespace sosim
