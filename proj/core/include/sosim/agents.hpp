#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sosim/types.hpp"

namespace sosim {

// Everything an agent sees for one rating step. The history signal is
// carried only as the pre-formatted display string, so synthetic policies
// and remote models react to exactly the same information.
struct AgentContext {
  MovieItem movie;
  std::optional<Persona> persona;
  std::optional<std::string> history_avg_display;
  RatingScale scale;
  std::uint64_t rng_seed = 0;
};

// Deterministic policies used to verify the protocol and metrics offline.
//   POSITIVITY_PRIOR  always aims at base_rating (a built-in positive bias)
//   PERSONA_PRIOR     aims at a per-persona base, persona_hash_spread wide
//   CONFORMIST        mixes the persona base with the observed climate:
//                     target = (1 - lambda) * base + lambda * history
struct SyntheticPolicy {
  enum class Kind { kPositivityPrior, kPersonaPrior, kConformist };

  Kind kind = Kind::kPositivityPrior;
  double base_rating = 8.0;
  double conformity_weight = 0.0;   // lambda, CONFORMIST only, in [0, 1]
  double noise_sd = 0.0;
  double persona_hash_spread = 0.0;  // PERSONA_PRIOR / CONFORMIST
};

// Remote chat-completion backend settings.
struct LlmBackendConfig {
  std::string endpoint_url;
  std::string model_name;
  double temperature = 0.1;
  int max_retries = 2;
  int timeout_ms = 30000;
  std::string auth_token_env_var;
};

// Instantiates the rating prompt for the context. The four scenario flag
// pairs produce the four fixed template skeletons; only placeholder content
// varies. Genres join with ", ". The average-rating line appears only when
// the context carries a climate display.
// Throws MissingPersona / MissingHistory on context/scenario mismatch.
std::string render_prompt(const AgentContext& ctx, const ScenarioConfig& scenario);

// One deterministic integer rating. Same (policy, ctx) always gives the
// same output, on every platform.
// Throws MissingHistory for CONFORMIST without a history value.
int synthetic_rate(const SyntheticPolicy& policy, const AgentContext& ctx);

// First integer token in the text whose value lies in [1, levels_max],
// scanning maximal digit runs ("10" wins over "1").
// Throws NoRatingFound.
int parse_rating(const std::string& response_text, const RatingScale& scale);

// Backend abstraction the simulator drives: n independent integer samples
// for one step.
class RatingAgent {
 public:
  virtual ~RatingAgent() = default;
  virtual std::vector<int> rate(const AgentContext& ctx,
                                const ScenarioConfig& scenario,
                                int n_samples) = 0;
};

class SyntheticAgent : public RatingAgent {
 public:
  explicit SyntheticAgent(SyntheticPolicy policy);

  std::vector<int> rate(const AgentContext& ctx, const ScenarioConfig& scenario,
                        int n_samples) override;

  const SyntheticPolicy& policy() const { return policy_; }

 private:
  SyntheticPolicy policy_;
};

// Parses "synthetic:positivity_prior" etc.; throws ConfigError otherwise.
SyntheticPolicy::Kind synthetic_kind_from_id(const std::string& backend_id);

}  // namespace sosim
