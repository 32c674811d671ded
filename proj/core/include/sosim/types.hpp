#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sosim {

// Sentinel agent_id carried by warm-up events.
inline constexpr const char* kWarmupAgentId = "__warmup__";

// M-level cardinal rating scale; valid integer ratings are {1, ..., levels_max}.
struct RatingScale {
  int levels_max = 10;
};

// One agent's rating of one movie at one sequence position. `rating` is the
// arithmetic mean of `raw_samples`; it is fractional whenever more than one
// sample was drawn and they disagree. `observed_history_avg` is the
// collective-opinion value the agent saw (absent when no history was shown).
struct RatingEvent {
  std::string movie_id;
  int step_index = 0;  // 0-based position in the sequence
  std::string agent_id;
  double rating = 0.0;
  std::vector<int> raw_samples;
  std::optional<double> observed_history_avg;
  std::uint64_t rng_seed = 0;

  bool is_warmup() const { return agent_id == kWarmupAgentId; }
};

// Ordered ratings for one movie, warm-up prefix first.
struct RatingSequence {
  std::string movie_id;
  int warmup_len = 0;
  std::vector<RatingEvent> events;

  std::size_t size() const { return events.size(); }
};

struct MovieItem {
  std::string movie_id;
  std::string title;
  std::vector<std::string> genres;
  std::string overview;
  std::string release_date;  // ISO-8601
  std::optional<double> external_avg;  // informational only, never shown to agents
};

struct Persona {
  std::string persona_id;
  std::string description;
};

// Full experiment specification for one run.
struct ScenarioConfig {
  bool use_history = false;
  bool use_persona = false;
  RatingScale scale;
  int population_n = 100;
  int warmup_m = 10;
  int late_window_l = 30;
  int samples_per_agent = 3;
  double positive_threshold = 6.0;
  std::uint64_t master_seed = 0;
  std::string backend_id;
  int history_display_decimals = 1;
  bool warmup_visible_to_agents = true;
};

struct ValidationIssue {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
};

// Checks every ScenarioConfig invariant; a passing config is usable by every
// downstream module. Violations are reported, not thrown.
ValidationReport validate_config(const ScenarioConfig& cfg);

// Structural checks used by loaders and the replay auditor. Throw IoError
// with a description of the first violated invariant.
void validate_event(const RatingEvent& event, const RatingScale& scale);
void validate_sequence(const RatingSequence& seq, const RatingScale& scale);
void validate_movie(const MovieItem& movie);
void validate_persona(const Persona& persona);

// Identifiers double as file-name fragments, so the charset is restricted.
bool is_valid_identifier(const std::string& id);

}  // namespace sosim
