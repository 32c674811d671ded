#include "sosim/types.hpp"

#include <cctype>
#include <cmath>
#include <span>

#include "sosim/errors.hpp"
#include "sosim/numeric.hpp"

namespace sosim {

ValidationReport validate_config(const ScenarioConfig& cfg) {
  ValidationReport report;
  auto fail = [&](const char* field, std::string msg) {
    report.issues.push_back({field, std::move(msg)});
  };

  if (cfg.scale.levels_max < 2)
    fail("levels_max", "rating scale needs at least 2 levels");
  if (cfg.population_n < 1) fail("population_n", "population must be positive");
  if (cfg.warmup_m < 0) fail("warmup_m", "warm-up count cannot be negative");
  if (cfg.late_window_l < 1)
    fail("late_window_l", "late window must be positive");
  else if (cfg.late_window_l > cfg.population_n + cfg.warmup_m)
    fail("late_window_l", "late window exceeds sequence length (N + m)");
  if (cfg.samples_per_agent < 1)
    fail("samples_per_agent", "at least one sample per agent is required");
  if (!(cfg.positive_threshold > 1.0 &&
        cfg.positive_threshold <= cfg.scale.levels_max))
    fail("positive_threshold", "threshold must lie in (1, levels_max]");
  if (cfg.history_display_decimals < 0 || cfg.history_display_decimals > 9)
    fail("history_display_decimals", "display decimals must be in [0, 9]");
  if (cfg.backend_id.empty()) fail("backend_id", "backend_id must be set");
  return report;
}

void validate_event(const RatingEvent& event, const RatingScale& scale) {
  auto bad = [&](const std::string& what) {
    throw IoError("event " + event.movie_id + "/" +
                  std::to_string(event.step_index) + ": " + what);
  };
  if (event.raw_samples.empty()) bad("raw_samples empty");
  for (int s : event.raw_samples)
    if (s < 1 || s > scale.levels_max) bad("sample outside scale");
  if (event.rating < 1.0 || event.rating > scale.levels_max)
    bad("rating outside [1, levels_max]");
  if (std::abs(mean(std::span<const int>(event.raw_samples)) - event.rating) >
      1e-12)
    bad("rating does not equal mean of raw_samples");
  if (event.is_warmup()) {
    if (event.raw_samples.size() != 1) bad("warm-up must have one sample");
    if (event.observed_history_avg) bad("warm-up carries a history average");
  }
  if (event.observed_history_avg &&
      (*event.observed_history_avg < 1.0 ||
       *event.observed_history_avg > scale.levels_max))
    bad("observed_history_avg outside scale");
}

void validate_sequence(const RatingSequence& seq, const RatingScale& scale) {
  if (seq.warmup_len < 0)
    throw IoError("sequence " + seq.movie_id + ": negative warmup_len");
  if (static_cast<std::size_t>(seq.warmup_len) > seq.events.size())
    throw IoError("sequence " + seq.movie_id + ": warmup_len exceeds length");
  for (std::size_t i = 0; i < seq.events.size(); ++i) {
    const RatingEvent& e = seq.events[i];
    if (e.step_index != static_cast<int>(i))
      throw IoError("sequence " + seq.movie_id + ": step_index gap at " +
                    std::to_string(i));
    if (e.movie_id != seq.movie_id)
      throw IoError("sequence " + seq.movie_id + ": foreign movie_id at step " +
                    std::to_string(i));
    const bool should_be_warmup = static_cast<int>(i) < seq.warmup_len;
    if (e.is_warmup() != should_be_warmup)
      throw IoError("sequence " + seq.movie_id + ": warm-up placement at step " +
                    std::to_string(i));
    validate_event(e, scale);
  }
}

void validate_movie(const MovieItem& movie) {
  if (!is_valid_identifier(movie.movie_id))
    throw IoError("movie_id '" + movie.movie_id + "' is not a valid identifier");
  if (movie.title.empty())
    throw IoError("movie " + movie.movie_id + ": title empty");
  if (movie.overview.empty())
    throw IoError("movie " + movie.movie_id + ": overview empty");
}

void validate_persona(const Persona& persona) {
  if (!is_valid_identifier(persona.persona_id))
    throw IoError("persona_id '" + persona.persona_id +
                  "' is not a valid identifier");
  if (persona.description.empty())
    throw IoError("persona " + persona.persona_id + ": description empty");
}

bool is_valid_identifier(const std::string& id) {
  if (id.empty() || id.size() > 128) return false;
  for (char c : id) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                    c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

}  // namespace sosim
