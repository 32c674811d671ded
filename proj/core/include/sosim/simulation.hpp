#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sosim/agents.hpp"
#include "sosim/types.hpp"

namespace sosim {

// ScenarioConfig plus the backend parameters needed to replay a run.
// Exactly one of `synthetic` / `llm` matches scenario.backend_id.
struct ExperimentConfig {
  ScenarioConfig scenario;
  std::optional<SyntheticPolicy> synthetic;
  std::optional<LlmBackendConfig> llm;
};

struct MovieFailure {
  std::string movie_id;
  std::string error;
};

// Complete, replayable record of one experiment. Maps are keyed
// deterministically; created_at is the only field excluded from
// reproducibility comparisons.
struct RunRecord {
  ExperimentConfig config;
  std::vector<RatingSequence> movie_sequences;
  std::map<std::string, std::vector<std::string>> agent_order_per_movie;
  std::map<std::string, std::string> persona_assignment;  // agent -> persona
  std::vector<MovieFailure> failures;
  std::string created_at;  // ISO-8601 UTC
  int format_version = 1;

  const RatingSequence* find_sequence(const std::string& movie_id) const;
};

struct RosterEntry {
  std::string agent_id;
  std::optional<Persona> persona;
};

// warmup_m WARMUP events with integer ratings uniform on {1..M}; event i is
// seeded from derive_seed(master, "warmup:<movie_id>", i).
std::vector<RatingEvent> generate_warmups(const ScenarioConfig& cfg,
                                          const std::string& movie_id);

// Deterministic agent roster ids: agent_000, agent_001, ...
std::vector<std::string> make_agent_ids(int population_n);

// Sequential rating loop for one movie: warm-ups first, then every roster
// agent in a seeded random order. Each agent sees the running mean of the
// raw ratings so far (warm-ups included only when visible), rounded to the
// configured display precision. Results do not depend on the roster's input
// order; the order comes only from the derived seed.
RatingSequence run_movie(const ScenarioConfig& cfg, const MovieItem& movie,
                         const std::vector<RosterEntry>& roster,
                         RatingAgent& backend);

// One RatingSequence per movie; per-movie work may run on up to `jobs`
// threads (the loop within a movie is inherently sequential). A failed
// movie lands in the failure manifest and aborts nothing else.
// Throws InsufficientPersonas before any work when the persona pool is
// too small.
RunRecord run_experiment(const ExperimentConfig& config,
                         const std::vector<MovieItem>& movies,
                         const std::vector<Persona>& personas,
                         RatingAgent& backend, int jobs = 1);

}  // namespace sosim
