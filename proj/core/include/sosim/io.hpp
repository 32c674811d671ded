#pragma once

#include <string>
#include <vector>

#include "sosim/simulation.hpp"
#include "sosim/types.hpp"

namespace sosim {

// JSON-Lines loaders. Field sets are closed: an unknown field anywhere is
// an error naming the field and line.
std::vector<MovieItem> load_movies_jsonl(const std::string& path);
std::vector<Persona> load_personas_jsonl(const std::string& path);

// Experiment config as a single strict JSON document (unknown fields
// rejected). The optional "synthetic" / "llm" sections carry the backend
// parameters that scenario.backend_id selects.
ExperimentConfig experiment_config_from_json(const std::string& text);
std::string experiment_config_to_json(const ExperimentConfig& config);
ExperimentConfig load_experiment_config(const std::string& path);

// RunRecord directory layout:
//   config.json                 effective ExperimentConfig
//   manifest.json               format_version, created_at, movie ids,
//                               failures, agent orders, persona assignment
//   ratings_<movie_id>.jsonl    one RatingEvent per line
void save_run_record(const RunRecord& record, const std::string& dir);
RunRecord load_run_record(const std::string& dir);

// Post-hoc consistency audit of a record: sequence structure, sample means,
// and every observed_history_avg recomputed from scratch (tolerance 1e-12).
// Returns human-readable problem descriptions; empty means the record is
// internally consistent.
std::vector<std::string> audit_run_record(const RunRecord& record);

}  // namespace sosim
