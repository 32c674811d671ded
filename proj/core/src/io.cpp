#include "sosim/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <span>
#include <sstream>

#include <json.hpp>

#include "sosim/errors.hpp"
#include "sosim/numeric.hpp"

namespace sosim {

namespace fs = std::filesystem;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

json parse_strict(const std::string& text, const std::string& where) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError(where + ": invalid JSON");
  return doc;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key))
      throw ConfigError(where + ": unknown field '" + key + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <typename Fn>
void for_each_jsonl_line(const std::string& path, Fn fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fn(parse_strict(line, path + ":" + std::to_string(line_no)), line_no);
  }
}

}  // namespace

std::vector<MovieItem> load_movies_jsonl(const std::string& path) {
  static const std::set<std::string> kFields = {
      "movie_id", "title", "genres", "overview", "release_date", "external_avg"};
  std::vector<MovieItem> movies;
  for_each_jsonl_line(path, [&](const json& doc, int line_no) {
    const std::string where = path + ":" + std::to_string(line_no);
    reject_unknown(doc, kFields, where);
    MovieItem m;
    try {
      m.movie_id = doc.at("movie_id").get<std::string>();
      m.title = doc.at("title").get<std::string>();
      m.genres = doc.at("genres").get<std::vector<std::string>>();
      m.overview = doc.at("overview").get<std::string>();
      m.release_date = doc.at("release_date").get<std::string>();
      if (doc.contains("external_avg") && !doc["external_avg"].is_null())
        m.external_avg = doc["external_avg"].get<double>();
    } catch (const json::exception& e) {
      throw ConfigError(where + ": " + e.what());
    }
    try {
      validate_movie(m);
    } catch (const IoError& e) {
      throw IoError(where + ": " + e.what());
    }
    movies.push_back(std::move(m));
  });
  return movies;
}

std::vector<Persona> load_personas_jsonl(const std::string& path) {
  static const std::set<std::string> kFields = {"persona_id", "description"};
  std::vector<Persona> personas;
  for_each_jsonl_line(path, [&](const json& doc, int line_no) {
    const std::string where = path + ":" + std::to_string(line_no);
    reject_unknown(doc, kFields, where);
    Persona p;
    try {
      p.persona_id = doc.at("persona_id").get<std::string>();
      p.description = doc.at("description").get<std::string>();
    } catch (const json::exception& e) {
      throw ConfigError(where + ": " + e.what());
    }
    try {
      validate_persona(p);
    } catch (const IoError& e) {
      throw IoError(where + ": " + e.what());
    }
    personas.push_back(std::move(p));
  });
  return personas;
}

namespace {

SyntheticPolicy synthetic_from_json(const json& doc, const std::string& where) {
  static const std::set<std::string> kFields = {
      "kind", "base_rating", "conformity_weight", "noise_sd",
      "persona_hash_spread"};
  reject_unknown(doc, kFields, where);
  SyntheticPolicy p;
  const std::string kind = doc.value("kind", "positivity_prior");
  if (kind == "positivity_prior")
    p.kind = SyntheticPolicy::Kind::kPositivityPrior;
  else if (kind == "persona_prior")
    p.kind = SyntheticPolicy::Kind::kPersonaPrior;
  else if (kind == "conformist")
    p.kind = SyntheticPolicy::Kind::kConformist;
  else
    throw ConfigError(where + ": unknown synthetic kind '" + kind + "'");
  p.base_rating = doc.value("base_rating", 8.0);
  p.conformity_weight = doc.value("conformity_weight", 0.0);
  p.noise_sd = doc.value("noise_sd", 0.0);
  p.persona_hash_spread = doc.value("persona_hash_spread", 0.0);
  if (p.conformity_weight < 0.0 || p.conformity_weight > 1.0)
    throw ConfigError(where + ": conformity_weight outside [0, 1]");
  if (p.noise_sd < 0.0) throw ConfigError(where + ": noise_sd negative");
  if (p.persona_hash_spread < 0.0)
    throw ConfigError(where + ": persona_hash_spread negative");
  return p;
}

json synthetic_to_json(const SyntheticPolicy& p) {
  ordered_json doc;
  switch (p.kind) {
    case SyntheticPolicy::Kind::kPositivityPrior:
      doc["kind"] = "positivity_prior";
      break;
    case SyntheticPolicy::Kind::kPersonaPrior:
      doc["kind"] = "persona_prior";
      break;
    case SyntheticPolicy::Kind::kConformist:
      doc["kind"] = "conformist";
      break;
  }
  doc["base_rating"] = p.base_rating;
  doc["conformity_weight"] = p.conformity_weight;
  doc["noise_sd"] = p.noise_sd;
  doc["persona_hash_spread"] = p.persona_hash_spread;
  return doc;
}

LlmBackendConfig llm_from_json(const json& doc, const std::string& where) {
  static const std::set<std::string> kFields = {
      "endpoint_url", "model_name",  "temperature",
      "max_retries",  "timeout_ms",  "auth_token_env_var"};
  reject_unknown(doc, kFields, where);
  LlmBackendConfig cfg;
  cfg.endpoint_url = doc.value("endpoint_url", "");
  cfg.model_name = doc.value("model_name", "");
  cfg.temperature = doc.value("temperature", 0.1);
  cfg.max_retries = doc.value("max_retries", 2);
  cfg.timeout_ms = doc.value("timeout_ms", 30000);
  cfg.auth_token_env_var = doc.value("auth_token_env_var", "");
  if (cfg.endpoint_url.empty())
    throw ConfigError(where + ": endpoint_url must be set");
  if (cfg.temperature < 0.0) throw ConfigError(where + ": temperature negative");
  if (cfg.max_retries < 0) throw ConfigError(where + ": max_retries negative");
  if (cfg.timeout_ms < 1) throw ConfigError(where + ": timeout_ms not positive");
  return cfg;
}

json llm_to_json(const LlmBackendConfig& cfg) {
  ordered_json doc;
  doc["endpoint_url"] = cfg.endpoint_url;
  doc["model_name"] = cfg.model_name;
  doc["temperature"] = cfg.temperature;
  doc["max_retries"] = cfg.max_retries;
  doc["timeout_ms"] = cfg.timeout_ms;
  doc["auth_token_env_var"] = cfg.auth_token_env_var;
  return doc;
}

}  // namespace

ExperimentConfig experiment_config_from_json(const std::string& text) {
  static const std::set<std::string> kFields = {
      "use_history",       "use_persona",
      "levels_max",        "population_n",
      "warmup_m",          "late_window_l",
      "samples_per_agent", "positive_threshold",
      "master_seed",       "backend_id",
      "history_display_decimals", "warmup_visible_to_agents",
      "synthetic",         "llm"};
  const json doc = parse_strict(text, "config");
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(doc, kFields, "config");

  ExperimentConfig config;
  ScenarioConfig& s = config.scenario;
  try {
    s.use_history = doc.at("use_history").get<bool>();
    s.use_persona = doc.at("use_persona").get<bool>();
    s.scale.levels_max = doc.value("levels_max", 10);
    s.population_n = doc.at("population_n").get<int>();
    s.warmup_m = doc.at("warmup_m").get<int>();
    s.late_window_l = doc.at("late_window_l").get<int>();
    s.samples_per_agent = doc.value("samples_per_agent", 3);
    s.positive_threshold = doc.value("positive_threshold", 6.0);
    s.master_seed = doc.at("master_seed").get<std::uint64_t>();
    s.backend_id = doc.at("backend_id").get<std::string>();
    s.history_display_decimals = doc.value("history_display_decimals", 1);
    s.warmup_visible_to_agents = doc.value("warmup_visible_to_agents", true);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (doc.contains("synthetic"))
    config.synthetic = synthetic_from_json(doc["synthetic"], "config.synthetic");
  if (doc.contains("llm")) config.llm = llm_from_json(doc["llm"], "config.llm");

  if (s.backend_id.rfind("synthetic:", 0) == 0) {
    const auto kind = synthetic_kind_from_id(s.backend_id);
    if (!config.synthetic) config.synthetic = SyntheticPolicy{};
    config.synthetic->kind = kind;
  } else if (s.backend_id == "llm") {
    if (!config.llm)
      throw ConfigError("config: backend_id 'llm' needs an llm section");
  } else {
    throw ConfigError("config: unknown backend_id '" + s.backend_id + "'");
  }
  return config;
}

std::string experiment_config_to_json(const ExperimentConfig& config) {
  const ScenarioConfig& s = config.scenario;
  ordered_json doc;
  doc["use_history"] = s.use_history;
  doc["use_persona"] = s.use_persona;
  doc["levels_max"] = s.scale.levels_max;
  doc["population_n"] = s.population_n;
  doc["warmup_m"] = s.warmup_m;
  doc["late_window_l"] = s.late_window_l;
  doc["samples_per_agent"] = s.samples_per_agent;
  doc["positive_threshold"] = s.positive_threshold;
  doc["master_seed"] = s.master_seed;
  doc["backend_id"] = s.backend_id;
  doc["history_display_decimals"] = s.history_display_decimals;
  doc["warmup_visible_to_agents"] = s.warmup_visible_to_agents;
  if (config.synthetic) doc["synthetic"] = synthetic_to_json(*config.synthetic);
  if (config.llm) doc["llm"] = llm_to_json(*config.llm);
  return doc.dump(2) + "\n";
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return experiment_config_from_json(read_file(path));
}

namespace {

ordered_json event_to_json(const RatingEvent& e) {
  ordered_json doc;
  doc["movie_id"] = e.movie_id;
  doc["step_index"] = e.step_index;
  doc["agent_id"] = e.agent_id;
  doc["rating"] = e.rating;
  doc["raw_samples"] = e.raw_samples;
  if (e.observed_history_avg)
    doc["observed_history_avg"] = *e.observed_history_avg;
  doc["rng_seed"] = e.rng_seed;
  return doc;
}

RatingEvent event_from_json(const json& doc, const std::string& where) {
  static const std::set<std::string> kFields = {
      "movie_id",  "step_index",           "agent_id", "rating",
      "raw_samples", "observed_history_avg", "rng_seed"};
  reject_unknown(doc, kFields, where);
  RatingEvent e;
  try {
    e.movie_id = doc.at("movie_id").get<std::string>();
    e.step_index = doc.at("step_index").get<int>();
    e.agent_id = doc.at("agent_id").get<std::string>();
    e.rating = doc.at("rating").get<double>();
    e.raw_samples = doc.at("raw_samples").get<std::vector<int>>();
    if (doc.contains("observed_history_avg"))
      e.observed_history_avg = doc["observed_history_avg"].get<double>();
    e.rng_seed = doc.at("rng_seed").get<std::uint64_t>();
  } catch (const json::exception& err) {
    throw IoError(where + ": " + err.what());
  }
  return e;
}

}  // namespace

void save_run_record(const RunRecord& record, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());

  {
    std::ofstream out(dir + "/config.json", std::ios::binary);
    if (!out) throw IoError("cannot write " + dir + "/config.json");
    out << experiment_config_to_json(record.config);
  }

  ordered_json manifest;
  manifest["format_version"] = record.format_version;
  manifest["created_at"] = record.created_at;
  ordered_json movie_ids = ordered_json::array();
  for (const RatingSequence& seq : record.movie_sequences)
    movie_ids.push_back(seq.movie_id);
  manifest["movies"] = std::move(movie_ids);
  ordered_json failures = ordered_json::array();
  for (const MovieFailure& f : record.failures) {
    ordered_json fail;
    fail["movie_id"] = f.movie_id;
    fail["error"] = f.error;
    failures.push_back(std::move(fail));
  }
  manifest["failures"] = std::move(failures);
  manifest["agent_order_per_movie"] = record.agent_order_per_movie;
  manifest["persona_assignment"] = record.persona_assignment;
  {
    std::ofstream out(dir + "/manifest.json", std::ios::binary);
    if (!out) throw IoError("cannot write " + dir + "/manifest.json");
    out << manifest.dump(2) << '\n';
  }

  for (const RatingSequence& seq : record.movie_sequences) {
    const std::string path = dir + "/ratings_" + seq.movie_id + ".jsonl";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    for (const RatingEvent& e : seq.events) out << event_to_json(e).dump() << '\n';
  }
}

RunRecord load_run_record(const std::string& dir) {
  RunRecord record;
  record.config = load_experiment_config(dir + "/config.json");

  const json manifest = parse_strict(read_file(dir + "/manifest.json"),
                                     dir + "/manifest.json");
  static const std::set<std::string> kFields = {
      "format_version", "created_at",           "movies",
      "failures",       "agent_order_per_movie", "persona_assignment"};
  reject_unknown(manifest, kFields, dir + "/manifest.json");
  try {
    record.format_version = manifest.at("format_version").get<int>();
    record.created_at = manifest.value("created_at", "");
    for (const auto& f : manifest.value("failures", json::array()))
      record.failures.push_back(
          {f.at("movie_id").get<std::string>(), f.at("error").get<std::string>()});
    if (manifest.contains("agent_order_per_movie"))
      record.agent_order_per_movie =
          manifest["agent_order_per_movie"]
              .get<std::map<std::string, std::vector<std::string>>>();
    if (manifest.contains("persona_assignment"))
      record.persona_assignment =
          manifest["persona_assignment"].get<std::map<std::string, std::string>>();

    for (const auto& id_json : manifest.at("movies")) {
      const std::string movie_id = id_json.get<std::string>();
      if (!is_valid_identifier(movie_id))
        throw IoError(dir + "/manifest.json: bad movie id '" + movie_id + "'");
      const std::string path = dir + "/ratings_" + movie_id + ".jsonl";
      RatingSequence seq;
      seq.movie_id = movie_id;
      seq.warmup_len = record.config.scenario.warmup_m;
      for_each_jsonl_line(path, [&](const json& doc, int line_no) {
        seq.events.push_back(
            event_from_json(doc, path + ":" + std::to_string(line_no)));
      });
      try {
        validate_sequence(seq, record.config.scenario.scale);
      } catch (const IoError& err) {
        throw IoError(path + ": " + err.what());
      }
      record.movie_sequences.push_back(std::move(seq));
    }
  } catch (const json::exception& err) {
    throw IoError(dir + "/manifest.json: " + err.what());
  }
  return record;
}

std::vector<std::string> audit_run_record(const RunRecord& record) {
  const ScenarioConfig& cfg = record.config.scenario;
  std::vector<std::string> problems;

  for (const RatingSequence& seq : record.movie_sequences) {
    if (static_cast<int>(seq.events.size()) != cfg.warmup_m + cfg.population_n)
      problems.push_back(seq.movie_id + ": length " +
                         std::to_string(seq.events.size()) + " != m + N");
    try {
      validate_sequence(seq, cfg.scale);
    } catch (const IoError& err) {
      problems.push_back(err.what());
      continue;
    }

    // Recompute every displayed climate from scratch.
    std::vector<double> visible;
    for (const RatingEvent& e : seq.events) {
      if (e.is_warmup()) {
        if (cfg.warmup_visible_to_agents) visible.push_back(e.rating);
        continue;
      }
      const bool expect_avg = cfg.use_history && !visible.empty();
      if (expect_avg != e.observed_history_avg.has_value()) {
        problems.push_back(seq.movie_id + " step " +
                           std::to_string(e.step_index) +
                           ": history average presence mismatch");
      } else if (e.observed_history_avg) {
        const double expected = mean(std::span<const double>(visible));
        if (std::abs(expected - *e.observed_history_avg) > 1e-12)
          problems.push_back(seq.movie_id + " step " +
                             std::to_string(e.step_index) +
                             ": observed_history_avg drifted from recomputation");
      }
      visible.push_back(e.rating);
    }
  }
  return problems;
}

}  // namespace sosim
