// sosim: seed-reproducible spiral-of-silence rating simulator and metrics.
//
// Subcommands: validate, run, analyze, report, replay-audit, stub-server.
// Exit codes: 0 success, 1 user/config error, 2 partial experiment failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sosim/analysis.hpp"
#include "sosim/errors.hpp"
#include "sosim/io.hpp"
#include "sosim/llm_client.hpp"
#include "sosim/report.hpp"
#include "sosim/simulation.hpp"
#include "sosim/stub_server.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string movies_path;
  std::string personas_path;
  std::string out_dir;
  std::string scenario;  // I..IV
  std::optional<std::uint64_t> seed;
  std::string backend;
  int jobs = 1;
  bool audit = false;
  std::vector<std::string> overrides;  // key=value, dotted keys for sections
};

json parse_override_value(const std::string& raw) {
  json v = json::parse(raw, nullptr, false);
  if (v.is_discarded()) return json(raw);  // bare string
  return v;
}

// Applies --scenario/--seed/--backend/--set on top of the config document;
// flags win over file contents.
std::string apply_overrides(const std::string& config_text,
                            const CommonArgs& args) {
  json doc = json::parse(config_text, nullptr, false);
  if (doc.is_discarded())
    throw sosim::ConfigError("config: invalid JSON in " + args.config_path);

  if (!args.scenario.empty()) {
    if (args.scenario == "I") {
      doc["use_history"] = true;
      doc["use_persona"] = true;
    } else if (args.scenario == "II") {
      doc["use_history"] = true;
      doc["use_persona"] = false;
    } else if (args.scenario == "III") {
      doc["use_history"] = false;
      doc["use_persona"] = true;
    } else if (args.scenario == "IV") {
      doc["use_history"] = false;
      doc["use_persona"] = false;
    } else {
      throw sosim::ConfigError("--scenario must be one of I, II, III, IV");
    }
  }
  if (args.seed) doc["master_seed"] = *args.seed;
  if (!args.backend.empty()) doc["backend_id"] = args.backend;

  for (const std::string& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw sosim::ConfigError("--set expects key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const json value = parse_override_value(kv.substr(eq + 1));
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
      doc[key] = value;
    } else {
      doc[key.substr(0, dot)][key.substr(dot + 1)] = value;
    }
  }
  return doc.dump();
}

sosim::ExperimentConfig load_config(const CommonArgs& args) {
  std::ifstream in(args.config_path, std::ios::binary);
  if (!in) throw sosim::IoError("cannot read " + args.config_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return sosim::experiment_config_from_json(apply_overrides(buf.str(), args));
}

int report_validation(const sosim::ValidationReport& report) {
  if (report.ok()) {
    std::cout << "config OK\n";
    return 0;
  }
  for (const sosim::ValidationIssue& issue : report.issues)
    std::cerr << "invalid config: " << issue.field << ": " << issue.message
              << "\n";
  return 1;
}

int cmd_validate(const CommonArgs& args) {
  const sosim::ExperimentConfig config = load_config(args);
  const int rc = report_validation(sosim::validate_config(config.scenario));
  if (rc != 0) return rc;
  if (!args.movies_path.empty()) {
    const auto movies = sosim::load_movies_jsonl(args.movies_path);
    std::cout << movies.size() << " movies OK\n";
  }
  if (!args.personas_path.empty()) {
    const auto personas = sosim::load_personas_jsonl(args.personas_path);
    std::cout << personas.size() << " personas OK\n";
  }
  return 0;
}

int cmd_run(const CommonArgs& args) {
  const sosim::ExperimentConfig config = load_config(args);
  {
    const auto report = sosim::validate_config(config.scenario);
    if (!report.ok()) return report_validation(report);
  }

  const auto movies = sosim::load_movies_jsonl(args.movies_path);
  if (movies.empty()) {
    std::cerr << "no movies in " << args.movies_path << "\n";
    return 1;
  }
  std::vector<sosim::Persona> personas;
  if (!args.personas_path.empty())
    personas = sosim::load_personas_jsonl(args.personas_path);
  if (config.scenario.use_persona &&
      static_cast<int>(personas.size()) < config.scenario.population_n) {
    std::cerr << "personas: need at least " << config.scenario.population_n
              << " for use_persona, have " << personas.size() << "\n";
    return 1;
  }

  std::error_code ec;
  fs::create_directories(args.out_dir, ec);

  std::unique_ptr<sosim::AuditLog> audit;
  if (args.audit)
    audit = std::make_unique<sosim::AuditLog>(args.out_dir + "/audit.jsonl");

  std::unique_ptr<sosim::RatingAgent> backend;
  const std::string& backend_id = config.scenario.backend_id;
  if (backend_id.rfind("synthetic:", 0) == 0) {
    backend = std::make_unique<sosim::SyntheticAgent>(*config.synthetic);
  } else {
    backend = std::make_unique<sosim::LlmAgent>(*config.llm, audit.get());
  }

  const sosim::RunRecord record =
      sosim::run_experiment(config, movies, personas, *backend, args.jobs);
  sosim::save_run_record(record, args.out_dir);

  std::cout << "wrote " << record.movie_sequences.size() << " sequences to "
            << args.out_dir << "\n";
  if (!record.failures.empty()) {
    for (const sosim::MovieFailure& f : record.failures)
      std::cerr << "failed movie " << f.movie_id << ": " << f.error << "\n";
    return 2;
  }
  return 0;
}

int cmd_analyze(const std::string& record_dir, const std::string& out_dir,
                const std::string& only_movie) {
  const sosim::RunRecord record = sosim::load_run_record(record_dir);
  const auto reports = sosim::analyze_run(record);

  std::error_code ec;
  fs::create_directories(out_dir, ec);

  sosim::export_reports_json_with_scale(reports,
                                        record.config.scenario.scale,
                                        out_dir + "/reports.json");
  sosim::export_metric_csvs(reports, out_dir);

  if (!only_movie.empty()) {
    sosim::export_case_csv(sosim::case_series(record, only_movie),
                           out_dir + "/case_" + only_movie + ".csv");
  } else {
    for (const sosim::RatingSequence& seq : record.movie_sequences)
      sosim::export_case_csv(sosim::case_series(record, seq.movie_id),
                             out_dir + "/case_" + seq.movie_id + ".csv");
  }
  std::cout << "analyzed " << reports.size() << " movies into " << out_dir
            << "\n";
  return 0;
}

int cmd_report(const std::string& analysis_dir, const std::string& out_dir) {
  sosim::RatingScale scale;
  const auto reports =
      sosim::import_reports_json(analysis_dir + "/reports.json", &scale);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const auto summaries = sosim::summarize_distributions(reports, scale);
  sosim::export_distributions(summaries, out_dir);
  std::cout << "wrote distribution summaries to " << out_dir << "\n";
  return 0;
}

int cmd_replay_audit(const std::string& record_dir) {
  const sosim::RunRecord record = sosim::load_run_record(record_dir);
  const auto problems = sosim::audit_run_record(record);
  if (problems.empty()) {
    std::cout << "record consistent: " << record.movie_sequences.size()
              << " sequences audited\n";
    return 0;
  }
  for (const std::string& p : problems) std::cerr << p << "\n";
  return 1;
}

int cmd_stub_server(int port, const std::string& script_path) {
  auto rules = sosim::load_stub_script(script_path);
  sosim::ScriptedChatServer server(std::move(rules));
  std::cout << "stub server listening on 127.0.0.1:" << port << "\n";
  server.run_blocking(port);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spiral-of-silence rating simulator"};
  app.require_subcommand(1);

  CommonArgs args;

  auto add_common = [&](CLI::App* cmd, bool with_data) {
    cmd->add_option("--config", args.config_path, "experiment config JSON")
        ->required();
    if (with_data) {
      cmd->add_option("--movies", args.movies_path, "movies JSONL");
      cmd->add_option("--personas", args.personas_path, "personas JSONL");
    }
    cmd->add_option("--scenario", args.scenario,
                    "preset I|II|III|IV for the history/persona flags");
    cmd->add_option("--seed", args.seed, "master seed override");
    cmd->add_option("--backend", args.backend,
                    "backend id override (synthetic:<kind>|llm)");
    cmd->add_option("--set", args.overrides,
                    "config override key=value (dotted keys reach sections)");
  };

  CLI::App* validate = app.add_subcommand("validate", "check config and data");
  add_common(validate, true);

  CLI::App* run = app.add_subcommand("run", "execute an experiment");
  add_common(run, true);
  run->add_option("--out", args.out_dir, "run record directory")->required();
  run->add_option("--jobs", args.jobs, "per-movie parallelism")
      ->check(CLI::PositiveNumber);
  run->add_flag("--audit", args.audit, "log raw LLM request/response pairs");

  std::string record_dir, analysis_dir, out_dir, only_movie;
  CLI::App* analyze = app.add_subcommand("analyze", "compute metric reports");
  analyze->add_option("--record", record_dir, "run record directory")
      ->required();
  analyze->add_option("--out", out_dir, "analysis output directory")
      ->required();
  analyze->add_option("--movie", only_movie, "emit only this case series");

  CLI::App* report = app.add_subcommand("report", "distribution summaries");
  report->add_option("--analysis", analysis_dir, "analysis output directory")
      ->required();
  report->add_option("--out", out_dir, "report output directory")->required();

  CLI::App* replay = app.add_subcommand("replay-audit",
                                        "verify a record's internal consistency");
  replay->add_option("--record", record_dir, "run record directory")->required();

  int port = 8080;
  std::string script_path;
  CLI::App* stub = app.add_subcommand("stub-server",
                                      "scripted chat-completion test double");
  stub->add_option("--port", port, "listen port");
  stub->add_option("--script", script_path, "stub script file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(validate)) return cmd_validate(args);
    if (app.got_subcommand(run)) return cmd_run(args);
    if (app.got_subcommand(analyze))
      return cmd_analyze(record_dir, out_dir, only_movie);
    if (app.got_subcommand(report)) return cmd_report(analysis_dir, out_dir);
    if (app.got_subcommand(replay)) return cmd_replay_audit(record_dir);
    if (app.got_subcommand(stub)) return cmd_stub_server(port, script_path);
  } catch (const sosim::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 1;
}
