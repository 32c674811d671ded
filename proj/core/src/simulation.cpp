#include "sosim/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <span>
#include <thread>

#include "sosim/aggregation.hpp"
#include "sosim/errors.hpp"
#include "sosim/numeric.hpp"
#include "sosim/rng.hpp"

namespace sosim {

const RatingSequence* RunRecord::find_sequence(const std::string& movie_id) const {
  for (const RatingSequence& seq : movie_sequences)
    if (seq.movie_id == movie_id) return &seq;
  return nullptr;
}

std::vector<RatingEvent> generate_warmups(const ScenarioConfig& cfg,
                                          const std::string& movie_id) {
  std::vector<RatingEvent> events;
  events.reserve(static_cast<std::size_t>(cfg.warmup_m));
  for (int i = 0; i < cfg.warmup_m; ++i) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, "warmup:" + movie_id,
                                           static_cast<std::uint64_t>(i));
    SplitMix64 rng(seed);
    const int value = rng.next_int(1, cfg.scale.levels_max);
    RatingEvent e;
    e.movie_id = movie_id;
    e.step_index = i;
    e.agent_id = kWarmupAgentId;
    e.rating = value;
    e.raw_samples = {value};
    e.rng_seed = seed;
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<std::string> make_agent_ids(int population_n) {
  int width = 3;
  for (int v = population_n - 1; v >= 1000; v /= 10) ++width;
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(population_n));
  char buf[32];
  for (int i = 0; i < population_n; ++i) {
    std::snprintf(buf, sizeof buf, "agent_%0*d", width > 24 ? 24 : width, i);
    ids.emplace_back(buf);
  }
  return ids;
}

namespace {

// Seeded Fisher-Yates over indices. Canonical order first, so the caller's
// container order cannot leak into the result.
template <typename T, typename KeyFn>
std::vector<T> seeded_shuffle(std::vector<T> items, KeyFn key,
                              std::uint64_t seed) {
  std::sort(items.begin(), items.end(),
            [&](const T& a, const T& b) { return key(a) < key(b); });
  SplitMix64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(
        rng.next_int(0, static_cast<int>(i) - 1));
    std::swap(items[i - 1], items[j]);
  }
  return items;
}

std::string now_iso8601_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RatingSequence run_movie(const ScenarioConfig& cfg, const MovieItem& movie,
                         const std::vector<RosterEntry>& roster,
                         RatingAgent& backend) {
  if (static_cast<int>(roster.size()) != cfg.population_n)
    throw ConfigError("run_movie: roster size " +
                      std::to_string(roster.size()) + " != population_n " +
                      std::to_string(cfg.population_n));

  RatingSequence seq;
  seq.movie_id = movie.movie_id;
  seq.warmup_len = cfg.warmup_m;
  seq.events = generate_warmups(cfg, movie.movie_id);

  const std::vector<RosterEntry> order = seeded_shuffle(
      roster, [](const RosterEntry& r) { return r.agent_id; },
      derive_seed(cfg.master_seed, "order:" + movie.movie_id, 0));

  // Raw rating values feeding the running mean shown to agents.
  std::vector<double> visible_history;
  if (cfg.warmup_visible_to_agents)
    for (const RatingEvent& e : seq.events) visible_history.push_back(e.rating);

  for (std::size_t p = 0; p < order.size(); ++p) {
    const RosterEntry& entry = order[p];
    const int step = cfg.warmup_m + static_cast<int>(p);

    std::optional<double> history_avg;
    if (cfg.use_history && !visible_history.empty())
      history_avg = mean(std::span<const double>(visible_history));

    AgentContext ctx;
    ctx.movie = movie;
    if (cfg.use_persona) ctx.persona = entry.persona;
    if (history_avg)
      ctx.history_avg_display =
          format_climate_for_prompt(*history_avg, cfg.history_display_decimals);
    ctx.scale = cfg.scale;
    ctx.rng_seed = derive_seed(cfg.master_seed, "rate:" + movie.movie_id,
                               static_cast<std::uint64_t>(step));

    std::vector<int> samples;
    try {
      samples = backend.rate(ctx, cfg, cfg.samples_per_agent);
    } catch (const Error& err) {
      throw Error("step " + std::to_string(step) + " (" + entry.agent_id +
                  "): " + err.what());
    }
    if (static_cast<int>(samples.size()) != cfg.samples_per_agent)
      throw Error("step " + std::to_string(step) +
                  ": backend returned wrong sample count");
    for (int s : samples)
      if (s < 1 || s > cfg.scale.levels_max)
        throw Error("step " + std::to_string(step) +
                    ": backend sample outside scale");

    RatingEvent e;
    e.movie_id = movie.movie_id;
    e.step_index = step;
    e.agent_id = entry.agent_id;
    e.raw_samples = samples;
    e.rating = mean(std::span<const int>(samples));
    e.observed_history_avg = history_avg;
    e.rng_seed = ctx.rng_seed;

    visible_history.push_back(e.rating);
    seq.events.push_back(std::move(e));
  }
  return seq;
}

RunRecord run_experiment(const ExperimentConfig& config,
                         const std::vector<MovieItem>& movies,
                         const std::vector<Persona>& personas,
                         RatingAgent& backend, int jobs) {
  const ScenarioConfig& cfg = config.scenario;
  if (jobs < 1) jobs = 1;

  RunRecord record;
  record.config = config;
  record.created_at = now_iso8601_utc();

  const std::vector<std::string> agent_ids = make_agent_ids(cfg.population_n);

  std::vector<RosterEntry> roster;
  roster.reserve(agent_ids.size());
  if (cfg.use_persona) {
    if (static_cast<int>(personas.size()) < cfg.population_n)
      throw InsufficientPersonas(
          "run_experiment: " + std::to_string(personas.size()) +
          " personas for population_n " + std::to_string(cfg.population_n));
    const std::vector<Persona> shuffled = seeded_shuffle(
        personas, [](const Persona& p) { return p.persona_id; },
        derive_seed(cfg.master_seed, "personas", 0));
    for (std::size_t i = 0; i < agent_ids.size(); ++i) {
      roster.push_back({agent_ids[i], shuffled[i]});
      record.persona_assignment[agent_ids[i]] = shuffled[i].persona_id;
    }
  } else {
    for (const std::string& id : agent_ids) roster.push_back({id, std::nullopt});
  }

  // Per-movie work is independent; results land in input order.
  std::vector<std::optional<RatingSequence>> results(movies.size());
  std::vector<std::optional<MovieFailure>> failures(movies.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= movies.size()) return;
      try {
        results[i] = run_movie(cfg, movies[i], roster, backend);
      } catch (const std::exception& err) {
        failures[i] = MovieFailure{movies[i].movie_id, err.what()};
      }
    }
  };

  const int n_threads = std::min<int>(jobs, static_cast<int>(movies.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  for (std::size_t i = 0; i < movies.size(); ++i) {
    if (results[i]) {
      record.agent_order_per_movie[movies[i].movie_id] = [&] {
        std::vector<std::string> order;
        for (const RatingEvent& e : results[i]->events)
          if (!e.is_warmup()) order.push_back(e.agent_id);
        return order;
      }();
      record.movie_sequences.push_back(std::move(*results[i]));
    } else if (failures[i]) {
      record.failures.push_back(std::move(*failures[i]));
    }
  }
  return record;
}

}  // namespace sosim
