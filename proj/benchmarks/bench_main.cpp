#include <benchmark/benchmark.h>

#include <vector>

#include "sosim/aggregation.hpp"
#include "sosim/analysis.hpp"
#include "sosim/metrics.hpp"
#include "sosim/rng.hpp"
#include "sosim/simulation.hpp"

using namespace sosim;

namespace {

std::vector<double> random_series(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    v.push_back(0.5 + static_cast<double>(rng.next_int(0, 40)) / 80.0);
  return v;
}

void BM_MannKendall(benchmark::State& state) {
  const auto v = random_series(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(mann_kendall_s(v).s);
}
BENCHMARK(BM_MannKendall)->Arg(101)->Arg(1000)->Arg(10000);

void BM_SpearmanRho(benchmark::State& state) {
  const auto v = random_series(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(spearman_rho(v));
}
BENCHMARK(BM_SpearmanRho)->Arg(101)->Arg(1000)->Arg(10000);

void BM_ExcessKurtosis(benchmark::State& state) {
  const auto v = random_series(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(excess_kurtosis(v));
}
BENCHMARK(BM_ExcessKurtosis)->Arg(30)->Arg(1000);

void BM_Iqr(benchmark::State& state) {
  const auto v = random_series(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(iqr(v));
}
BENCHMARK(BM_Iqr)->Arg(30)->Arg(1000);

void BM_UniformClimate(benchmark::State& state) {
  SplitMix64 rng(5);
  std::vector<double> h;
  for (int i = 0; i < static_cast<int>(state.range(0)); ++i)
    h.push_back(rng.next_int(1, 10));
  const RatingScale scale{10};
  for (auto _ : state)
    benchmark::DoNotOptimize(climate(h, scale, WeightRule::uniform()));
}
BENCHMARK(BM_UniformClimate)->Arg(110)->Arg(1000);

void BM_DeriveSeed(benchmark::State& state) {
  std::uint64_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(derive_seed(42, "rate:mov_000", i++));
}
BENCHMARK(BM_DeriveSeed);

void BM_RunMovieSynthetic(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.use_history = true;
  cfg.population_n = static_cast<int>(state.range(0));
  cfg.warmup_m = 10;
  cfg.late_window_l = 30;
  cfg.master_seed = 7;
  cfg.backend_id = "synthetic:conformist";

  SyntheticPolicy policy;
  policy.kind = SyntheticPolicy::Kind::kConformist;
  policy.conformity_weight = 0.8;
  policy.noise_sd = 0.5;
  policy.base_rating = 6.5;
  SyntheticAgent agent(policy);

  MovieItem movie;
  movie.movie_id = "bench";
  movie.title = "Bench";
  movie.genres = {"Drama"};
  movie.overview = "Benchmark fixture.";
  movie.release_date = "2025-01-01";

  std::vector<RosterEntry> roster;
  for (const std::string& id : make_agent_ids(cfg.population_n))
    roster.push_back({id, std::nullopt});

  for (auto _ : state)
    benchmark::DoNotOptimize(run_movie(cfg, movie, roster, agent));
}
BENCHMARK(BM_RunMovieSynthetic)->Arg(100);

void BM_SemanticMatch(benchmark::State& state) {
  std::vector<Persona> personas;
  for (int i = 0; i < 100; ++i)
    personas.push_back({"p" + std::to_string(i),
                        "profile " + std::to_string(i) +
                            " culture cinema criticism history art"});
  std::vector<MovieItem> movies;
  MovieItem m;
  m.movie_id = "m0";
  m.title = "M";
  m.overview = "cinema art with history and criticism of culture";
  m.release_date = "2025-01-01";
  movies.push_back(m);
  const IdfTable table = build_idf_table(personas, movies);
  for (auto _ : state)
    benchmark::DoNotOptimize(semantic_match(personas[13], movies[0], table));
}
BENCHMARK(BM_SemanticMatch);

}  // namespace

BENCHMARK_MAIN();
