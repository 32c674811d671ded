#include <doctest.h>

#include <cmath>

#include "sosim/analysis.hpp"
#include "sosim/errors.hpp"
#include "sosim/rng.hpp"

using namespace sosim;

namespace {

MovieItem movie(const std::string& id, const std::string& overview) {
  MovieItem m;
  m.movie_id = id;
  m.title = "Movie " + id;
  m.genres = {"Drama"};
  m.overview = overview;
  m.release_date = "2025-04-01";
  return m;
}

RunRecord record_with_ratings(const std::vector<double>& ratings,
                              int warmup_len) {
  RunRecord record;
  record.config.scenario.use_history = true;
  record.config.scenario.population_n =
      static_cast<int>(ratings.size()) - warmup_len;
  record.config.scenario.warmup_m = warmup_len;
  record.config.scenario.late_window_l =
      std::min<int>(3, static_cast<int>(ratings.size()));
  record.config.scenario.backend_id = "synthetic:positivity_prior";

  RatingSequence seq;
  seq.movie_id = "m1";
  seq.warmup_len = warmup_len;
  for (std::size_t i = 0; i < ratings.size(); ++i) {
    RatingEvent e;
    e.movie_id = "m1";
    e.step_index = static_cast<int>(i);
    e.agent_id = static_cast<int>(i) < warmup_len ? kWarmupAgentId : "a";
    e.rating = ratings[i];
    e.raw_samples = {1};
    seq.events.push_back(std::move(e));
  }
  record.movie_sequences.push_back(std::move(seq));
  return record;
}

}  // namespace

TEST_CASE("analyze_run: empty record gives an empty report list") {
  RunRecord record;
  record.config.scenario.backend_id = "synthetic:positivity_prior";
  CHECK(analyze_run(record).empty());
}

TEST_CASE("analyze_run: trend window opens at round m with counts from 1") {
  // Mixed warm-ups followed by a unanimous positive stream: the majority
  // share climbs from the diluted 0.5 start, a strictly increasing MCO.
  const RunRecord record =
      record_with_ratings({2, 9, 2, 9, 8, 8, 8, 8, 8, 8}, 4);
  const auto reports = analyze_run(record);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].n_trend == 7);  // rounds 4..10
  CHECK(reports[0].mann_kendall_s == 21);  // all pairs rising
  REQUIRE(reports[0].spearman.has_value());
  CHECK(*reports[0].spearman == 1.0);
  CHECK(reports[0].iqr_late == 0.0);
  CHECK_FALSE(reports[0].kurtosis_late.has_value());  // zero variance
}

TEST_CASE("analyze_run: rising majority yields a positive trend") {
  std::vector<double> ratings;
  for (int i = 0; i < 6; ++i) ratings.push_back(i % 2 == 0 ? 3 : 9);
  for (int i = 0; i < 24; ++i) ratings.push_back(9);
  const RunRecord record = record_with_ratings(ratings, 0);
  const auto reports = analyze_run(record);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].mann_kendall_s > 0);
  REQUIRE(reports[0].spearman.has_value());
  CHECK(*reports[0].spearman > 0.7);
}

TEST_CASE("case_series: direct counts and unknown movies") {
  const RunRecord record = record_with_ratings({7, 3, 3}, 0);
  const auto steps = case_series(record, "m1");
  REQUIRE(steps.size() == 3);
  CHECK(steps[0].pos == 1.0);
  CHECK(steps[1].pos == 0.5);
  CHECK(steps[2].pos == doctest::Approx(1.0 / 3.0));
  for (const CaseStep& s : steps) CHECK(s.pos + s.neg == 1.0);

  CHECK_THROWS_AS(case_series(record, "nope"), UnknownMovie);
}

TEST_CASE("case_series plots the rated stream without the warm-up prefix") {
  SplitMix64 rng(7);
  std::vector<double> ratings;
  for (int i = 0; i < 30; ++i) ratings.push_back(rng.next_int(1, 10));
  const RunRecord record = record_with_ratings(ratings, 5);
  const auto steps = case_series(record, "m1");
  REQUIRE(steps.size() == 25);

  int positives = 0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (classify(ratings[5 + k], 6.0) == Opinion::kPositive) ++positives;
    CHECK(steps[k].round == static_cast<int>(k) + 1);
    CHECK(steps[k].pos ==
          static_cast<double>(positives) / static_cast<double>(k + 1));
    CHECK(steps[k].pos + steps[k].neg == 1.0);
  }
}

TEST_CASE("tokenize: lowercase, alnum runs, short tokens dropped") {
  const auto toks = tokenize("A sci-fi THRILLER, 90 minutes of... suspense!");
  const std::vector<std::string> expect{"sci",     "fi",      "thriller",
                                        "90",      "minutes", "of",
                                        "suspense"};
  CHECK(toks == expect);
}

TEST_CASE("semantic_match: identical, disjoint, and hand-computed texts") {
  const std::vector<Persona> ps{{"p1", "space opera fan"},
                                {"p2", "quiet gardening person"}};
  const std::vector<MovieItem> ms{movie("m1", "space opera fan"),
                                  movie("m2", "courtroom legal drama")};
  const IdfTable table = build_idf_table(ps, ms);

  CHECK(semantic_match(ps[0], ms[0], table) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(semantic_match(ps[1], ms[1], table) == 0.0);
}

TEST_CASE("semantic_match: two-document toy corpus, one shared token") {
  // personas: "alpha beta", movies: "alpha gamma";  D = 2.
  // idf(alpha) = ln(3/3)+1 = 1, idf(beta) = idf(gamma) = ln(3/2)+1.
  const std::vector<Persona> ps{{"p1", "alpha beta"}};
  const std::vector<MovieItem> ms{movie("m1", "alpha gamma")};
  const IdfTable table = build_idf_table(ps, ms);

  const double w_rare = std::log(3.0 / 2.0) + 1.0;
  const double expected = 1.0 / (std::sqrt(1.0 + w_rare * w_rare) *
                                 std::sqrt(1.0 + w_rare * w_rare));
  CHECK(semantic_match(ps[0], ms[0], table) ==
        doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("semantic_match is symmetric and order-insensitive") {
  const std::vector<Persona> ps{{"p1", "blue ocean waves crashing ashore"}};
  const std::vector<MovieItem> ms{movie("m1", "ashore crashing waves ocean blue")};
  const IdfTable table = build_idf_table(ps, ms);
  CHECK(semantic_match(ps[0], ms[0], table) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("match_vs_distance: scenario gate and degenerate cases") {
  RunRecord record = record_with_ratings({7, 7, 7}, 0);
  record.config.scenario.use_persona = false;
  CHECK_THROWS_AS(
      match_vs_distance(record, {}, {}), ScenarioMismatch);
}

TEST_CASE("match_vs_distance: single record has no correlation") {
  RunRecord record;
  record.config.scenario.use_history = true;
  record.config.scenario.use_persona = true;
  record.config.scenario.backend_id = "synthetic:conformist";
  record.persona_assignment["a0"] = "p1";

  RatingSequence seq;
  seq.movie_id = "m1";
  seq.warmup_len = 0;
  RatingEvent e;
  e.movie_id = "m1";
  e.step_index = 0;
  e.agent_id = "a0";
  e.rating = 7.0;
  e.raw_samples = {7};
  e.observed_history_avg = 6.0;
  seq.events.push_back(e);
  record.movie_sequences.push_back(seq);

  const std::vector<Persona> ps{{"p1", "alpha beta"}};
  const std::vector<MovieItem> ms{movie("m1", "alpha gamma")};
  const auto result = match_vs_distance(record, ms, ps);
  REQUIRE(result.records.size() == 1);
  CHECK(result.records[0].mean_rating_distance == 1.0);
  CHECK_FALSE(result.correlation.has_value());
}

TEST_CASE("summarize_distributions conserves counts and skips NA") {
  std::vector<MetricReport> reports;
  for (int i = 0; i < 10; ++i) {
    MetricReport r;
    r.movie_id = "m" + std::to_string(i);
    r.mann_kendall_s = i * 10 - 40;
    r.n_trend = 20;
    r.l_window = 5;
    r.iqr_late = 0.5 * i;
    if (i % 3 != 0) r.spearman = -1.0 + 0.2 * i;
    if (i % 4 != 0) r.kurtosis_late = -3.0 + 2.5 * i;  // beyond display range
    reports.push_back(std::move(r));
  }

  const auto summaries = summarize_distributions(reports, RatingScale{10});
  REQUIRE(summaries.size() == 4);
  for (const DistributionSummary& s : summaries) {
    CHECK(s.bins.size() == 20);
    int total = 0;
    for (const HistogramBin& b : s.bins) total += b.count;
    CHECK(total == static_cast<int>(s.values.size()));
  }
  CHECK(summaries[0].values.size() == 10);
  CHECK(summaries[1].values.size() == 6);   // spearman NA on 0,3,6,9
  CHECK(summaries[2].values.size() == 7);   // kurtosis NA on 0,4,8
  CHECK(summaries[3].values.size() == 10);
}
