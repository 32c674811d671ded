#include <doctest.h>

#include "sosim/agents.hpp"
#include "sosim/errors.hpp"
#include "test_util.hpp"

using namespace sosim;

namespace {

MovieItem placeholder_movie() {
  MovieItem m;
  m.movie_id = "m1";
  m.title = "[Movie Title]";
  m.genres = {"[Genres]"};
  m.overview = "[Movie Overview]";
  m.release_date = "2025-02-01";
  return m;
}

ScenarioConfig scenario(bool history, bool persona) {
  ScenarioConfig cfg;
  cfg.use_history = history;
  cfg.use_persona = persona;
  cfg.backend_id = "synthetic:positivity_prior";
  cfg.master_seed = 1;
  return cfg;
}

AgentContext placeholder_ctx(bool history, bool persona) {
  AgentContext ctx;
  ctx.movie = placeholder_movie();
  if (persona) ctx.persona = Persona{"p1", "[persona]"};
  if (history) ctx.history_avg_display = "[Historical Average]";
  ctx.scale = RatingScale{10};
  return ctx;
}

std::string golden(const std::string& name) {
  return testutil::read_file(std::string(SOSIM_GOLDEN_DIR) + "/" + name);
}

}  // namespace

TEST_CASE("render_prompt reproduces the four template skeletons byte-exact") {
  CHECK(render_prompt(placeholder_ctx(true, true), scenario(true, true)) ==
        golden("prompt_history_persona.txt"));
  CHECK(render_prompt(placeholder_ctx(true, false), scenario(true, false)) ==
        golden("prompt_history_only.txt"));
  CHECK(render_prompt(placeholder_ctx(false, true), scenario(false, true)) ==
        golden("prompt_persona_only.txt"));
  CHECK(render_prompt(placeholder_ctx(false, false), scenario(false, false)) ==
        golden("prompt_bare.txt"));
}

TEST_CASE("render_prompt joins genres with comma-space") {
  AgentContext ctx = placeholder_ctx(false, false);
  ctx.movie.genres = {"Drama", "Thriller"};
  const std::string prompt = render_prompt(ctx, scenario(false, false));
  CHECK(prompt.find("Genres: Drama, Thriller\n") != std::string::npos);
}

TEST_CASE("render_prompt substitutes the history display verbatim") {
  AgentContext ctx = placeholder_ctx(true, true);
  ctx.history_avg_display = "7.3";
  const std::string prompt = render_prompt(ctx, scenario(true, true));
  CHECK(prompt.find("Movie average rating: 7.3 (1-10)\n") != std::string::npos);
  CHECK(prompt.find("# Your Character Profile\n") != std::string::npos);
}

TEST_CASE("render_prompt omits the average line while history is empty") {
  // First agent of a history scenario with invisible warm-ups sees no line.
  AgentContext ctx = placeholder_ctx(false, true);
  const std::string prompt = render_prompt(ctx, scenario(true, true));
  CHECK(prompt.find("Movie average rating") == std::string::npos);
}

TEST_CASE("render_prompt context/scenario mismatches") {
  CHECK_THROWS_AS(
      render_prompt(placeholder_ctx(true, false), scenario(true, true)),
      MissingPersona);
  CHECK_THROWS_AS(
      render_prompt(placeholder_ctx(true, true), scenario(true, false)),
      MissingPersona);
  CHECK_THROWS_AS(
      render_prompt(placeholder_ctx(true, true), scenario(false, true)),
      MissingHistory);
}

TEST_CASE("synthetic_rate: positivity prior is constant") {
  SyntheticPolicy policy;
  policy.kind = SyntheticPolicy::Kind::kPositivityPrior;
  policy.base_rating = 8.0;
  for (std::uint64_t seed : {1ULL, 99ULL, 12345ULL}) {
    AgentContext ctx = placeholder_ctx(false, false);
    ctx.rng_seed = seed;
    CHECK(synthetic_rate(policy, ctx) == 8);
  }
}

TEST_CASE("synthetic_rate: pure anchoring rounds the displayed average") {
  SyntheticPolicy policy;
  policy.kind = SyntheticPolicy::Kind::kConformist;
  policy.conformity_weight = 1.0;

  AgentContext ctx = placeholder_ctx(true, false);
  ctx.history_avg_display = "3.4";
  CHECK(synthetic_rate(policy, ctx) == 3);
  ctx.history_avg_display = "3.5";
  CHECK(synthetic_rate(policy, ctx) == 4);
  ctx.history_avg_display = "9.6";
  CHECK(synthetic_rate(policy, ctx) == 10);
}

TEST_CASE("synthetic_rate: conformist mixing rule") {
  SyntheticPolicy policy;
  policy.kind = SyntheticPolicy::Kind::kConformist;
  policy.conformity_weight = 0.5;
  policy.base_rating = 9.0;  // no spread, no persona: base stays 9

  AgentContext ctx = placeholder_ctx(true, false);
  ctx.history_avg_display = "3.0";
  CHECK(synthetic_rate(policy, ctx) == 6);  // round(0.5*9 + 0.5*3)
}

TEST_CASE("synthetic_rate: conformist without history fails") {
  SyntheticPolicy policy;
  policy.kind = SyntheticPolicy::Kind::kConformist;
  policy.conformity_weight = 0.7;
  AgentContext ctx = placeholder_ctx(false, false);
  CHECK_THROWS_AS(synthetic_rate(policy, ctx), MissingHistory);
}

TEST_CASE("synthetic_rate is a pure function of (policy, ctx)") {
  SyntheticPolicy policy;
  policy.kind = SyntheticPolicy::Kind::kPersonaPrior;
  policy.base_rating = 5.5;
  policy.persona_hash_spread = 4.0;
  policy.noise_sd = 1.0;

  AgentContext ctx = placeholder_ctx(false, true);
  ctx.rng_seed = 777;
  const int first = synthetic_rate(policy, ctx);
  for (int i = 0; i < 5; ++i) CHECK(synthetic_rate(policy, ctx) == first);

  ctx.rng_seed = 778;  // a different seed may move the noisy output
  CHECK(synthetic_rate(policy, ctx) >= 1);
}

TEST_CASE("synthetic_rate clamps to the scale") {
  SyntheticPolicy policy;
  policy.kind = SyntheticPolicy::Kind::kPersonaPrior;
  policy.base_rating = 5.5;
  policy.persona_hash_spread = 9.0;
  policy.noise_sd = 3.0;
  for (int i = 0; i < 200; ++i) {
    AgentContext ctx = placeholder_ctx(false, true);
    ctx.persona->persona_id = "p" + std::to_string(i);
    ctx.rng_seed = static_cast<std::uint64_t>(i);
    const int r = synthetic_rate(policy, ctx);
    CHECK(r >= 1);
    CHECK(r <= 10);
  }
}

TEST_CASE("SyntheticAgent draws independent samples per step") {
  SyntheticPolicy policy;
  policy.kind = SyntheticPolicy::Kind::kPersonaPrior;
  policy.base_rating = 5.5;
  policy.persona_hash_spread = 2.0;
  policy.noise_sd = 1.5;
  SyntheticAgent agent(policy);

  AgentContext ctx = placeholder_ctx(false, true);
  ctx.rng_seed = 4242;
  const auto samples = agent.rate(ctx, scenario(false, true), 3);
  REQUIRE(samples.size() == 3);
  const auto again = agent.rate(ctx, scenario(false, true), 3);
  CHECK(samples == again);  // deterministic
}

TEST_CASE("parse_rating examples") {
  const RatingScale scale{10};
  CHECK(parse_rating("7", scale) == 7);
  CHECK(parse_rating("10", scale) == 10);  // longest match, not '1'
  CHECK(parse_rating("Rating: 9. A masterpiece.", scale) == 9);
  CHECK(parse_rating("I'd say 7/10", scale) == 7);
  CHECK_THROWS_AS(parse_rating("eleven", scale), NoRatingFound);
  CHECK_THROWS_AS(parse_rating("", scale), NoRatingFound);
}

TEST_CASE("parse_rating fixture corpus of decorated replies") {
  const RatingScale scale{10};
  const std::vector<std::pair<std::string, int>> corpus{
      {"8\n", 8},
      {"  9 ", 9},
      {"Sure! I would rate this movie a 6 out of 10.", 6},
      {"**7** - worth a watch", 7},
      {"Score: 10/10", 10},
      {"Released in 2025, this one is a 4 for me.", 4},  // 2025 out of range
      {"0 stars... fine, call it 2.", 2},                // 0 out of range
      {"007 has charm, 7 it is.", 7},
      {"my rating:3", 3},
  };
  for (const auto& [text, expect] : corpus) {
    const int got = parse_rating(text, scale);
    CHECK_MESSAGE(got == expect, "input: ", text);
    CHECK(got >= 1);
    CHECK(got <= 10);
  }
}

TEST_CASE("parse_rating never exceeds a smaller scale") {
  const RatingScale scale{5};
  CHECK(parse_rating("10 or maybe 3", scale) == 3);
  CHECK_THROWS_AS(parse_rating("10", scale), NoRatingFound);
}

TEST_CASE("synthetic kind ids") {
  CHECK(synthetic_kind_from_id("synthetic:positivity_prior") ==
        SyntheticPolicy::Kind::kPositivityPrior);
  CHECK(synthetic_kind_from_id("synthetic:persona_prior") ==
        SyntheticPolicy::Kind::kPersonaPrior);
  CHECK(synthetic_kind_from_id("synthetic:conformist") ==
        SyntheticPolicy::Kind::kConformist);
  CHECK_THROWS_AS(synthetic_kind_from_id("synthetic:parrot"), ConfigError);
}
