#include "sosim/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <span>

#include "sosim/errors.hpp"
#include "sosim/numeric.hpp"

namespace sosim {

std::vector<MetricReport> analyze_run(const RunRecord& record) {
  const ScenarioConfig& cfg = record.config.scenario;
  std::vector<MetricReport> reports;
  reports.reserve(record.movie_sequences.size());

  for (const RatingSequence& seq : record.movie_sequences) {
    // n = T - m + 1 trend window: reported points start at round m
    const int start_round = std::max(seq.warmup_len, 1);
    const McoSeries mco =
        mco_series(seq, cfg.positive_threshold, start_round);

    MetricReport report;
    report.movie_id = seq.movie_id;
    report.n_trend = static_cast<int>(mco.steps.size());
    report.l_window = cfg.late_window_l;

    try {
      const MannKendallResult mk = mann_kendall_s(mco);
      report.mann_kendall_s = mk.s;
      report.mk_p_value = mk.p_value;
    } catch (const SeriesTooShort& err) {
      throw SeriesTooShort(seq.movie_id + ": " + err.what());
    }

    try {
      report.spearman = spearman_rho(mco);
    } catch (const ConstantSeries&) {
      // undefined trend strength; reported as NA
    }

    std::vector<double> window;
    try {
      window = late_window(seq, cfg.late_window_l);
    } catch (const SequenceTooShort& err) {
      throw SequenceTooShort(seq.movie_id + ": " + err.what());
    }
    try {
      report.kurtosis_late = excess_kurtosis(window);
    } catch (const ZeroVariance&) {
      // maximally concentrated window; kurtosis reported as NA
    }
    report.iqr_late = iqr(window);

    reports.push_back(std::move(report));
  }
  return reports;
}

std::vector<CaseStep> case_series(const RunRecord& record,
                                  const std::string& movie_id) {
  const RatingSequence* seq = record.find_sequence(movie_id);
  if (!seq) throw UnknownMovie("case_series: no sequence for " + movie_id);

  // The case view plots the opinions actually voiced: synthetic warm-ups
  // are stripped before the proportions are taken.
  RatingSequence rated;
  rated.movie_id = seq->movie_id;
  rated.warmup_len = 0;
  for (const RatingEvent& e : seq->events) {
    if (e.is_warmup()) continue;
    RatingEvent copy = e;
    copy.step_index = static_cast<int>(rated.events.size());
    rated.events.push_back(std::move(copy));
  }
  if (rated.events.empty())
    throw SequenceTooShort("case_series: " + movie_id + " has no rated events");

  const McoSeries mco =
      mco_series(rated, record.config.scenario.positive_threshold, 1);
  std::vector<CaseStep> out;
  out.reserve(mco.steps.size());
  for (const McoStep& s : mco.steps) out.push_back({s.round, s.pos, s.neg});
  return out;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!current.empty()) {
      if (current.size() >= 2) tokens.push_back(current);
      current.clear();
    }
  }
  if (current.size() >= 2) tokens.push_back(current);
  return tokens;
}

IdfTable build_idf_table(const std::vector<Persona>& personas,
                        const std::vector<MovieItem>& movies) {
  std::map<std::string, int> doc_freq;
  int docs = 0;
  auto add_doc = [&](const std::string& text) {
    ++docs;
    std::vector<std::string> toks = tokenize(text);
    std::sort(toks.begin(), toks.end());
    toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
    for (const std::string& t : toks) ++doc_freq[t];
  };
  for (const Persona& p : personas) add_doc(p.description);
  for (const MovieItem& m : movies) add_doc(m.overview);

  IdfTable table;
  table.corpus_size = docs;
  for (const auto& [token, df] : doc_freq)
    table.idf[token] =
        std::log((1.0 + docs) / (1.0 + df)) + 1.0;
  return table;
}

namespace {

std::map<std::string, double> tfidf_vector(const std::string& text,
                                           const IdfTable& table) {
  std::map<std::string, int> tf;
  for (const std::string& t : tokenize(text)) ++tf[t];
  std::map<std::string, double> vec;
  for (const auto& [token, count] : tf) {
    const auto it = table.idf.find(token);
    // tokens unseen at table-build time carry the max idf (df = 0)
    const double idf = it != table.idf.end()
                           ? it->second
                           : std::log(1.0 + table.corpus_size) + 1.0;
    vec[token] = count * idf;
  }
  return vec;
}

}  // namespace

double semantic_match(const Persona& persona, const MovieItem& movie,
                      const IdfTable& table) {
  const auto a = tfidf_vector(persona.description, table);
  const auto b = tfidf_vector(movie.overview, table);

  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [token, w] : a) {
    na += w * w;
    const auto it = b.find(token);
    if (it != b.end()) dot += w * it->second;
  }
  for (const auto& [token, w] : b) nb += w * w;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

MatchDistanceResult match_vs_distance(const RunRecord& record,
                                      const std::vector<MovieItem>& movies,
                                      const std::vector<Persona>& personas) {
  const ScenarioConfig& cfg = record.config.scenario;
  if (!cfg.use_persona || !cfg.use_history)
    throw ScenarioMismatch(
        "match_vs_distance: requires a History+Persona record");

  const IdfTable table = build_idf_table(personas, movies);
  std::map<std::string, const MovieItem*> movie_by_id;
  for (const MovieItem& m : movies) movie_by_id[m.movie_id] = &m;
  std::map<std::string, const Persona*> persona_by_id;
  for (const Persona& p : personas) persona_by_id[p.persona_id] = &p;

  MatchDistanceResult result;
  for (const RatingSequence& seq : record.movie_sequences) {
    const auto movie_it = movie_by_id.find(seq.movie_id);
    if (movie_it == movie_by_id.end())
      throw UnknownMovie("match_vs_distance: movie " + seq.movie_id +
                         " not in the provided list");

    // per (agent, movie): mean distance over that agent's events
    std::map<std::string, std::pair<double, int>> agent_dist;
    for (const RatingEvent& e : seq.events) {
      if (e.is_warmup() || !e.observed_history_avg) continue;
      auto& [sum, count] = agent_dist[e.agent_id];
      sum += rating_distance(e.rating, *e.observed_history_avg);
      ++count;
    }
    for (const auto& [agent_id, acc] : agent_dist) {
      const auto assign = record.persona_assignment.find(agent_id);
      if (assign == record.persona_assignment.end())
        throw ScenarioMismatch("match_vs_distance: no persona for " + agent_id);
      const auto persona_it = persona_by_id.find(assign->second);
      if (persona_it == persona_by_id.end())
        throw ScenarioMismatch("match_vs_distance: persona " + assign->second +
                               " not in the provided list");
      SemanticMatchRecord rec;
      rec.agent_id = agent_id;
      rec.persona_id = assign->second;
      rec.movie_id = seq.movie_id;
      rec.match_score =
          semantic_match(*persona_it->second, *movie_it->second, table);
      rec.mean_rating_distance = acc.first / acc.second;
      result.records.push_back(std::move(rec));
    }
  }

  if (result.records.size() >= 2) {
    std::vector<double> scores, distances;
    scores.reserve(result.records.size());
    distances.reserve(result.records.size());
    for (const SemanticMatchRecord& r : result.records) {
      scores.push_back(r.match_score);
      distances.push_back(r.mean_rating_distance);
    }
    const std::vector<double> sr = average_ranks(scores);
    const std::vector<double> dr = average_ranks(distances);
    const double mean_rank = (static_cast<double>(sr.size()) + 1.0) / 2.0;
    double num = 0.0, ds = 0.0, dd = 0.0;
    for (std::size_t i = 0; i < sr.size(); ++i) {
      const double a = sr[i] - mean_rank;
      const double b = dr[i] - mean_rank;
      num += a * b;
      ds += a * a;
      dd += b * b;
    }
    if (ds > 0.0 && dd > 0.0) result.correlation = num / std::sqrt(ds * dd);
  }
  return result;
}

std::vector<DistributionSummary> summarize_distributions(
    const std::vector<MetricReport>& reports, const RatingScale& scale) {
  int n_max = 2;
  for (const MetricReport& r : reports) n_max = std::max(n_max, r.n_trend);
  const double s_bound =
      static_cast<double>(n_max) * (static_cast<double>(n_max) - 1.0) / 2.0;

  auto build = [&](const std::string& name, double lo, double hi,
                   auto extract) {
    DistributionSummary summary;
    summary.metric_name = name;
    constexpr int kBins = 20;
    const double width = (hi - lo) / kBins;
    summary.bins.reserve(kBins);
    for (int b = 0; b < kBins; ++b)
      summary.bins.push_back({lo + b * width, lo + (b + 1) * width, 0});
    for (const MetricReport& r : reports) {
      const std::optional<double> v = extract(r);
      if (!v || !std::isfinite(*v)) continue;
      summary.values.push_back(*v);
      const double clipped = std::clamp(*v, lo, hi);
      int b = static_cast<int>((clipped - lo) / width);
      b = std::clamp(b, 0, kBins - 1);
      ++summary.bins[static_cast<std::size_t>(b)].count;
    }
    return summary;
  };

  std::vector<DistributionSummary> out;
  out.push_back(build("mann_kendall_s", -s_bound, s_bound,
                      [](const MetricReport& r) -> std::optional<double> {
                        return static_cast<double>(r.mann_kendall_s);
                      }));
  out.push_back(build("spearman_rho", -1.0, 1.0,
                      [](const MetricReport& r) { return r.spearman; }));
  out.push_back(build("kurtosis_late", -3.0, 15.0,
                      [](const MetricReport& r) { return r.kurtosis_late; }));
  out.push_back(build("iqr_late", 0.0,
                      static_cast<double>(scale.levels_max - 1),
                      [](const MetricReport& r) -> std::optional<double> {
                        return r.iqr_late;
                      }));
  return out;
}

}  // namespace sosim
