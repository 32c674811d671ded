#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sosim/metrics.hpp"
#include "sosim/simulation.hpp"

namespace sosim {

// Per-movie metric reports for a complete record. Trend metrics run on the
// MCO series starting at the first post-warm-up round; concentration
// metrics use the last late_window_l ratings. Undefined values (constant
// MCO, zero-variance window) stay empty.
std::vector<MetricReport> analyze_run(const RunRecord& record);

struct CaseStep {
  int round = 0;  // 1-based index into the sequence
  double pos = 0.0;
  double neg = 0.0;
};

// Cumulative positive/negative proportions over the analysis window of one
// movie, ready for CSV export. Throws UnknownMovie.
std::vector<CaseStep> case_series(const RunRecord& record,
                                  const std::string& movie_id);

// Corpus-wide inverse document frequencies for the pinned TF-IDF scheme:
// lowercase, split on non-alphanumeric, drop tokens shorter than 2;
// tf = raw count; idf = ln((1+D)/(1+df)) + 1.
struct IdfTable {
  std::map<std::string, double> idf;
  int corpus_size = 0;
};

std::vector<std::string> tokenize(const std::string& text);

// Builds the table over all persona descriptions and movie overviews.
IdfTable build_idf_table(const std::vector<Persona>& personas,
                         const std::vector<MovieItem>& movies);

// Cosine similarity of the TF-IDF vectors of the persona description and
// the movie overview; 0 when either vector is empty.
double semantic_match(const Persona& persona, const MovieItem& movie,
                      const IdfTable& table);

struct SemanticMatchRecord {
  std::string agent_id;
  std::string persona_id;
  std::string movie_id;
  double match_score = 0.0;
  double mean_rating_distance = 0.0;
};

struct MatchDistanceResult {
  std::vector<SemanticMatchRecord> records;
  // Spearman correlation between match score and rating distance; empty
  // when undefined (fewer than 2 records, or all scores tied).
  std::optional<double> correlation;
};

// Persona-context consistency study over a History+Persona record.
// Throws ScenarioMismatch for any other scenario.
MatchDistanceResult match_vs_distance(const RunRecord& record,
                                      const std::vector<MovieItem>& movies,
                                      const std::vector<Persona>& personas);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};

struct DistributionSummary {
  std::string metric_name;
  std::vector<double> values;  // one per movie with a defined value
  std::vector<HistogramBin> bins;
};

// 20 equal-width bins over each metric's theoretical range (S: +-n(n-1)/2,
// rho: [-1,1], IQR: [0, M-1], kurtosis: display range [-3, 15], clipped).
std::vector<DistributionSummary> summarize_distributions(
    const std::vector<MetricReport>& reports, const RatingScale& scale);

}  // namespace sosim
