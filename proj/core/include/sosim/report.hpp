#pragma once

#include <string>
#include <vector>

#include "sosim/analysis.hpp"
#include "sosim/metrics.hpp"

namespace sosim {

// RFC-4180 field quoting; applied to every text cell.
std::string csv_escape(const std::string& field);

// All writers emit UTF-8 with LF line endings, a fixed column order and
// 6-significant-digit reals, so identical inputs give byte-identical files.
// Undefined values render as NA in CSV and null in JSON.

void export_reports_json(const std::vector<MetricReport>& reports,
                         const std::string& path);

// reports.json carries the rating scale so downstream summaries know the
// metric ranges without the original record.
void export_reports_json_with_scale(const std::vector<MetricReport>& reports,
                                    const RatingScale& scale,
                                    const std::string& path);

// Reads either shape back; fills *scale when the file carries one.
std::vector<MetricReport> import_reports_json(const std::string& path,
                                              RatingScale* scale = nullptr);

// One CSV per metric (movie_id,value): mann_kendall_s, spearman_rho,
// kurtosis_late, iqr_late. Returns the file paths written.
std::vector<std::string> export_metric_csvs(
    const std::vector<MetricReport>& reports, const std::string& out_dir);

void export_case_csv(const std::vector<CaseStep>& steps,
                     const std::string& path);

// distributions.json plus <metric>_hist.csv (lo,hi,count) per summary.
std::vector<std::string> export_distributions(
    const std::vector<DistributionSummary>& summaries,
    const std::string& out_dir);

}  // namespace sosim
