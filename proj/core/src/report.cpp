#include "sosim/report.hpp"

#include <fstream>

#include <json.hpp>

#include "sosim/errors.hpp"
#include "sosim/numeric.hpp"

namespace sosim {

using ordered_json = nlohmann::ordered_json;

std::string csv_escape(const std::string& field) {
  const bool needs_quotes =
      field.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF on all hosts
  if (!out) throw IoError("cannot write " + path);
  return out;
}

std::string cell(const std::optional<double>& v) {
  return v ? format_sig6(*v) : "NA";
}

}  // namespace

namespace {

ordered_json reports_to_json(const std::vector<MetricReport>& reports) {
  ordered_json arr = ordered_json::array();
  for (const MetricReport& r : reports) {
    ordered_json item;
    item["movie_id"] = r.movie_id;
    item["mann_kendall_s"] = r.mann_kendall_s;
    if (r.mk_p_value)
      item["mk_p_value"] = *r.mk_p_value;
    else
      item["mk_p_value"] = nullptr;
    if (r.spearman)
      item["spearman_rho"] = *r.spearman;
    else
      item["spearman_rho"] = nullptr;
    if (r.kurtosis_late)
      item["kurtosis_late"] = *r.kurtosis_late;
    else
      item["kurtosis_late"] = nullptr;
    item["iqr_late"] = r.iqr_late;
    item["n_trend"] = r.n_trend;
    item["l_window"] = r.l_window;
    arr.push_back(std::move(item));
  }
  return arr;
}

}  // namespace

void export_reports_json(const std::vector<MetricReport>& reports,
                         const std::string& path) {
  auto out = open_out(path);
  out << reports_to_json(reports).dump(2) << '\n';
}

void export_reports_json_with_scale(const std::vector<MetricReport>& reports,
                                    const RatingScale& scale,
                                    const std::string& path) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["levels_max"] = scale.levels_max;
  doc["reports"] = reports_to_json(reports);
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

std::vector<MetricReport> import_reports_json(const std::string& path,
                                              RatingScale* scale) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw IoError(path + ": invalid JSON");

  const nlohmann::json* arr = &doc;
  if (doc.is_object()) {
    if (scale && doc.contains("levels_max"))
      scale->levels_max = doc["levels_max"].get<int>();
    if (!doc.contains("reports")) throw IoError(path + ": missing 'reports'");
    arr = &doc["reports"];
  }
  if (!arr->is_array()) throw IoError(path + ": reports must be an array");

  std::vector<MetricReport> reports;
  reports.reserve(arr->size());
  for (const auto& item : *arr) {
    MetricReport r;
    try {
      r.movie_id = item.at("movie_id").get<std::string>();
      r.mann_kendall_s = item.at("mann_kendall_s").get<long long>();
      if (!item.at("mk_p_value").is_null())
        r.mk_p_value = item["mk_p_value"].get<double>();
      if (!item.at("spearman_rho").is_null())
        r.spearman = item["spearman_rho"].get<double>();
      if (!item.at("kurtosis_late").is_null())
        r.kurtosis_late = item["kurtosis_late"].get<double>();
      r.iqr_late = item.at("iqr_late").get<double>();
      r.n_trend = item.at("n_trend").get<int>();
      r.l_window = item.at("l_window").get<int>();
    } catch (const nlohmann::json::exception& e) {
      throw IoError(path + ": " + e.what());
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

std::vector<std::string> export_metric_csvs(
    const std::vector<MetricReport>& reports, const std::string& out_dir) {
  std::vector<std::string> written;

  auto write_metric = [&](const std::string& name, auto extract) {
    const std::string path = out_dir + "/" + name + ".csv";
    auto out = open_out(path);
    out << "movie_id,value\n";
    for (const MetricReport& r : reports)
      out << csv_escape(r.movie_id) << ',' << extract(r) << '\n';
    written.push_back(path);
  };

  write_metric("mann_kendall_s", [](const MetricReport& r) {
    return std::to_string(r.mann_kendall_s);
  });
  write_metric("spearman_rho",
               [](const MetricReport& r) { return cell(r.spearman); });
  write_metric("kurtosis_late",
               [](const MetricReport& r) { return cell(r.kurtosis_late); });
  write_metric("iqr_late",
               [](const MetricReport& r) { return format_sig6(r.iqr_late); });
  return written;
}

void export_case_csv(const std::vector<CaseStep>& steps,
                     const std::string& path) {
  auto out = open_out(path);
  out << "step,pos,neg\n";
  for (const CaseStep& s : steps)
    out << s.round << ',' << format_sig6(s.pos) << ',' << format_sig6(s.neg)
        << '\n';
}

std::vector<std::string> export_distributions(
    const std::vector<DistributionSummary>& summaries,
    const std::string& out_dir) {
  std::vector<std::string> written;

  ordered_json doc = ordered_json::array();
  for (const DistributionSummary& s : summaries) {
    ordered_json item;
    item["metric_name"] = s.metric_name;
    item["values"] = s.values;
    ordered_json bins = ordered_json::array();
    for (const HistogramBin& b : s.bins) {
      ordered_json bin;
      bin["lo"] = b.lo;
      bin["hi"] = b.hi;
      bin["count"] = b.count;
      bins.push_back(std::move(bin));
    }
    item["histogram_bins"] = std::move(bins);
    doc.push_back(std::move(item));

    const std::string csv_path = out_dir + "/" + s.metric_name + "_hist.csv";
    auto csv = open_out(csv_path);
    csv << "lo,hi,count\n";
    for (const HistogramBin& b : s.bins)
      csv << format_sig6(b.lo) << ',' << format_sig6(b.hi) << ',' << b.count
          << '\n';
    written.push_back(csv_path);
  }

  const std::string json_path = out_dir + "/distributions.json";
  auto out = open_out(json_path);
  out << doc.dump(2) << '\n';
  written.push_back(json_path);
  return written;
}

}  // namespace sosim
