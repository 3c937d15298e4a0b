#include "mmc/report.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "mmc/error.hpp"

namespace mmc {

namespace {

using Json = nlohmann::ordered_json;

template <typename T>
Json optional_json(const std::optional<T>& value) {
  return value ? Json(*value) : Json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<T>();
}

Json stats_json(const TrialStats& s) {
  Json j;
  j["r"] = s.r_used;
  j["r_over_R"] = s.r_over_R;
  j["median"] = s.median;
  j["count_below"] = {{"0.05", s.count_below[0]}, {"0.10", s.count_below[1]}, {"0.15", s.count_below[2]}};
  j["rates"] = s.rates;
  j["errors"] = s.errors;
  return j;
}

TrialStats stats_from(const Json& j) {
  TrialStats s;
  s.r_used = j.at("r").get<double>();
  s.r_over_R = j.at("r_over_R").get<double>();
  s.median = j.at("median").get<double>();
  const Json& c = j.at("count_below");
  s.count_below = {c.at("0.05").get<int>(), c.at("0.10").get<int>(), c.at("0.15").get<int>()};
  s.rates = j.at("rates").get<std::vector<double>>();
  s.errors = j.at("errors").get<std::vector<std::string>>();
  return s;
}

template <typename F>
auto parse_with(const std::string& text, F&& f) {
  try {
    return f(Json::parse(text));
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed report: ") + e.what());
  }
}

}  // namespace

std::string to_json_text(const ExperimentReport& report) {
  const ExperimentConfig& c = report.config;
  Json config;
  config["datasets"] = c.datasets;
  config["n_per_cluster"] = c.n_per_cluster;
  config["tau"] = c.tau;
  config["angles"] = c.angles;
  config["ambient_dim"] = c.ambient_dim;
  config["measure_proportional"] = c.measure_proportional;
  config["method"] = c.method;
  config["r"] = c.r;
  config["eps"] = optional_json(c.eps);
  config["eta"] = optional_json(c.eta);
  config["k"] = optional_json(c.k);
  config["d"] = optional_json(c.d);
  config["affinity"] = c.affinity;
  config["norm"] = c.norm;
  config["ell"] = c.ell;
  config["alpha"] = c.alpha;
  config["trials"] = c.trials;
  config["seed"] = c.seed;

  Json rows = Json::array();
  for (const ExperimentRow& row : report.rows) {
    Json j;
    j["dataset"] = row.dataset;
    j["angle"] = optional_json(row.angle);
    j["k"] = row.k;
    j["d"] = row.d;
    j["stats"] = stats_json(row.stats);
    rows.push_back(std::move(j));
  }
  Json doc;
  doc["config"] = std::move(config);
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

ExperimentReport parse_experiment_report(const std::string& text) {
  return parse_with(text, [](const Json& doc) {
    ExperimentReport report;
    const Json& j = doc.at("config");
    ExperimentConfig& c = report.config;
    c.datasets = j.at("datasets").get<std::vector<std::string>>();
    c.n_per_cluster = j.at("n_per_cluster").get<std::size_t>();
    c.tau = j.at("tau").get<double>();
    c.angles = j.at("angles").get<std::vector<double>>();
    c.ambient_dim = j.at("ambient_dim").get<std::int64_t>();
    c.measure_proportional = j.at("measure_proportional").get<bool>();
    c.method = j.at("method").get<std::string>();
    c.r = j.at("r").get<std::vector<double>>();
    c.eps = optional_from<double>(j, "eps");
    c.eta = optional_from<double>(j, "eta");
    c.k = optional_from<int>(j, "k");
    c.d = optional_from<int>(j, "d");
    c.affinity = j.at("affinity").get<std::string>();
    c.norm = j.at("norm").get<std::string>();
    c.ell = j.at("ell").get<std::size_t>();
    c.alpha = j.at("alpha").get<double>();
    c.trials = j.at("trials").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    for (const Json& r : doc.at("rows")) {
      ExperimentRow row;
      row.dataset = r.at("dataset").get<std::string>();
      row.angle = optional_from<double>(r, "angle");
      row.k = r.at("k").get<int>();
      row.d = r.at("d").get<int>();
      row.stats = stats_from(r.at("stats"));
      report.rows.push_back(std::move(row));
    }
    return report;
  });
}

std::string to_json_text(const ClusterReport& report) {
  Json j;
  j["input"] = report.input;
  j["n_points"] = report.n_points;
  j["method"] = report.method;
  j["params"] = {{"r", report.r},
                 {"eps", optional_json(report.eps)},
                 {"eta", optional_json(report.eta)},
                 {"k", report.k},
                 {"d", report.d},
                 {"affinity", report.affinity},
                 {"norm", report.norm},
                 {"seed", report.seed}};
  j["eps_used"] = optional_json(report.eps_used);
  j["eta_used"] = optional_json(report.eta_used);
  j["k_found"] = report.k_found;
  j["cluster_sizes"] = report.cluster_sizes;
  j["removed"] = report.removed;
  j["centers"] = report.centers;
  j["runtime_ms"] = report.runtime_ms;
  j["misclustering"] = optional_json(report.misclustering);
  return j.dump(2) + "\n";
}

ClusterReport parse_cluster_report(const std::string& text) {
  return parse_with(text, [](const Json& j) {
    ClusterReport report;
    report.input = j.at("input").get<std::string>();
    report.n_points = j.at("n_points").get<std::size_t>();
    report.method = j.at("method").get<std::string>();
    const Json& p = j.at("params");
    report.r = p.at("r").get<double>();
    report.eps = optional_from<double>(p, "eps");
    report.eta = optional_from<double>(p, "eta");
    report.k = p.at("k").get<int>();
    report.d = p.at("d").get<int>();
    report.affinity = p.at("affinity").get<std::string>();
    report.norm = p.at("norm").get<std::string>();
    report.seed = p.at("seed").get<std::uint64_t>();
    report.eps_used = optional_from<double>(j, "eps_used");
    report.eta_used = optional_from<double>(j, "eta_used");
    report.k_found = j.at("k_found").get<int>();
    report.cluster_sizes = j.at("cluster_sizes").get<std::vector<std::size_t>>();
    report.removed = j.at("removed").get<std::size_t>();
    report.centers = j.at("centers").get<std::size_t>();
    report.runtime_ms = j.at("runtime_ms").get<double>();
    report.misclustering = optional_from<double>(j, "misclustering");
    return report;
  });
}

std::string format_table(const ExperimentReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(26) << "dataset" << std::setw(10) << "angle" << std::setw(20) << "r (r/R)"
      << std::setw(10) << "median" << std::setw(7) << "<5%" << std::setw(7) << "<10%" << "<15%\n";
  char buf[64];
  for (const ExperimentRow& row : report.rows) {
    const TrialStats& s = row.stats;
    out << std::setw(26) << row.dataset;
    if (row.angle) {
      std::snprintf(buf, sizeof(buf), "%.4f", *row.angle);
      out << std::setw(10) << buf;
    } else {
      out << std::setw(10) << "-";
    }
    std::snprintf(buf, sizeof(buf), "%.3g (%.3fR)", s.r_used, s.r_over_R);
    out << std::setw(20) << buf;
    std::snprintf(buf, sizeof(buf), "%.2f%%", 100.0 * s.median);
    out << std::setw(10) << buf << std::setw(7) << s.count_below[0] << std::setw(7) << s.count_below[1]
        << s.count_below[2] << '\n';
  }
  return out.str();
}

}  // namespace mmc
