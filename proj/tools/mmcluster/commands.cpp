#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "mmc/error.hpp"
#include "mmc/eval.hpp"
#include "mmc/io.hpp"
#include "mmc/report.hpp"

namespace mmcli {

namespace {

int exit_code_for(const mmc::Error& e) {
  switch (e.kind()) {
    case mmc::ErrorKind::InvalidInput:
    case mmc::ErrorKind::UnknownDataset:
    case mmc::ErrorKind::Io:
      return kUsageError;
    default:
      return kAlgorithmFailure;
  }
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const mmc::Error& e) {
    err << "mmcluster: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "mmcluster: " << e.what() << '\n';
    return kAlgorithmFailure;
  }
}

mmc::DatasetSpec dataset_spec(const RunConfig& config, mmc::DatasetName name, std::optional<double> angle,
                              std::uint64_t seed) {
  mmc::DatasetSpec spec;
  spec.name = name;
  spec.n_per_cluster = config.n_per_cluster;
  spec.tau = config.tau;
  spec.angle = angle;
  spec.seed = seed;
  spec.ambient_dim = static_cast<Eigen::Index>(config.ambient_dim);
  spec.measure_proportional = config.measure_proportional;
  spec.validate();
  return spec;
}

bool takes_angle(mmc::DatasetName name) {
  return name == mmc::DatasetName::TwoSegments || name == mmc::DatasetName::TwoCurvesAngle;
}

std::optional<int> metadata_int(const mmc::Metadata& metadata, const std::string& key) {
  for (const auto& [k, v] : metadata) {
    if (k == key) {
      try {
        return std::stoi(v);
      } catch (const std::exception&) {
        return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

double parse_angle(const std::string& text) {
  const auto pos = text.find("pi");
  if (pos == std::string::npos) return mmc::parse_double(text);
  double numerator = 1.0;
  if (pos > 0) numerator = mmc::parse_double(text.substr(0, pos));
  double denominator = 1.0;
  const std::string rest = text.substr(pos + 2);
  if (!rest.empty()) {
    if (rest[0] != '/') throw mmc::Error(mmc::ErrorKind::InvalidInput, "cannot parse angle '" + text + "'");
    denominator = mmc::parse_double(rest.substr(1));
  }
  if (denominator == 0.0) throw mmc::Error(mmc::ErrorKind::InvalidInput, "angle '" + text + "' divides by zero");
  return numerator * std::numbers::pi / denominator;
}

std::string resolve_method_name(const RunConfig& config) {
  std::string implied;
  if (config.affinity == "cov") implied = "alg2";
  if (config.affinity == "proj") implied = "alg3";
  if (config.method.empty()) return implied.empty() ? "alg4" : implied;
  if (!implied.empty() && implied != config.method) {
    throw mmc::Error(mmc::ErrorKind::InvalidInput,
                     "affinity '" + config.affinity + "' only applies to method " + implied);
  }
  if (implied.empty() && (config.method == "alg2" || config.method == "alg3") && config.affinity != "gauss") {
    throw mmc::Error(mmc::ErrorKind::InvalidInput,
                     "method " + config.method + " uses an indicator affinity, not '" + config.affinity + "'");
  }
  return config.method;
}

mmc::MethodConfig make_method_config(const RunConfig& config, double r, std::optional<int> default_k,
                                     std::optional<int> default_d) {
  mmc::MethodConfig m;
  m.method = mmc::parse_method(resolve_method_name(config));
  m.params.r = r;
  m.params.tau = config.tau;
  if (config.eps) {
    m.params.eps = *config.eps;
    m.eps_set = true;
  }
  if (config.eta) {
    m.params.eta = *config.eta;
    m.eta_set = true;
  }
  const bool spectral = m.method == mmc::Method::Alg4 || m.method == mmc::Method::NjwBaseline;
  const std::optional<int> k = config.k ? config.k : default_k;
  const std::optional<int> d = config.d ? config.d : default_d;
  if (spectral && (!k || !d)) {
    throw mmc::Error(mmc::ErrorKind::InvalidInput, "method " + mmc::to_string(m.method) + " needs --k and --d");
  }
  m.k = k.value_or(1);
  m.d = d.value_or(1);
  if (spectral && config.affinity != "cov" && config.affinity != "proj") {
    m.affinity = mmc::parse_affinity(config.affinity);
  }
  m.norm = mmc::parse_norm(config.norm);
  m.ell = config.ell;
  m.alpha = config.alpha;
  m.validate();
  return m;
}

int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (config.datasets.size() != 1) {
      throw mmc::Error(mmc::ErrorKind::InvalidInput, "generate takes exactly one --dataset");
    }
    if (config.angles.size() > 1) throw mmc::Error(mmc::ErrorKind::InvalidInput, "generate takes at most one --angle");
    const mmc::DatasetName name = mmc::parse_dataset(config.datasets.front());
    std::optional<double> angle;
    if (!config.angles.empty()) angle = config.angles.front();
    const mmc::DatasetSpec spec = dataset_spec(config, name, angle, config.seed);
    const mmc::GeneratedData data = mmc::generate(spec);

    mmc::Metadata metadata = {
        {"dataset", mmc::to_string(name)},
        {"n_per_cluster", std::to_string(spec.n_per_cluster)},
        {"tau", mmc::format_double(spec.tau)},
        {"D", std::to_string(spec.dim())},
        {"clusters", std::to_string(data.clusters)},
        {"intrinsic_dim", std::to_string(data.intrinsic_dim)},
        {"seed", std::to_string(spec.seed)},
    };
    if (takes_angle(name)) metadata.insert(metadata.begin() + 3, {"angle", mmc::format_double(spec.angle_or_default())});
    if (spec.measure_proportional) metadata.emplace_back("measure_proportional", "1");

    if (config.out.empty() || config.out == "-") {
      mmc::write_point_cloud(out, data.cloud, metadata);
    } else {
      mmc::save_point_cloud(config.out, data.cloud, metadata);
      out << "wrote " << data.cloud.size() << " points to " << config.out << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int cmd_cluster(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (config.input.empty()) throw mmc::Error(mmc::ErrorKind::InvalidInput, "cluster needs an input file");
    if (config.r.size() != 1) throw mmc::Error(mmc::ErrorKind::InvalidInput, "cluster takes exactly one --r");
    mmc::Metadata metadata;
    const mmc::PointCloud cloud = mmc::load_point_cloud(config.input, &metadata);

    std::optional<int> default_k = metadata_int(metadata, "clusters");
    if (!default_k && cloud.labels) {
      int k = 0;
      for (int l : *cloud.labels) k = std::max(k, l);
      default_k = k;
    }
    const mmc::MethodConfig method =
        make_method_config(config, config.r.front(), default_k, metadata_int(metadata, "intrinsic_dim"));

    const auto start = std::chrono::steady_clock::now();
    const mmc::RunResult result = mmc::run_method(cloud, method, config.seed, config.threads);
    const auto stop = std::chrono::steady_clock::now();

    mmc::ClusterReport report;
    report.input = config.input;
    report.n_points = cloud.size();
    report.method = mmc::to_string(method.method);
    report.r = method.params.r;
    report.eps = config.eps;
    report.eta = config.eta;
    report.k = method.k;
    report.d = static_cast<int>(method.d);
    report.affinity = method.method == mmc::Method::Alg2   ? "cov"
                      : method.method == mmc::Method::Alg3 ? "proj"
                      : method.method == mmc::Method::NjwBaseline
                          ? "distance"
                          : mmc::to_string(method.affinity);
    report.norm = mmc::to_string(method.norm);
    report.seed = config.seed;
    report.eps_used = result.eps_used;
    report.eta_used = result.eta_used;
    report.k_found = result.labeling.k_found;
    report.cluster_sizes = result.labeling.cluster_sizes();
    report.removed = result.labeling.removed.size();
    report.centers = result.center_count;
    report.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    if (cloud.labels) {
      int k_truth = 0;
      for (int l : *cloud.labels) k_truth = std::max(k_truth, l);
      report.misclustering = mmc::misclustering_rate(result.labeling, *cloud.labels, k_truth);
    }

    if (config.out.empty() || config.out == "-") {
      mmc::write_labels(out, result.labeling.assignments);
    } else {
      mmc::save_labels(config.out, result.labeling.assignments);
    }
    std::string report_path = config.report;
    if (report_path.empty() && !config.out.empty() && config.out != "-") report_path = config.out + ".report.json";
    if (!report_path.empty()) mmc::save_text(report_path, mmc::to_json_text(report));

    std::ostream& summary = (config.out.empty() || config.out == "-") ? err : out;
    summary << report.method << ": k_found=" << report.k_found;
    if (report.eps_used) summary << " eps=" << mmc::format_double(*report.eps_used);
    if (report.eta_used) summary << " eta=" << mmc::format_double(*report.eta_used);
    if (report.misclustering) summary << " misclustering=" << *report.misclustering;
    summary << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_experiment(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (config.datasets.empty()) throw mmc::Error(mmc::ErrorKind::InvalidInput, "experiment needs --dataset");
    if (config.r.size() != 1 && config.r.size() != config.datasets.size()) {
      throw mmc::Error(mmc::ErrorKind::InvalidInput, "give one --r or one per dataset");
    }
    if (config.trials < 1) throw mmc::Error(mmc::ErrorKind::InvalidInput, "--trials must be at least 1");

    mmc::ExperimentReport report;
    mmc::ExperimentConfig& echo = report.config;
    echo.datasets = config.datasets;
    echo.n_per_cluster = config.n_per_cluster;
    echo.tau = config.tau;
    echo.angles = config.angles;
    echo.ambient_dim = config.ambient_dim;
    echo.measure_proportional = config.measure_proportional;
    echo.method = resolve_method_name(config);
    echo.r = config.r;
    echo.eps = config.eps;
    echo.eta = config.eta;
    echo.k = config.k;
    echo.d = config.d;
    echo.affinity = config.affinity;
    echo.norm = config.norm;
    echo.ell = config.ell;
    echo.alpha = config.alpha;
    echo.trials = config.trials;
    echo.seed = config.seed;

    for (std::size_t i = 0; i < config.datasets.size(); ++i) {
      const mmc::DatasetName name = mmc::parse_dataset(config.datasets[i]);
      const mmc::DatasetInfo info = mmc::dataset_info(name);
      const double r = config.r.size() == 1 ? config.r.front() : config.r[i];
      const mmc::MethodConfig method = make_method_config(config, r, info.clusters, info.intrinsic_dim);
      std::vector<std::optional<double>> angles;
      if (takes_angle(name) && !config.angles.empty()) {
        angles.assign(config.angles.begin(), config.angles.end());
      } else {
        angles.push_back(std::nullopt);
      }
      for (const auto& angle : angles) {
        const mmc::DatasetSpec spec = dataset_spec(config, name, angle, config.seed);
        mmc::ExperimentRow row;
        row.dataset = mmc::to_string(name);
        if (takes_angle(name)) row.angle = spec.angle_or_default();
        row.k = method.k;
        row.d = static_cast<int>(method.d);
        row.stats = mmc::run_trials(spec, method, config.trials, config.seed, config.threads);
        report.rows.push_back(std::move(row));
      }
    }

    if (!config.out.empty()) mmc::save_text(config.out, mmc::to_json_text(report));
    out << mmc::format_table(report);
    return static_cast<int>(kOk);
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-manifold clustering with local PCA", "mmcluster"};
  app.require_subcommand(1);

  RunConfig config;
  if (const char* env = std::getenv("MMCLUSTER_THREADS")) {
    try {
      config.threads = std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      err << "mmcluster: ignoring MMCLUSTER_THREADS='" << env << "'\n";
    }
  }
  std::vector<std::string> angle_text;

  const auto add_dataset_flags = [&](CLI::App* sub) {
    sub->add_option("--dataset", config.datasets, "Dataset name(s), comma separated")->delimiter(',');
    sub->add_option("--n", config.n_per_cluster, "Points per cluster")->check(CLI::PositiveNumber);
    sub->add_option("--tau", config.tau, "Noise bound")->check(CLI::NonNegativeNumber);
    sub->add_option("--angle", angle_text, "Crossing angle(s) in radians, e.g. pi/4,pi/8")->delimiter(',');
    sub->add_option("--dim", config.ambient_dim, "Ambient dimension (0 keeps the native one)");
    sub->add_flag("--measure-proportional", config.measure_proportional,
                  "Split points between clusters in proportion to surface measure");
  };
  const auto add_method_flags = [&](CLI::App* sub) {
    sub->add_option("--method", config.method, "alg2 | alg3 | alg4 | njw_baseline")
        ->check(CLI::IsMember({"alg2", "alg3", "alg4", "njw_baseline"}));
    sub->add_option("--r", config.r, "Neighborhood radius (one per dataset allowed)")->delimiter(',');
    sub->add_option("--eps", config.eps, "Spatial scale (auto when omitted for alg4)");
    sub->add_option("--eta", config.eta, "Covariance/projection scale (auto when omitted for alg4)");
    sub->add_option("--k", config.k, "Number of clusters");
    sub->add_option("--d", config.d, "Intrinsic dimension");
    sub->add_option("--affinity", config.affinity, "cov | proj | gauss | wang | gong | distance")
        ->check(CLI::IsMember({"cov", "proj", "gauss", "wang", "gong", "distance"}));
    sub->add_option("--norm", config.norm, "spectral | frobenius")->check(CLI::IsMember({"spectral", "frobenius"}));
    sub->add_option("--ell", config.ell, "Neighbor count for the wang and gong affinities");
    sub->add_option("--alpha", config.alpha, "Exponent of the wang affinity");
  };
  const auto add_common_flags = [&](CLI::App* sub) {
    sub->add_option("--seed", config.seed, "Random seed");
    sub->add_option("--threads", config.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", config.out, "Output file");
  };

  CLI::App* generate = app.add_subcommand("generate", "Write a synthetic point cloud as CSV");
  add_dataset_flags(generate);
  add_common_flags(generate);
  generate->get_option("--dataset")->required();

  CLI::App* cluster = app.add_subcommand("cluster", "Cluster a point-cloud CSV");
  cluster->add_option("input", config.input, "Point-cloud CSV")->required();
  add_method_flags(cluster);
  add_common_flags(cluster);
  cluster->add_option("--report", config.report, "Report path (default: <out>.report.json)");
  cluster->get_option("--r")->required();

  CLI::App* experiment = app.add_subcommand("experiment", "Repeated trials with summary statistics");
  add_dataset_flags(experiment);
  add_method_flags(experiment);
  add_common_flags(experiment);
  experiment->add_option("--trials", config.trials, "Trials per row")->check(CLI::PositiveNumber);
  experiment->get_option("--dataset")->required();
  experiment->get_option("--r")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? static_cast<int>(kOk) : static_cast<int>(kUsageError);
  }

  try {
    for (const std::string& a : angle_text) config.angles.push_back(parse_angle(a));
  } catch (const mmc::Error& e) {
    err << "mmcluster: " << e.what() << '\n';
    return kUsageError;
  }

  if (generate->parsed()) return cmd_generate(config, out, err);
  if (cluster->parsed()) return cmd_cluster(config, out, err);
  return cmd_experiment(config, out, err);
}

}  // namespace mmcli
