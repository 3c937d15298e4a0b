#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mmc/cluster.hpp"
#include "mmc/datasets.hpp"

namespace mmcli {

enum ExitCode { kOk = 0, kAlgorithmFailure = 1, kUsageError = 2 };

struct RunConfig {
  std::vector<std::string> datasets;
  std::size_t n_per_cluster = 500;
  double tau = 0.0;
  std::vector<double> angles;
  std::int64_t ambient_dim = 0;
  bool measure_proportional = false;

  std::string method;  // empty: implied by the affinity
  std::vector<double> r;
  std::optional<double> eps;
  std::optional<double> eta;
  std::optional<int> k;
  std::optional<int> d;
  std::string affinity = "gauss";  // cov | proj | gauss | wang | gong | distance
  std::string norm = "spectral";
  std::size_t ell = 10;
  double alpha = 1.0;

  int trials = 100;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string input;
  std::string out;
  std::string report;  // cluster: report path, defaults to <out>.report.json
};

// Accepts plain radians or multiples of pi such as "pi/4", "3pi/8", "pi".
double parse_angle(const std::string& text);

// Method name after applying the affinity shorthand (cov -> alg2, proj -> alg3).
std::string resolve_method_name(const RunConfig& config);

// Builds the method settings for one dataset row; unset k and d fall back
// to the given defaults.
mmc::MethodConfig make_method_config(const RunConfig& config, double r, std::optional<int> default_k,
                                     std::optional<int> default_d);

int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_cluster(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_experiment(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv and dispatches; returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mmcli
