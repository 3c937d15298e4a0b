#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmc/eval.hpp"

namespace mmc {

// Parameters as the user gave them; unset entries were resolved per row.
struct ExperimentConfig {
  std::vector<std::string> datasets;
  std::size_t n_per_cluster = 0;
  double tau = 0.0;
  std::vector<double> angles;
  std::int64_t ambient_dim = 0;
  bool measure_proportional = false;
  std::string method;
  std::vector<double> r;
  std::optional<double> eps;
  std::optional<double> eta;
  std::optional<int> k;
  std::optional<int> d;
  std::string affinity;
  std::string norm;
  std::size_t ell = 10;
  double alpha = 1.0;
  int trials = 0;
  std::uint64_t seed = 0;

  bool operator==(const ExperimentConfig&) const = default;
};

struct ExperimentRow {
  std::string dataset;
  std::optional<double> angle;
  int k = 0;
  int d = 0;
  TrialStats stats;

  bool operator==(const ExperimentRow&) const = default;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ExperimentRow> rows;

  bool operator==(const ExperimentReport&) const = default;
};

struct ClusterReport {
  std::string input;
  std::size_t n_points = 0;
  std::string method;
  double r = 0.0;
  std::optional<double> eps;  // as given
  std::optional<double> eta;
  int k = 0;
  int d = 0;
  std::string affinity;
  std::string norm;
  std::uint64_t seed = 0;
  std::optional<double> eps_used;
  std::optional<double> eta_used;
  int k_found = 0;
  std::vector<std::size_t> cluster_sizes;
  std::size_t removed = 0;
  std::size_t centers = 0;
  double runtime_ms = 0.0;
  std::optional<double> misclustering;

  bool operator==(const ClusterReport&) const = default;
};

// Pretty-printed JSON (two-space indent, trailing newline). Key order is
// fixed, so equal reports serialize to identical bytes.
std::string to_json_text(const ExperimentReport& report);
std::string to_json_text(const ClusterReport& report);

// Throw Error(InvalidInput) on malformed documents.
ExperimentReport parse_experiment_report(const std::string& text);
ClusterReport parse_cluster_report(const std::string& text);

// Aligned plain-text table, one line per row.
std::string format_table(const ExperimentReport& report);

}  // namespace mmc
