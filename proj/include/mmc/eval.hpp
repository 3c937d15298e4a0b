#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mmc/cluster.hpp"
#include "mmc/datasets.hpp"

namespace mmc {

// Minimum-cost assignment for a rows x cols cost matrix with rows <= cols.
// Returns the column assigned to each row.
std::vector<std::size_t> hungarian(const Matrix& cost);

// Fraction of points left misclustered by the best matching of predicted
// clusters to truth labels. Each predicted cluster maps to at most one truth
// label and vice versa; members of unmatched predicted clusters all count as
// errors. Truth labels must lie in [1..k].
double misclustering_rate(const std::vector<int>& predicted, const std::vector<int>& truth, int k);
double misclustering_rate(const Labeling& predicted, const std::vector<int>& truth, int k);

inline constexpr std::array<double, 3> kRateThresholds = {0.05, 0.10, 0.15};

struct TrialStats {
  std::vector<double> rates;
  std::vector<std::string> errors;  // empty string for trials that ran
  double median = 0.0;              // lower-middle order statistic
  std::array<int, 3> count_below{};  // rates strictly below 5%, 10%, 15%
  double r_used = 0.0;
  double r_over_R = 0.0;

  bool operator==(const TrialStats&) const = default;
};

double lower_median(std::vector<double> values);

// Median and threshold counts for `rates`.
TrialStats summarize(std::vector<double> rates, std::vector<std::string> errors, double r, double global_r);

// Trial t generates data and runs the method with seed derive_seed(base_seed, t).
// A trial whose method throws is recorded as rate 1.0 with the error message.
TrialStats run_trials(const DatasetSpec& spec, const MethodConfig& method, int n_trials, std::uint64_t base_seed,
                      int threads = 1);

struct AngleRow {
  double angle = 0.0;
  TrialStats stats;
};

// run_trials on two_curves_angle for each angle; other fields of `base` are
// kept.
std::vector<AngleRow> angle_sweep(const std::vector<double>& angles, const DatasetSpec& base,
                                  const MethodConfig& method, int n_trials, std::uint64_t base_seed, int threads = 1);

}  // namespace mmc
