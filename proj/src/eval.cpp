#include "mmc/eval.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "mmc/error.hpp"
#include "mmc/parallel.hpp"
#include "mmc/random.hpp"

namespace mmc {

std::vector<std::size_t> hungarian(const Matrix& cost) {
  const auto n = static_cast<std::size_t>(cost.rows());
  const auto m = static_cast<std::size_t>(cost.cols());
  if (n > m) throw Error(ErrorKind::InvalidInput, "hungarian: more rows than columns");
  const double inf = std::numeric_limits<double>::infinity();
  // Potentials and matching with 1-based sentinels (classic O(n^2 m) form).
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> out(n);
  for (std::size_t j = 1; j <= m; ++j) {
    if (match[j] != 0) out[match[j] - 1] = j - 1;
  }
  return out;
}

double misclustering_rate(const std::vector<int>& predicted, const std::vector<int>& truth, int k) {
  if (predicted.size() != truth.size()) throw Error(ErrorKind::InvalidInput, "label vectors differ in length");
  if (k < 1) throw Error(ErrorKind::InvalidInput, "k must be at least 1");
  if (truth.empty()) return 0.0;
  int k_found = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 1 || truth[i] > k) throw Error(ErrorKind::InvalidInput, "truth label outside [1..k]");
    if (predicted[i] < 1) throw Error(ErrorKind::InvalidInput, "predicted labels must be positive");
    k_found = std::max(k_found, predicted[i]);
  }
  const auto kt = static_cast<std::size_t>(k);
  const auto kp = static_cast<std::size_t>(k_found);
  std::vector<std::vector<std::size_t>> overlap(kt, std::vector<std::size_t>(kp, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++overlap[static_cast<std::size_t>(truth[i] - 1)][static_cast<std::size_t>(predicted[i] - 1)];
  }
  // An optimal matching only uses, for each truth label, one of its k
  // largest-overlap predicted clusters, so the rest can be dropped.
  std::vector<char> candidate(kp, 0);
  for (std::size_t t = 0; t < kt; ++t) {
    std::vector<std::size_t> order(kp);
    std::iota(order.begin(), order.end(), 0);
    const std::size_t keep = std::min(kt, kp);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        return overlap[t][a] > overlap[t][b] || (overlap[t][a] == overlap[t][b] && a < b);
                      });
    for (std::size_t q = 0; q < keep; ++q) candidate[order[q]] = 1;
  }
  std::vector<std::size_t> columns;
  for (std::size_t p = 0; p < kp; ++p) {
    if (candidate[p]) columns.push_back(p);
  }
  const std::size_t width = std::max(columns.size(), kt);
  Matrix cost = Matrix::Zero(static_cast<Eigen::Index>(kt), static_cast<Eigen::Index>(width));
  for (std::size_t t = 0; t < kt; ++t) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      cost(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c)) = -static_cast<double>(overlap[t][columns[c]]);
    }
  }
  const auto assignment = hungarian(cost);
  std::size_t matched = 0;
  for (std::size_t t = 0; t < kt; ++t) {
    if (assignment[t] < columns.size()) matched += overlap[t][columns[assignment[t]]];
  }
  return 1.0 - static_cast<double>(matched) / static_cast<double>(truth.size());
}

double misclustering_rate(const Labeling& predicted, const std::vector<int>& truth, int k) {
  return misclustering_rate(predicted.assignments, truth, k);
}

double lower_median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorKind::InvalidInput, "median of an empty list");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

TrialStats summarize(std::vector<double> rates, std::vector<std::string> errors, double r, double global_r) {
  TrialStats stats;
  stats.median = lower_median(rates);
  for (double rate : rates) {
    for (std::size_t k = 0; k < kRateThresholds.size(); ++k) {
      if (rate < kRateThresholds[k]) ++stats.count_below[k];
    }
  }
  stats.rates = std::move(rates);
  stats.errors = std::move(errors);
  stats.r_used = r;
  stats.r_over_R = global_r > 0.0 ? r / global_r : 0.0;
  return stats;
}

TrialStats run_trials(const DatasetSpec& spec, const MethodConfig& method, int n_trials, std::uint64_t base_seed,
                      int threads) {
  if (n_trials < 1) throw Error(ErrorKind::InvalidInput, "n_trials must be at least 1");
  spec.validate();
  method.validate();
  const auto count = static_cast<std::size_t>(n_trials);
  std::vector<double> rates(count, 1.0);
  std::vector<std::string> errors(count);
  std::vector<double> radii(count, 0.0);
  const int k = dataset_info(spec.name).clusters;

  parallel_for(count, threads, [&](std::size_t t) {
    const std::uint64_t seed = derive_seed(base_seed, t);
    DatasetSpec trial_spec = spec;
    trial_spec.seed = seed;
    const GeneratedData data = generate(trial_spec);
    radii[t] = global_radius(data.cloud);
    try {
      const RunResult result = run_method(data.cloud, method, seed, 1);
      rates[t] = misclustering_rate(result.labeling, *data.cloud.labels, k);
    } catch (const std::exception& e) {
      rates[t] = 1.0;
      errors[t] = e.what();
    }
  });
  return summarize(std::move(rates), std::move(errors), method.params.r, lower_median(radii));
}

std::vector<AngleRow> angle_sweep(const std::vector<double>& angles, const DatasetSpec& base,
                                  const MethodConfig& method, int n_trials, std::uint64_t base_seed, int threads) {
  std::vector<AngleRow> rows;
  rows.reserve(angles.size());
  for (double angle : angles) {
    DatasetSpec spec = base;
    spec.name = DatasetName::TwoCurvesAngle;
    spec.angle = angle;
    rows.push_back({angle, run_trials(spec, method, n_trials, base_seed, threads)});
  }
  return rows;
}

}  // namespace mmc
