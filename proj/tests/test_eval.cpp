#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "mmc/error.hpp"
#include "mmc/eval.hpp"
#include "support.hpp"

using namespace mmc;
using std::numbers::pi;

namespace {

std::vector<int> random_labels(std::mt19937_64& gen, std::size_t n, int k) {
  std::uniform_int_distribution<int> pick(1, k);
  std::vector<int> out(n);
  for (auto& v : out) v = pick(gen);
  return out;
}

std::vector<int> permute_ids(const std::vector<int>& labels, const std::vector<int>& perm) {
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = perm[static_cast<std::size_t>(labels[i] - 1)];
  return out;
}

// Each point alone at a tiny radius: every trial separates the two points.
MethodConfig isolated_points_alg2() {
  MethodConfig c;
  c.method = Method::Alg2;
  c.params.r = 1e-4;
  c.params.eps = 1e-4;
  c.params.eta = 0.1;
  c.eps_set = true;
  c.eta_set = true;
  return c;
}

}  // namespace

TEST_CASE("misclustering rate examples") {
  const std::vector<int> truth = {1, 1, 1, 1, 2, 2, 2, 2, 2, 2};
  CHECK(misclustering_rate(truth, truth, 2) == 0.0);
  std::vector<int> swapped = truth;
  for (auto& v : swapped) v = 3 - v;
  CHECK(misclustering_rate(swapped, truth, 2) == 0.0);
  std::vector<int> flipped = truth;
  flipped[0] = 2;
  CHECK(misclustering_rate(flipped, truth, 2) == doctest::Approx(0.1));

  // An extra predicted cluster is never matched.
  const std::vector<int> extra = {1, 1, 1, 3, 2, 2, 2, 2, 2, 2};
  CHECK(misclustering_rate(extra, truth, 2) == doctest::Approx(0.1));
  // Everything in one group: at most one truth label can be matched.
  CHECK(misclustering_rate(std::vector<int>(10, 1), truth, 2) == doctest::Approx(0.4));

  Labeling l;
  l.assignments = flipped;
  l.k_found = 2;
  CHECK(misclustering_rate(l, truth, 2) == doctest::Approx(0.1));
}

TEST_CASE("misclustering rate rejects malformed input") {
  try {
    misclustering_rate({1, 2}, {1}, 2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
  }
  CHECK_THROWS_AS(misclustering_rate({1}, {3}, 2), Error);
  CHECK_THROWS_AS(misclustering_rate({0}, {1}, 2), Error);
}

TEST_CASE("misclustering rate equals exhaustive matching") {
  std::mt19937_64 gen(81);
  std::uniform_int_distribution<int> kdist(1, 3), extra(0, 3), ndist(1, 40);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = kdist(gen);
    const int kp = std::max(1, k + extra(gen) - 1);
    const auto n = static_cast<std::size_t>(ndist(gen));
    auto truth = random_labels(gen, n, k);
    auto pred = random_labels(gen, n, kp);
    // Bias predictions towards the truth so that matches matter.
    std::bernoulli_distribution keep(0.6);
    for (std::size_t i = 0; i < n; ++i)
      if (keep(gen) && truth[i] <= kp) pred[i] = truth[i];
    REQUIRE(misclustering_rate(pred, truth, k) == doctest::Approx(oracle::misclustering_bruteforce(pred, truth, k)).epsilon(1e-12));
  }
}

TEST_CASE("misclustering rate is relabel invariant and symmetric") {
  std::mt19937_64 gen(82);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 3;
    auto truth = random_labels(gen, 60, k);
    auto pred = truth;
    std::bernoulli_distribution noise(0.3);
    std::uniform_int_distribution<int> pick(1, k);
    for (auto& v : pred)
      if (noise(gen)) v = pick(gen);
    const double base = misclustering_rate(pred, truth, k);

    std::vector<int> perm = {1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), gen);
    REQUIRE(misclustering_rate(permute_ids(pred, perm), truth, k) == base);
    std::shuffle(perm.begin(), perm.end(), gen);
    REQUIRE(misclustering_rate(pred, permute_ids(truth, perm), k) == base);

    bool square = true;
    for (int id = 1; id <= k; ++id) square = square && std::count(pred.begin(), pred.end(), id) > 0;
    if (square) REQUIRE(misclustering_rate(truth, pred, k) == base);
  }
}

TEST_CASE("hungarian equals brute force on small cost matrices") {
  std::mt19937_64 gen(83);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index rows = 1 + trial % 4;
    const Eigen::Index cols = rows + (trial / 4) % 3;
    Matrix cost(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) cost(i, j) = std::floor(u(gen));
    const auto assign = hungarian(cost);
    REQUIRE(assign.size() == static_cast<std::size_t>(rows));
    std::set<std::size_t> used(assign.begin(), assign.end());
    REQUIRE(used.size() == assign.size());
    double got = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) got += cost(i, static_cast<Eigen::Index>(assign[static_cast<std::size_t>(i)]));

    std::vector<Eigen::Index> columns(static_cast<std::size_t>(cols));
    std::iota(columns.begin(), columns.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double total = 0.0;
      for (Eigen::Index i = 0; i < rows; ++i) total += cost(i, columns[static_cast<std::size_t>(i)]);
      best = std::min(best, total);
    } while (std::next_permutation(columns.begin(), columns.end()));
    REQUIRE(got == best);
  }
  CHECK_THROWS_AS(hungarian(Matrix::Zero(3, 2)), Error);
}

TEST_CASE("lower median") {
  CHECK(lower_median({0.3}) == 0.3);
  CHECK(lower_median({0.4, 0.1}) == 0.1);
  CHECK(lower_median({0.5, 0.1, 0.3, 0.2}) == 0.2);
  CHECK(lower_median({0.5, 0.1, 0.3}) == 0.3);
  CHECK_THROWS_AS(lower_median({}), Error);
}

TEST_CASE("summarize recounts thresholds") {
  std::mt19937_64 gen(84);
  std::uniform_real_distribution<double> u(0.0, 0.3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> rates(static_cast<std::size_t>(1 + trial));
    for (auto& r : rates) r = u(gen);
    if (trial % 10 == 0) rates[0] = 0.05;  // boundary is not counted
    const auto stats = summarize(rates, std::vector<std::string>(rates.size()), 0.02, 0.5);
    for (std::size_t k = 0; k < 3; ++k) {
      const auto expected = std::count_if(rates.begin(), rates.end(), [&](double r) { return r < kRateThresholds[k]; });
      REQUIRE(stats.count_below[k] == expected);
    }
    REQUIRE(stats.count_below[0] <= stats.count_below[1]);
    REQUIRE(stats.count_below[1] <= stats.count_below[2]);
    std::vector<double> sorted = rates;
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(stats.median == sorted[(sorted.size() - 1) / 2]);
    REQUIRE(stats.rates == rates);
    REQUIRE(stats.r_over_R == doctest::Approx(0.04));
  }
}

TEST_CASE("run_trials on an exactly separable instance") {
  DatasetSpec spec;
  spec.name = DatasetName::TwoSegments;
  spec.n_per_cluster = 1;
  const auto stats = run_trials(spec, isolated_points_alg2(), 7, 3);
  CHECK(stats.median == 0.0);
  CHECK(stats.count_below == std::array<int, 3>{7, 7, 7});
  CHECK(stats.rates.size() == 7);
  CHECK(stats.r_used == 1e-4);

  const auto one = run_trials(spec, isolated_points_alg2(), 1, 3);
  CHECK(one.median == one.rates[0]);
  CHECK_THROWS_AS(run_trials(spec, isolated_points_alg2(), 0, 3), Error);
}

TEST_CASE("run_trials records failing trials as rate one") {
  DatasetSpec spec;
  spec.name = DatasetName::TwoSegments;
  spec.n_per_cluster = 50;
  MethodConfig c;
  c.method = Method::Alg4;
  c.params.r = 10.0;  // a single center, fewer than K
  const auto stats = run_trials(spec, c, 3, 1);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(stats.rates[t] == 1.0);
    CHECK_FALSE(stats.errors[t].empty());
  }
  CHECK(stats.count_below == std::array<int, 3>{0, 0, 0});
}

TEST_CASE("run_trials is reproducible and thread independent") {
  DatasetSpec spec;
  spec.name = DatasetName::TwoSegments;
  spec.n_per_cluster = 300;
  spec.tau = 0.01;
  MethodConfig c;
  c.method = Method::Alg4;
  c.params.r = 0.08;
  const auto a = run_trials(spec, c, 6, 11, 1);
  CHECK(a == run_trials(spec, c, 6, 11, 1));
  CHECK(a == run_trials(spec, c, 6, 11, 4));
  CHECK_FALSE(a.rates == run_trials(spec, c, 6, 12, 1).rates);
}

TEST_CASE("angle sweep") {
  DatasetSpec base;
  base.n_per_cluster = 400;
  base.tau = 0.005;
  MethodConfig c;
  c.method = Method::Alg4;
  c.params.r = 0.04;

  CHECK(angle_sweep({}, base, c, 3, 1).empty());

  const auto single = angle_sweep({pi / 3}, base, c, 3, 5);
  REQUIRE(single.size() == 1);
  DatasetSpec direct = base;
  direct.name = DatasetName::TwoCurvesAngle;
  direct.angle = pi / 3;
  CHECK(single[0].angle == pi / 3);
  CHECK(single[0].stats == run_trials(direct, c, 3, 5));

  DatasetSpec trend = base;
  trend.n_per_cluster = 1500;
  MethodConfig fine = c;
  fine.params.r = 0.02;
  const auto rows = angle_sweep({pi / 2, pi / 8}, trend, fine, 11, 2024);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].stats.median < rows[1].stats.median);
}
