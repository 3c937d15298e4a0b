#include <algorithm>
#include <cmath>
#include <limits>

#include "mmc/cluster.hpp"
#include "mmc/error.hpp"

namespace mmc {

namespace {

double row_distance2(const Matrix& a, Eigen::Index i, const Matrix& b, Eigen::Index j) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const double diff = a(i, k) - b(j, k);
    s += diff * diff;
  }
  return s;
}

Matrix seed_centroids(const Matrix& rows, int k, Rng& rng) {
  const Eigen::Index m = rows.rows();
  Matrix centroids(k, rows.cols());
  centroids.row(0) = rows.row(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(m))));
  std::vector<double> nearest(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) nearest[static_cast<std::size_t>(i)] = row_distance2(rows, i, centroids, 0);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : nearest) total += v;
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = m - 1;
      for (Eigen::Index i = 0; i < m; ++i) {
        acc += nearest[static_cast<std::size_t>(i)];
        if (acc > target && nearest[static_cast<std::size_t>(i)] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(m)));
    }
    centroids.row(c) = rows.row(pick);
    for (Eigen::Index i = 0; i < m; ++i) {
      auto& v = nearest[static_cast<std::size_t>(i)];
      v = std::min(v, row_distance2(rows, i, centroids, c));
    }
  }
  return centroids;
}

// Nearest centroid per row (ties -> lowest centroid); returns the inertia.
double assign(const Matrix& rows, const Matrix& centroids, std::vector<int>& labels, std::vector<double>& dist2) {
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    int best = 0;
    double best_d = row_distance2(rows, i, centroids, 0);
    for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
      const double d = row_distance2(rows, i, centroids, c);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
    dist2[static_cast<std::size_t>(i)] = best_d;
    inertia += best_d;
  }
  return inertia;
}

KMeansResult lloyd(const Matrix& rows, Matrix centroids, const KMeansOptions& options) {
  const Eigen::Index m = rows.rows();
  const Eigen::Index k = centroids.rows();
  KMeansResult result;
  result.assignments.assign(static_cast<std::size_t>(m), 0);
  std::vector<double> dist2(static_cast<std::size_t>(m));
  for (int iter = 0; iter < options.max_iter; ++iter) {
    result.inertia_history.push_back(assign(rows, centroids, result.assignments, dist2));

    Matrix sums = Matrix::Zero(k, rows.cols());
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < m; ++i) {
      const int c = result.assignments[static_cast<std::size_t>(i)];
      sums.row(c) += rows.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    Matrix updated = centroids;
    for (Eigen::Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        updated.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
        continue;
      }
      // Empty cluster: move it to the worst-served row, which then belongs to it.
      const auto far = static_cast<Eigen::Index>(std::max_element(dist2.begin(), dist2.end()) - dist2.begin());
      updated.row(c) = rows.row(far);
      dist2[static_cast<std::size_t>(far)] = 0.0;
    }
    double shift = 0.0;
    for (Eigen::Index c = 0; c < k; ++c) shift = std::max(shift, std::sqrt(row_distance2(updated, c, centroids, c)));
    centroids = std::move(updated);
    if (shift < options.tol) break;
  }
  result.inertia = assign(rows, centroids, result.assignments, dist2);
  result.inertia_history.push_back(result.inertia);
  result.centroids = std::move(centroids);
  return result;
}

}  // namespace

KMeansResult kmeans_pp(const Matrix& rows, int k, Rng& rng, const KMeansOptions& options) {
  if (k < 1) throw Error(ErrorKind::InvalidInput, "k-means needs k >= 1");
  if (rows.rows() < k) throw Error(ErrorKind::TooFewRows, "fewer rows than clusters");
  if (!rows.allFinite()) throw Error(ErrorKind::InvalidInput, "k-means input has non-finite entries");
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < std::max(options.restarts, 1); ++restart) {
    KMeansResult candidate = lloyd(rows, seed_centroids(rows, k, rng), options);
    if (candidate.inertia < best.inertia) best = std::move(candidate);
  }
  return best;
}

}  // namespace mmc
