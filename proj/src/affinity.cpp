#include "mmc/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmc/error.hpp"
#include "mmc/parallel.hpp"

namespace mmc {

namespace {

double center_distance(const LocalModel& a, const LocalModel& b) {
  return std::sqrt(squared_distance(a.center.data(), b.center.data(), a.center.size()));
}

void require_models(const std::vector<LocalModel>& models, const char* what) {
  if (models.empty()) throw Error(ErrorKind::InvalidInput, std::string(what) + ": no models");
}

// Builds the binary graph of all pairs within eps that also satisfy `keep`.
template <typename Keep>
Graph indicator_graph(const std::vector<LocalModel>& models, double eps, int threads, Keep keep) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidInput, "eps must be positive");
  const PointMatrix centers = centers_of(models);
  const NeighborhoodIndex index(centers);
  std::vector<std::vector<std::size_t>> upper(models.size());
  parallel_for(models.size(), threads, [&](std::size_t i) {
    if (models[i].degenerate) return;
    for (std::size_t j : index.radius_query(models[i].center.data(), eps)) {
      if (j <= i || models[j].degenerate) continue;
      if (keep(models[i], models[j])) upper[i].push_back(j);
    }
  });
  return Graph(std::move(upper));
}

}  // namespace

AffinityMatrix::AffinityMatrix(Matrix w) : w_(std::move(w)) {
  if (w_.rows() != w_.cols()) throw Error(ErrorKind::InvalidInput, "affinity matrix must be square");
  if (!w_.allFinite()) throw Error(ErrorKind::InvalidInput, "affinity matrix has non-finite entries");
  if ((w_.array() < 0.0).any()) throw Error(ErrorKind::InvalidInput, "affinity matrix has negative entries");
  if (w_ != w_.transpose()) throw Error(ErrorKind::InvalidInput, "affinity matrix is not symmetric");
}

Graph AffinityMatrix::binary_graph(double threshold) const {
  Graph g(size());
  for (Eigen::Index i = 0; i < w_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < w_.cols(); ++j) {
      if (w_(i, j) > threshold) g.add_edge(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  return g;
}

PointMatrix centers_of(const std::vector<LocalModel>& models) {
  require_models(models, "centers_of");
  PointMatrix out(static_cast<Eigen::Index>(models.size()), models.front().center.size());
  for (std::size_t i = 0; i < models.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = models[i].center.transpose();
  return out;
}

Graph cov_indicator_affinity(const std::vector<LocalModel>& models, double eps, double eta, double r, NormMode norm,
                             int threads) {
  require_models(models, "cov_indicator_affinity");
  if (!(eta > 0.0) || !(r > 0.0)) throw Error(ErrorKind::InvalidInput, "eta and r must be positive");
  const double limit = eta * r * r;
  return indicator_graph(models, eps, threads, [&](const LocalModel& a, const LocalModel& b) {
    return difference_norm(a.covariance, b.covariance, norm) <= limit;
  });
}

Graph proj_indicator_affinity(const std::vector<LocalModel>& models, double eps, double eta, NormMode norm,
                              int threads) {
  require_models(models, "proj_indicator_affinity");
  if (!(eta > 0.0)) throw Error(ErrorKind::InvalidInput, "eta must be positive");
  return indicator_graph(models, eps, threads, [&](const LocalModel& a, const LocalModel& b) {
    return difference_norm(a.projection, b.projection, norm) <= eta;
  });
}

AffinityMatrix gaussian_product_affinity(const std::vector<LocalModel>& models, double eps, double eta,
                                         NormMode norm, int threads) {
  require_models(models, "gaussian_product_affinity");
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidInput, "eps must be positive");
  if (!(eta >= 0.0)) throw Error(ErrorKind::InvalidInput, "eta must be nonnegative");
  const auto n = static_cast<Eigen::Index>(models.size());
  Matrix w = Matrix::Identity(n, n);
  parallel_for(models.size(), threads, [&](std::size_t i) {
    if (models[i].degenerate) return;
    for (std::size_t j = i + 1; j < models.size(); ++j) {
      if (models[j].degenerate) continue;
      const double d2 = squared_distance(models[i].center.data(), models[j].center.data(), models[i].center.size());
      const double spatial = std::exp(-d2 / (eps * eps));
      const double q = difference_norm(models[i].projection, models[j].projection, norm);
      double tangent;
      if (eta > 0.0) {
        tangent = std::exp(-(q * q) / (eta * eta));
      } else {
        tangent = q == 0.0 ? 1.0 : 0.0;
      }
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = spatial * tangent;
    }
  });
  w.triangularView<Eigen::StrictlyLower>() = w.transpose().triangularView<Eigen::StrictlyLower>();
  return AffinityMatrix(std::move(w));
}

std::vector<double> kth_neighbor_distances(const PointMatrix& points, std::size_t ell) {
  if (ell < 1) throw Error(ErrorKind::InvalidInput, "ell must be at least 1");
  const auto n = static_cast<std::size_t>(points.rows());
  if (n <= ell) throw Error(ErrorKind::InvalidInput, "ell must be smaller than the number of points");
  const NeighborhoodIndex index(points);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = points.data() + i * static_cast<std::size_t>(points.cols());
    std::size_t seen = 0;
    for (std::size_t j : index.knn(x, ell + 1)) {
      if (j == i) continue;
      if (++seen == ell) {
        out[i] = std::sqrt(squared_distance(x, index.point(j), points.cols()));
        break;
      }
    }
  }
  return out;
}

AffinityMatrix wang_affinity(const std::vector<LocalModel>& models, std::size_t ell, double alpha, int threads) {
  require_models(models, "wang_affinity");
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidInput, "alpha must be positive");
  if (ell < 1 || ell >= models.size()) throw Error(ErrorKind::InvalidInput, "ell out of range");
  for (const auto& m : models) {
    if (m.est_dim != models.front().est_dim) {
      throw Error(ErrorKind::DimensionMismatch, "wang_affinity needs equal tangent dimensions");
    }
  }
  const PointMatrix centers = centers_of(models);
  const NeighborhoodIndex index(centers);
  const std::size_t n = models.size();
  std::vector<std::vector<std::size_t>> near(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : index.knn(index.point(i), ell + 1)) {
      if (j != i && near[i].size() < ell) near[i].push_back(j);
    }
  }
  const Graph delta(std::move(near));

  Matrix w = Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  parallel_for(n, threads, [&](std::size_t i) {
    if (models[i].degenerate) return;
    for (std::size_t j : delta.neighbors(i)) {
      if (j <= i || models[j].degenerate) continue;
      double prod = 1.0;
      for (double theta : principal_angles(models[i].projection, models[j].projection)) prod *= std::cos(theta);
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::pow(std::max(prod, 0.0), alpha);
    }
  });
  w.triangularView<Eigen::StrictlyLower>() = w.transpose().triangularView<Eigen::StrictlyLower>();
  return AffinityMatrix(std::move(w));
}

AffinityMatrix gong_affinity(const std::vector<LocalModel>& models, std::size_t ell, double eta, NormMode norm,
                             int threads) {
  require_models(models, "gong_affinity");
  if (!(eta > 0.0)) throw Error(ErrorKind::InvalidInput, "eta must be positive");
  const PointMatrix centers = centers_of(models);
  const std::vector<double> scale = kth_neighbor_distances(centers, ell);
  const std::size_t n = models.size();
  Matrix w = Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  parallel_for(n, threads, [&](std::size_t i) {
    if (models[i].degenerate) return;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (models[j].degenerate) continue;
      const double d2 = squared_distance(models[i].center.data(), models[j].center.data(), centers.cols());
      const double q = std::clamp(difference_norm(models[i].projection, models[j].projection, norm), 0.0, 1.0);
      const double tuned = scale[i] * scale[j];
      double value;
      if (d2 == 0.0) {
        value = q <= 1e-12 ? 1.0 : 0.0;
      } else if (tuned == 0.0) {
        value = 0.0;
      } else {
        const double ratio = d2 / tuned;
        const double angle = std::asin(q);
        value = std::exp(-ratio) * std::exp(-(angle * angle) / (eta * eta * ratio));
      }
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
    }
  });
  w.triangularView<Eigen::StrictlyLower>() = w.transpose().triangularView<Eigen::StrictlyLower>();
  return AffinityMatrix(std::move(w));
}

double auto_epsilon(const PointMatrix& centers) {
  const auto n = static_cast<std::size_t>(centers.rows());
  if (n < 2) throw Error(ErrorKind::TooFewCenters, "auto_epsilon needs at least two centers");
  const NeighborhoodIndex index(centers);
  double worst2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = index.point(i);
    for (std::size_t j : index.knn(x, 2)) {
      if (j == i) continue;
      worst2 = std::max(worst2, squared_distance(x, index.point(j), centers.cols()));
      break;
    }
  }
  return std::sqrt(worst2);
}

double auto_eta(const std::vector<LocalModel>& models, double eps, NormMode norm) {
  require_models(models, "auto_eta");
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidInput, "eps must be positive");
  const PointMatrix centers = centers_of(models);
  const NeighborhoodIndex index(centers);
  std::vector<double> values;
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j : index.radius_query(index.point(i), eps)) {
      if (j <= i || !(center_distance(models[i], models[j]) < eps)) continue;
      values.push_back(difference_norm(models[i].projection, models[j].projection, norm));
    }
  }
  if (values.empty()) throw Error(ErrorKind::NoPairsInRange, "no center pair closer than eps");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

}  // namespace mmc
