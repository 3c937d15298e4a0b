#include "mmc/local_pca.hpp"

#include <cmath>

#include "mmc/parallel.hpp"

namespace mmc {

SymmetricMatrix covariance_of(const PointMatrix& coords, const std::vector<std::size_t>& members) {
  const Eigen::Index dim = coords.cols();
  if (members.empty()) throw Error(ErrorKind::EmptyNeighborhood, "covariance of an empty set");
  const double m = static_cast<double>(members.size());
  Vector mean = Vector::Zero(dim);
  for (std::size_t j : members) mean += coords.row(static_cast<Eigen::Index>(j)).transpose();
  mean /= m;
  Matrix cov = Matrix::Zero(dim, dim);
  Vector centered(dim);
  for (std::size_t j : members) {
    centered = coords.row(static_cast<Eigen::Index>(j)).transpose() - mean;
    cov.noalias() += centered * centered.transpose();
  }
  cov /= m;
  return SymmetricMatrix(cov);
}

SymmetricMatrix local_covariance(const PointCloud& cloud, const NeighborhoodIndex& index, const Vector& x, double r) {
  const auto members = radius_query(index, x, r);
  if (members.empty()) throw Error(ErrorKind::EmptyNeighborhood, "no data point within r of the query");
  return covariance_of(cloud.coords, members);
}

SymmetricMatrix estimate_projection(const SymmetricMatrix& c, Eigen::Index d) {
  return projection_onto_top_d(eigh(c), d);
}

DimensionEstimate estimate_dim_thresholded(const SymmetricMatrix& c, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw Error(ErrorKind::InvalidInput, "eta must lie in (0, 1)");
  const EigenDecomposition e = eigh(c);
  const double top = std::max(std::abs(e.eigenvalues(0)), std::abs(e.eigenvalues(e.eigenvalues.size() - 1)));
  if (!(top > 0.0)) throw Error(ErrorKind::ZeroCovariance, "cannot threshold a zero covariance");
  const double threshold = std::sqrt(eta) * top;
  Eigen::Index count = 0;
  while (count < e.eigenvalues.size() && e.eigenvalues(count) > threshold) ++count;
  return {count, projection_onto_top_d(e, count)};
}

std::vector<LocalModel> batch_local_models(const PointCloud& cloud, const NeighborhoodIndex& index,
                                           const PointMatrix& centers, double r, LocalPcaMode mode, int threads) {
  if (centers.rows() < 1) throw Error(ErrorKind::InvalidInput, "batch_local_models: no centers");
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidInput, "batch_local_models: r must be positive");
  const Eigen::Index dim = cloud.dim();
  if (mode.kind == LocalPcaMode::Kind::FixedDim && (mode.d < 1 || mode.d > dim)) {
    throw Error(ErrorKind::InvalidInput, "batch_local_models: d out of range");
  }
  if (mode.kind == LocalPcaMode::Kind::Thresholded && !(mode.eta > 0.0 && mode.eta < 1.0)) {
    throw Error(ErrorKind::InvalidInput, "batch_local_models: eta must lie in (0, 1)");
  }

  std::vector<LocalModel> models(static_cast<std::size_t>(centers.rows()));
  parallel_for(models.size(), threads, [&](std::size_t i) {
    LocalModel& model = models[i];
    model.center = centers.row(static_cast<Eigen::Index>(i)).transpose();
    const auto members = index.radius_query(model.center.data(), r);
    model.neighbor_count = members.size();
    if (members.empty()) {
      model.covariance = SymmetricMatrix::zero(dim);
      model.degenerate = true;
      model.error = ErrorKind::EmptyNeighborhood;
    } else {
      model.covariance = covariance_of(cloud.coords, members);
      model.degenerate = members.size() < 2;
    }

    const EigenDecomposition e = eigh(model.covariance);
    if (mode.kind == LocalPcaMode::Kind::FixedDim) {
      model.est_dim = mode.d;
      model.projection = projection_onto_top_d(e, mode.d);
      model.degenerate_gap = has_degenerate_gap(e, mode.d);
      return;
    }
    try {
      DimensionEstimate est = estimate_dim_thresholded(model.covariance, mode.eta);
      model.est_dim = est.est_dim;
      model.projection = std::move(est.projection);
      model.degenerate_gap = has_degenerate_gap(e, est.est_dim);
    } catch (const Error& err) {
      model.degenerate = true;
      model.error = err.kind();
      model.est_dim = 1;
      model.projection = projection_onto_top_d(e, 1);
    }
  });
  return models;
}

}  // namespace mmc
