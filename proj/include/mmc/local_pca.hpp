#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mmc/error.hpp"
#include "mmc/linalg.hpp"
#include "mmc/neighborhoods.hpp"

namespace mmc {

struct LocalModel {
  Vector center;
  std::size_t neighbor_count = 0;
  SymmetricMatrix covariance;  // squared length units
  SymmetricMatrix projection;  // estimated tangent projection
  Eigen::Index est_dim = 0;
  // Fewer than two neighbors, a zero covariance under thresholding, or an
  // empty neighborhood. Affinities never connect a degenerate model.
  bool degenerate = false;
  bool degenerate_gap = false;  // top-d eigenspace not unique
  std::optional<ErrorKind> error;
};

// Covariance of the empirical distribution of N_r(x), normalized by the
// neighbor count m (not m - 1). Throws EmptyNeighborhood when N_r(x) is empty.
SymmetricMatrix local_covariance(const PointCloud& cloud, const NeighborhoodIndex& index, const Vector& x, double r);
SymmetricMatrix covariance_of(const PointMatrix& coords, const std::vector<std::size_t>& members);

// Projection onto the top-d eigenvectors of C.
SymmetricMatrix estimate_projection(const SymmetricMatrix& c, Eigen::Index d);

struct DimensionEstimate {
  Eigen::Index est_dim = 0;
  SymmetricMatrix projection;
};

// Keeps the eigenvectors whose eigenvalue strictly exceeds sqrt(eta) * |C|.
// Throws ZeroCovariance on a zero matrix.
DimensionEstimate estimate_dim_thresholded(const SymmetricMatrix& c, double eta);

struct LocalPcaMode {
  enum class Kind { FixedDim, Thresholded } kind = Kind::FixedDim;
  Eigen::Index d = 1;
  double eta = 0.0;

  static LocalPcaMode fixed_dim(Eigen::Index d) { return {Kind::FixedDim, d, 0.0}; }
  static LocalPcaMode thresholded(double eta) { return {Kind::Thresholded, 0, eta}; }
};

// One LocalModel per row of `centers`. Per-center failures are recorded on
// the model rather than thrown. Results do not depend on `threads`.
std::vector<LocalModel> batch_local_models(const PointCloud& cloud, const NeighborhoodIndex& index,
                                           const PointMatrix& centers, double r, LocalPcaMode mode,
                                           int threads = 1);

}  // namespace mmc
