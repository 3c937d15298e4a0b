#pragma once

#include <cstddef>
#include <vector>

#include "mmc/linalg.hpp"
#include "mmc/local_pca.hpp"
#include "mmc/neighborhoods.hpp"

namespace mmc {

// Dense symmetric nonnegative pairwise weights.
class AffinityMatrix {
 public:
  AffinityMatrix() = default;
  // Throws InvalidInput unless `w` is square, finite, nonnegative and
  // exactly symmetric.
  explicit AffinityMatrix(Matrix w);

  std::size_t size() const noexcept { return static_cast<std::size_t>(w_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return w_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Matrix& matrix() const noexcept { return w_; }

  // Edges wherever an off-diagonal weight exceeds `threshold`.
  Graph binary_graph(double threshold = 0.0) const;

 private:
  Matrix w_;
};

struct ScaleParams {
  double r = 0.0;    // neighborhood radius
  double eps = 0.0;  // spatial scale
  double eta = 0.0;  // covariance / projection scale, dimensionless
  double tau = 0.0;  // noise bound (generation side)
};

// Indicator affinities are stored sparsely as the graph of their unit
// entries; the diagonal is zero.

// W_ij = 1{|x_i - x_j| <= eps} * 1{|C_i - C_j| <= eta r^2}
Graph cov_indicator_affinity(const std::vector<LocalModel>& models, double eps, double eta, double r,
                             NormMode norm = NormMode::Spectral, int threads = 1);

// W_ij = 1{|x_i - x_j| <= eps} * 1{|Q_i - Q_j| <= eta}
Graph proj_indicator_affinity(const std::vector<LocalModel>& models, double eps, double eta,
                              NormMode norm = NormMode::Spectral, int threads = 1);

// W_ij = exp(-|y_i - y_j|^2 / eps^2) * exp(-|Q_i - Q_j|^2 / eta^2), unit
// diagonal. eta == 0 is taken as the limit: the second factor is 1 for equal
// projections and 0 otherwise.
AffinityMatrix gaussian_product_affinity(const std::vector<LocalModel>& models, double eps, double eta,
                                         NormMode norm = NormMode::Spectral, int threads = 1);

// W_ij = Delta_ij * (prod_s cos theta_s(i, j))^alpha where Delta is the
// symmetric ell-nearest-neighbor indicator. All models must share est_dim.
AffinityMatrix wang_affinity(const std::vector<LocalModel>& models, std::size_t ell, double alpha, int threads = 1);

// Self-tuned affinity with arcsine projection discrepancy; eps_i is the
// distance from center i to its ell-th nearest neighbor.
AffinityMatrix gong_affinity(const std::vector<LocalModel>& models, std::size_t ell, double eta,
                             NormMode norm = NormMode::Spectral, int threads = 1);

// Distance from each row to its ell-th nearest other row.
std::vector<double> kth_neighbor_distances(const PointMatrix& points, std::size_t ell);

// max_i min_{j != i} |y_i - y_j|. Throws TooFewCenters for fewer than 2 rows.
double auto_epsilon(const PointMatrix& centers);

// Lower median of |Q_i - Q_j| over pairs i < j with |y_i - y_j| < eps.
// Throws NoPairsInRange when no pair qualifies.
double auto_eta(const std::vector<LocalModel>& models, double eps, NormMode norm = NormMode::Spectral);

PointMatrix centers_of(const std::vector<LocalModel>& models);

}  // namespace mmc
