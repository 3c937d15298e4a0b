#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmc/affinity.hpp"
#include "mmc/linalg.hpp"
#include "mmc/neighborhoods.hpp"
#include "mmc/random.hpp"

namespace mmc {

struct Labeling {
  std::vector<int> assignments;  // 1-based cluster ids
  int k_found = 0;
  std::vector<std::size_t> removed;  // points dropped before reassignment (covariance components only)

  std::vector<std::size_t> cluster_sizes() const;
};

// Relabels arbitrary ids to 1..K in order of first appearance.
Labeling make_labeling(const std::vector<std::size_t>& ids);

struct KMeansOptions {
  int max_iter = 300;
  double tol = 1e-10;  // stop when no centroid moves farther than this
  int restarts = 10;   // the lowest-inertia restart is kept
};

struct KMeansResult {
  Matrix centroids;             // K x dim
  std::vector<int> assignments; // 0-based centroid per row
  double inertia = 0.0;
  std::vector<double> inertia_history;  // per Lloyd iteration, winning restart
};

// k-means++ seeding followed by Lloyd iterations. A centroid that loses all
// its rows is moved to the row farthest from its current centroid.
KMeansResult kmeans_pp(const Matrix& rows, int k, Rng& rng, const KMeansOptions& options = {});

// Row-normalized top-k eigenvectors of D^{-1/2} W D^{-1/2}. Throws
// IsolatedNode when a row of W sums to zero.
Matrix njw_embedding(const AffinityMatrix& w, int k);

// Spectral graph partitioning: embedding above, then k-means++.
Labeling njw_partition(const AffinityMatrix& w, int k, Rng& rng, const KMeansOptions& options = {});

// Connected components after comparing local covariances; points whose
// r-ball holds a point with a very different covariance are removed and
// later joined to the nearest survivor.
Labeling algorithm2_cov_components(const PointCloud& cloud, const ScaleParams& params,
                                   NormMode norm = NormMode::Spectral, int threads = 1);

// Connected components after comparing thresholded local projections. May
// return more groups than there are clusters.
Labeling algorithm3_proj_components(const PointCloud& cloud, const ScaleParams& params,
                                    NormMode norm = NormMode::Spectral, int threads = 1);

enum class AffinityKind { Gauss, Wang, Gong, DistanceOnly };

struct LocalPcaSpectralOptions {
  double r = 0.0;
  int k = 2;
  Eigen::Index d = 1;
  std::optional<double> eps;  // auto-selected when empty
  std::optional<double> eta;  // auto-selected when empty
  NormMode norm = NormMode::Spectral;
  AffinityKind affinity = AffinityKind::Gauss;
  std::size_t ell = 10;  // neighbor count for the Wang and Gong kernels
  double alpha = 1.0;    // Wang exponent
  KMeansOptions kmeans;
  int threads = 1;
};

struct LocalPcaSpectralResult {
  Labeling labeling;
  std::vector<std::size_t> centers;  // point indices, selection order
  std::vector<int> center_labels;
  double eps = 0.0;
  double eta = 0.0;
};

// Spectral clustering based on local PCA over an r-packing of the data.
LocalPcaSpectralResult algorithm4_local_pca_spectral(const PointCloud& cloud, const LocalPcaSpectralOptions& options,
                                                     Rng& rng);

enum class Method { Alg2, Alg3, Alg4, NjwBaseline };

std::string to_string(Method m);
Method parse_method(const std::string& name);
std::string to_string(AffinityKind a);
AffinityKind parse_affinity(const std::string& name);
std::string to_string(NormMode n);
NormMode parse_norm(const std::string& name);

// Everything needed to run one method on one cloud.
struct MethodConfig {
  Method method = Method::Alg4;
  ScaleParams params;  // r always; eps/eta used when the *_set flags say so
  bool eps_set = false;
  bool eta_set = false;
  int k = 2;
  Eigen::Index d = 1;
  AffinityKind affinity = AffinityKind::Gauss;
  NormMode norm = NormMode::Spectral;
  std::size_t ell = 10;
  double alpha = 1.0;

  // Throws InvalidInput on incompatible settings.
  void validate() const;
};

struct RunResult {
  Labeling labeling;
  std::optional<double> eps_used;
  std::optional<double> eta_used;
  std::size_t center_count = 0;
};

RunResult run_method(const PointCloud& cloud, const MethodConfig& config, std::uint64_t seed, int threads = 1);

}  // namespace mmc
