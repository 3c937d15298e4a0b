#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "mmc/cluster.hpp"
#include "mmc/error.hpp"
#include "mmc/local_pca.hpp"
#include "mmc/parallel.hpp"

namespace mmc {

std::vector<std::size_t> Labeling::cluster_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(std::max(k_found, 0)), 0);
  for (int a : assignments) ++sizes[static_cast<std::size_t>(a - 1)];
  return sizes;
}

Labeling make_labeling(const std::vector<std::size_t>& ids) {
  Labeling out;
  out.assignments.resize(ids.size());
  std::unordered_map<std::size_t, int> remap;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(ids[i], static_cast<int>(remap.size()) + 1);
    out.assignments[i] = it->second;
  }
  out.k_found = static_cast<int>(remap.size());
  return out;
}

Matrix njw_embedding(const AffinityMatrix& w, int k) {
  const auto n = static_cast<Eigen::Index>(w.size());
  if (k < 1 || k > n) throw Error(ErrorKind::InvalidInput, "njw: k out of range");
  const Vector degree = w.matrix().rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(degree(i) > 0.0)) throw Error(ErrorKind::IsolatedNode, "node " + std::to_string(i) + " has zero degree");
  }
  const Vector inv_sqrt = degree.array().rsqrt();
  const Matrix z = inv_sqrt.asDiagonal() * w.matrix() * inv_sqrt.asDiagonal();
  const EigenDecomposition e = eigh(SymmetricMatrix(z));
  Matrix rows = e.eigenvectors.leftCols(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = rows.row(i).norm();
    if (norm > 0.0) rows.row(i) /= norm;
  }
  return rows;
}

Labeling njw_partition(const AffinityMatrix& w, int k, Rng& rng, const KMeansOptions& options) {
  const Matrix rows = njw_embedding(w, k);
  const KMeansResult km = kmeans_pp(rows, k, rng, options);
  std::vector<std::size_t> ids(km.assignments.begin(), km.assignments.end());
  return make_labeling(ids);
}

namespace {

void require_scale(const ScaleParams& p) {
  if (!(p.r > 0.0) || !(p.eps > 0.0) || !(p.eta > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "r, eps and eta must be positive");
  }
}

Labeling from_components(const Graph& g) { return make_labeling(connected_components(g)); }

}  // namespace

Labeling algorithm2_cov_components(const PointCloud& cloud, const ScaleParams& params, NormMode norm, int threads) {
  cloud.validate();
  require_scale(params);
  const NeighborhoodIndex index = build_index(cloud);
  const auto models = batch_local_models(cloud, index, cloud.coords, params.r, LocalPcaMode::fixed_dim(1), threads);
  const Graph graph = cov_indicator_affinity(models, params.eps, params.eta, params.r, norm, threads);

  const std::size_t n = cloud.size();
  const double limit = params.eta * params.r * params.r;
  std::vector<char> drop(n, 0);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j : index.radius_query(cloud.point(i), params.r)) {
      if (j != i && difference_norm(models[j].covariance, models[i].covariance, norm) > limit) {
        drop[i] = 1;
        return;
      }
    }
  });

  std::vector<std::size_t> survivors;
  std::vector<std::size_t> removed;
  for (std::size_t i = 0; i < n; ++i) (drop[i] ? removed : survivors).push_back(i);
  if (survivors.empty()) throw Error(ErrorKind::AllPointsRemoved, "every point was removed near an intersection");

  const Labeling kept = from_components(graph.induced(survivors));
  std::vector<std::size_t> ids(n);
  for (std::size_t k = 0; k < survivors.size(); ++k) ids[survivors[k]] = static_cast<std::size_t>(kept.assignments[k]);
  if (!removed.empty()) {
    const auto joined = assign_to_closest_survivor(cloud, removed, survivors, kept.assignments);
    for (std::size_t k = 0; k < removed.size(); ++k) ids[removed[k]] = static_cast<std::size_t>(joined[k]);
  }
  Labeling out = make_labeling(ids);
  out.removed = std::move(removed);
  return out;
}

Labeling algorithm3_proj_components(const PointCloud& cloud, const ScaleParams& params, NormMode norm, int threads) {
  cloud.validate();
  require_scale(params);
  if (!(params.eta < 1.0)) throw Error(ErrorKind::InvalidInput, "projection comparison needs eta < 1");
  const NeighborhoodIndex index = build_index(cloud);
  const auto models =
      batch_local_models(cloud, index, cloud.coords, params.r, LocalPcaMode::thresholded(params.eta), threads);
  return from_components(proj_indicator_affinity(models, params.eps, params.eta, norm, threads));
}

LocalPcaSpectralResult algorithm4_local_pca_spectral(const PointCloud& cloud, const LocalPcaSpectralOptions& options,
                                                     Rng& rng) {
  cloud.validate();
  if (options.k < 1) throw Error(ErrorKind::InvalidInput, "k must be at least 1");
  if (options.d < 1 || options.d > cloud.dim()) throw Error(ErrorKind::InvalidInput, "d out of range");
  if (!(options.r > 0.0)) throw Error(ErrorKind::InvalidInput, "r must be positive");

  const NeighborhoodIndex index = build_index(cloud);
  LocalPcaSpectralResult result;
  result.centers = subsample_centers(index, options.r, rng);
  const std::size_t n0 = result.centers.size();
  if (n0 < static_cast<std::size_t>(options.k)) {
    throw Error(ErrorKind::TooFewCenters,
                std::to_string(n0) + " centers for " + std::to_string(options.k) + " clusters");
  }

  PointMatrix centers(static_cast<Eigen::Index>(n0), cloud.dim());
  for (std::size_t i = 0; i < n0; ++i) {
    centers.row(static_cast<Eigen::Index>(i)) = cloud.coords.row(static_cast<Eigen::Index>(result.centers[i]));
  }
  const auto models =
      batch_local_models(cloud, index, centers, options.r, LocalPcaMode::fixed_dim(options.d), options.threads);

  if (n0 == 1) {
    result.center_labels = {1};
    result.labeling.assignments.assign(cloud.size(), 1);
    result.labeling.k_found = 1;
    return result;
  }

  result.eps = options.eps ? *options.eps : auto_epsilon(centers);
  AffinityMatrix w;
  switch (options.affinity) {
    case AffinityKind::Gauss:
      result.eta = options.eta ? *options.eta : auto_eta(models, result.eps, options.norm);
      w = gaussian_product_affinity(models, result.eps, result.eta, options.norm, options.threads);
      break;
    case AffinityKind::DistanceOnly:
      result.eta = std::numeric_limits<double>::infinity();
      w = gaussian_product_affinity(models, result.eps, result.eta, options.norm, options.threads);
      break;
    case AffinityKind::Wang:
      w = wang_affinity(models, std::min(options.ell, n0 - 1), options.alpha, options.threads);
      break;
    case AffinityKind::Gong:
      result.eta = options.eta ? *options.eta : auto_eta(models, result.eps, options.norm);
      w = gong_affinity(models, std::min(options.ell, n0 - 1), result.eta, options.norm, options.threads);
      break;
  }

  const Labeling center_labeling = njw_partition(w, options.k, rng, options.kmeans);
  result.center_labels = center_labeling.assignments;

  const NeighborhoodIndex center_index(centers);
  std::vector<std::size_t> ids(cloud.size());
  parallel_for(cloud.size(), options.threads, [&](std::size_t i) {
    ids[i] = static_cast<std::size_t>(result.center_labels[center_index.nearest(cloud.point(i))]);
  });
  result.labeling = make_labeling(ids);
  return result;
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Alg2: return "alg2";
    case Method::Alg3: return "alg3";
    case Method::Alg4: return "alg4";
    case Method::NjwBaseline: return "njw_baseline";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "alg2") return Method::Alg2;
  if (name == "alg3") return Method::Alg3;
  if (name == "alg4") return Method::Alg4;
  if (name == "njw_baseline") return Method::NjwBaseline;
  throw Error(ErrorKind::InvalidInput, "unknown method '" + name + "'");
}

std::string to_string(AffinityKind a) {
  switch (a) {
    case AffinityKind::Gauss: return "gauss";
    case AffinityKind::Wang: return "wang";
    case AffinityKind::Gong: return "gong";
    case AffinityKind::DistanceOnly: return "distance";
  }
  return "unknown";
}

AffinityKind parse_affinity(const std::string& name) {
  if (name == "gauss") return AffinityKind::Gauss;
  if (name == "wang") return AffinityKind::Wang;
  if (name == "gong") return AffinityKind::Gong;
  if (name == "distance") return AffinityKind::DistanceOnly;
  throw Error(ErrorKind::InvalidInput, "unknown affinity '" + name + "'");
}

std::string to_string(NormMode n) { return n == NormMode::Spectral ? "spectral" : "frobenius"; }

NormMode parse_norm(const std::string& name) {
  if (name == "spectral") return NormMode::Spectral;
  if (name == "frobenius") return NormMode::Frobenius;
  throw Error(ErrorKind::InvalidInput, "unknown norm '" + name + "'");
}

void MethodConfig::validate() const {
  if (!(params.r > 0.0)) throw Error(ErrorKind::InvalidInput, "r must be positive");
  switch (method) {
    case Method::Alg2:
    case Method::Alg3:
      if (!eps_set || !eta_set) throw Error(ErrorKind::InvalidInput, to_string(method) + " needs eps and eta");
      if (!(params.eps > 0.0) || !(params.eta > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "eps and eta must be positive");
      }
      if (method == Method::Alg3 && !(params.eta < 1.0)) throw Error(ErrorKind::InvalidInput, "alg3 needs eta < 1");
      break;
    case Method::Alg4:
    case Method::NjwBaseline:
      if (k < 1) throw Error(ErrorKind::InvalidInput, "k must be at least 1");
      if (d < 1) throw Error(ErrorKind::InvalidInput, "d must be at least 1");
      if (eps_set && !(params.eps > 0.0)) throw Error(ErrorKind::InvalidInput, "eps must be positive");
      if (eta_set && !(params.eta > 0.0)) throw Error(ErrorKind::InvalidInput, "eta must be positive");
      break;
  }
}

RunResult run_method(const PointCloud& cloud, const MethodConfig& config, std::uint64_t seed, int threads) {
  config.validate();
  RunResult out;
  switch (config.method) {
    case Method::Alg2:
      out.labeling = algorithm2_cov_components(cloud, config.params, config.norm, threads);
      out.eps_used = config.params.eps;
      out.eta_used = config.params.eta;
      break;
    case Method::Alg3:
      out.labeling = algorithm3_proj_components(cloud, config.params, config.norm, threads);
      out.eps_used = config.params.eps;
      out.eta_used = config.params.eta;
      break;
    case Method::Alg4:
    case Method::NjwBaseline: {
      LocalPcaSpectralOptions options;
      options.r = config.params.r;
      options.k = config.k;
      options.d = config.d;
      if (config.eps_set) options.eps = config.params.eps;
      if (config.eta_set) options.eta = config.params.eta;
      options.norm = config.norm;
      options.affinity = config.method == Method::NjwBaseline ? AffinityKind::DistanceOnly : config.affinity;
      options.ell = config.ell;
      options.alpha = config.alpha;
      options.threads = threads;
      Rng rng(seed);
      LocalPcaSpectralResult res = algorithm4_local_pca_spectral(cloud, options, rng);
      out.labeling = std::move(res.labeling);
      out.center_count = res.centers.size();
      if (res.centers.size() > 1) out.eps_used = res.eps;
      if (options.affinity == AffinityKind::Gauss || options.affinity == AffinityKind::Gong) out.eta_used = res.eta;
      break;
    }
  }
  return out;
}

}  // namespace mmc
