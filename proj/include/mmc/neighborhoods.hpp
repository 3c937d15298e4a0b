#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mmc/linalg.hpp"
#include "mmc/random.hpp"

namespace mmc {

// Row-major so each point is a contiguous run of D doubles.
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct PointCloud {
  PointMatrix coords;                     // n x D
  std::optional<std::vector<int>> labels;  // ground truth in [1..K]
  std::optional<std::uint64_t> seed;       // generator seed, when known

  std::size_t size() const noexcept { return static_cast<std::size_t>(coords.rows()); }
  Eigen::Index dim() const noexcept { return coords.cols(); }
  const double* point(std::size_t i) const { return coords.data() + i * static_cast<std::size_t>(coords.cols()); }
  Vector point_vector(std::size_t i) const { return coords.row(static_cast<Eigen::Index>(i)).transpose(); }

  // Throws InvalidInput on an empty cloud, non-finite coordinates, a label
  // vector of the wrong length or labels outside [1..max].
  void validate() const;
};

// Exact radius and nearest-neighbor queries over a fixed point set, backed by
// a k-d tree. The index keeps its own copy of the coordinates.
class NeighborhoodIndex {
 public:
  explicit NeighborhoodIndex(const PointMatrix& points, std::size_t leaf_size = 12);

  std::size_t size() const noexcept { return static_cast<std::size_t>(points_.rows()); }
  Eigen::Index dim() const noexcept { return points_.cols(); }
  const double* point(std::size_t i) const { return points_.data() + i * static_cast<std::size_t>(points_.cols()); }

  // { j : |x - x_j| <= r }, ascending indices.
  std::vector<std::size_t> radius_query(const double* x, double r) const;
  std::vector<std::size_t> radius_query(const Vector& x, double r) const { return radius_query(x.data(), r); }

  // Index of the closest point; equal distances resolve to the lowest index.
  std::size_t nearest(const double* x) const;

  // The k closest points ordered by (distance, index). Returns fewer when
  // the index holds fewer than k points.
  std::vector<std::size_t> knn(const double* x, std::size_t k) const;

 private:
  struct Node {
    std::size_t begin = 0;  // range into order_
    std::size_t end = 0;
    std::size_t left = 0;   // child node ids, 0 for leaves
    std::size_t right = 0;
    std::vector<double> lo;  // bounding box
    std::vector<double> hi;
  };

  std::size_t build(std::size_t begin, std::size_t end);
  double box_distance2(const Node& node, const double* x) const;

  PointMatrix points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
  std::size_t leaf_size_;
};

NeighborhoodIndex build_index(const PointCloud& cloud);

std::vector<std::size_t> radius_query(const NeighborhoodIndex& index, const Vector& x, double r);

// Greedy r-packing. The first center is drawn uniformly from all points; each
// subsequent center is drawn uniformly among points not yet within r of any
// chosen center. Returns point indices in selection order.
std::vector<std::size_t> subsample_centers(const NeighborhoodIndex& index, double r, Rng& rng);

// Undirected simple graph; adjacency lists are sorted and free of self-loops.
class Graph {
 public:
  explicit Graph(std::size_t nodes = 0) : adjacency_(nodes) {}
  // Sorts and deduplicates each list, drops self-loops and adds any missing
  // reverse edges.
  explicit Graph(std::vector<std::vector<std::size_t>> adjacency);

  void add_edge(std::size_t i, std::size_t j);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const;
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return adjacency_[i]; }
  bool has_edge(std::size_t i, std::size_t j) const;

  // Subgraph induced by `keep` (ascending node ids); node k of the result is
  // keep[k].
  Graph induced(const std::vector<std::size_t>& keep) const;

 private:
  std::vector<std::vector<std::size_t>> adjacency_;
};

// Component id per node, 0-based, numbered in order of each component's
// smallest node.
std::vector<std::size_t> connected_components(const Graph& g);

// Label of the nearest survivor for every removed point (ties -> lowest
// survivor index). Throws NoSurvivors when `survivors` is empty.
std::vector<int> assign_to_closest_survivor(const PointCloud& cloud, const std::vector<std::size_t>& removed,
                                            const std::vector<std::size_t>& survivors,
                                            const std::vector<int>& survivor_labels);

}  // namespace mmc
