#include "mmc/neighborhoods.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <utility>

#include "mmc/error.hpp"

namespace mmc {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::size_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
};

}  // namespace

void PointCloud::validate() const {
  if (coords.rows() < 1 || coords.cols() < 1) throw Error(ErrorKind::InvalidInput, "point cloud is empty");
  if (!coords.allFinite()) throw Error(ErrorKind::InvalidInput, "point cloud has non-finite coordinates");
  if (labels) {
    if (labels->size() != size()) throw Error(ErrorKind::InvalidInput, "label count does not match point count");
    for (int l : *labels) {
      if (l < 1) throw Error(ErrorKind::InvalidInput, "labels must be in [1..K]");
    }
  }
}

NeighborhoodIndex::NeighborhoodIndex(const PointMatrix& points, std::size_t leaf_size)
    : points_(points), order_(static_cast<std::size_t>(points.rows())), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(2 * order_.size() / leaf_size_ + 2);
  if (!order_.empty()) build(0, order_.size());
}

std::size_t NeighborhoodIndex::build(std::size_t begin, std::size_t end) {
  const auto dim = static_cast<std::size_t>(points_.cols());
  const std::size_t id = nodes_.size();
  nodes_.emplace_back();
  Node node;
  node.begin = begin;
  node.end = end;
  node.lo.assign(dim, std::numeric_limits<double>::infinity());
  node.hi.assign(dim, -std::numeric_limits<double>::infinity());
  for (std::size_t k = begin; k < end; ++k) {
    const double* p = point(order_[k]);
    for (std::size_t d = 0; d < dim; ++d) {
      node.lo[d] = std::min(node.lo[d], p[d]);
      node.hi[d] = std::max(node.hi[d], p[d]);
    }
  }
  std::size_t split_dim = 0;
  double spread = -1.0;
  for (std::size_t d = 0; d < dim; ++d) {
    if (node.hi[d] - node.lo[d] > spread) {
      spread = node.hi[d] - node.lo[d];
      split_dim = d;
    }
  }
  if (end - begin > leaf_size_ && spread > 0.0) {
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin), order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                       const double pa = point(a)[split_dim];
                       const double pb = point(b)[split_dim];
                       return pa < pb || (pa == pb && a < b);
                     });
    node.left = build(begin, mid);
    node.right = build(mid, end);
  }
  nodes_[id] = std::move(node);
  return id;
}

double NeighborhoodIndex::box_distance2(const Node& node, const double* x) const {
  double s = 0.0;
  for (std::size_t d = 0; d < node.lo.size(); ++d) {
    double gap = 0.0;
    if (x[d] < node.lo[d]) {
      gap = node.lo[d] - x[d];
    } else if (x[d] > node.hi[d]) {
      gap = x[d] - node.hi[d];
    }
    s += gap * gap;
  }
  return s;
}

std::vector<std::size_t> NeighborhoodIndex::radius_query(const double* x, double r) const {
  std::vector<std::size_t> out;
  if (nodes_.empty()) return out;
  // Prune with a slightly inflated radius; membership is decided exactly below.
  const double prune2 = r * r * (1.0 + 1e-12) + std::numeric_limits<double>::min();
  const auto dim = points_.cols();
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (box_distance2(node, x) > prune2) continue;
    if (node.left == 0) {
      for (std::size_t k = node.begin; k < node.end; ++k) {
        const std::size_t j = order_[k];
        if (std::sqrt(squared_distance(x, point(j), dim)) <= r) out.push_back(j);
      }
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t NeighborhoodIndex::nearest(const double* x) const {
  const auto found = knn(x, 1);
  if (found.empty()) throw Error(ErrorKind::InvalidInput, "nearest: empty index");
  return found.front();
}

std::vector<std::size_t> NeighborhoodIndex::knn(const double* x, std::size_t k) const {
  using Entry = std::pair<double, std::size_t>;  // (distance^2, index); max-heap keeps the worst on top
  std::priority_queue<Entry> best;
  if (nodes_.empty() || k == 0) return {};
  const auto dim = points_.cols();
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    // Boxes at exactly the current worst distance are still visited so that
    // ties resolve to the lowest index.
    if (best.size() == k && box_distance2(node, x) > best.top().first) continue;
    if (node.left == 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const std::size_t j = order_[i];
        const Entry e{squared_distance(x, point(j), dim), j};
        if (best.size() < k) {
          best.push(e);
        } else if (e < best.top()) {
          best.pop();
          best.push(e);
        }
      }
    } else {
      const Node& l = nodes_[node.left];
      const Node& r = nodes_[node.right];
      // Visit the nearer child first.
      if (box_distance2(l, x) <= box_distance2(r, x)) {
        stack.push_back(node.right);
        stack.push_back(node.left);
      } else {
        stack.push_back(node.left);
        stack.push_back(node.right);
      }
    }
  }
  std::vector<std::size_t> out(best.size());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = best.top().second;
    best.pop();
  }
  return out;
}

NeighborhoodIndex build_index(const PointCloud& cloud) { return NeighborhoodIndex(cloud.coords); }

std::vector<std::size_t> radius_query(const NeighborhoodIndex& index, const Vector& x, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidInput, "radius_query: r must be positive");
  if (x.size() != index.dim()) throw Error(ErrorKind::InvalidInput, "radius_query: dimension mismatch");
  return index.radius_query(x, r);
}

std::vector<std::size_t> subsample_centers(const NeighborhoodIndex& index, double r, Rng& rng) {
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidInput, "subsample_centers: r must be positive");
  const std::size_t n = index.size();
  std::vector<std::size_t> uncovered(n);
  std::vector<std::size_t> slot(n);
  std::iota(uncovered.begin(), uncovered.end(), 0);
  std::iota(slot.begin(), slot.end(), 0);
  constexpr std::size_t kCovered = std::numeric_limits<std::size_t>::max();

  std::vector<std::size_t> centers;
  while (!uncovered.empty()) {
    const std::size_t center = uncovered[rng.index(uncovered.size())];
    centers.push_back(center);
    for (std::size_t j : index.radius_query(index.point(center), r)) {
      if (slot[j] == kCovered) continue;
      const std::size_t s = slot[j];
      const std::size_t last = uncovered.back();
      uncovered[s] = last;
      slot[last] = s;
      uncovered.pop_back();
      slot[j] = kCovered;
    }
  }
  return centers;
}

Graph::Graph(std::vector<std::vector<std::size_t>> adjacency) : adjacency_(std::move(adjacency)) {
  const std::size_t n = adjacency_.size();
  std::vector<std::vector<std::size_t>> reverse(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : adjacency_[i]) {
      if (j >= n) throw Error(ErrorKind::InvalidInput, "graph edge endpoint out of range");
      if (j != i) reverse[j].push_back(i);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& list = adjacency_[i];
    list.insert(list.end(), reverse[i].begin(), reverse[i].end());
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    list.erase(std::remove(list.begin(), list.end(), i), list.end());
  }
}

void Graph::add_edge(std::size_t i, std::size_t j) {
  if (i >= adjacency_.size() || j >= adjacency_.size()) {
    throw Error(ErrorKind::InvalidInput, "graph edge endpoint out of range");
  }
  if (i == j || has_edge(i, j)) return;
  adjacency_[i].insert(std::lower_bound(adjacency_[i].begin(), adjacency_[i].end(), j), j);
  adjacency_[j].insert(std::lower_bound(adjacency_[j].begin(), adjacency_[j].end(), i), i);
}

std::size_t Graph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& list : adjacency_) twice += list.size();
  return twice / 2;
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
  const auto& list = adjacency_[i];
  return std::binary_search(list.begin(), list.end(), j);
}

Graph Graph::induced(const std::vector<std::size_t>& keep) const {
  constexpr std::size_t kDropped = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> local(adjacency_.size(), kDropped);
  for (std::size_t k = 0; k < keep.size(); ++k) local[keep[k]] = k;
  Graph out(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    for (std::size_t j : adjacency_[keep[k]]) {
      if (local[j] != kDropped) out.adjacency_[k].push_back(local[j]);
    }
    std::sort(out.adjacency_[k].begin(), out.adjacency_[k].end());
  }
  return out;
}

std::vector<std::size_t> connected_components(const Graph& g) {
  const std::size_t n = g.node_count();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : g.neighbors(i)) {
      if (j > i) uf.unite(i, j);
    }
  }
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> root_id(n, kUnset);
  std::vector<std::size_t> ids(n);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = uf.find(i);
    if (root_id[root] == kUnset) root_id[root] = next++;
    ids[i] = root_id[root];
  }
  return ids;
}

std::vector<int> assign_to_closest_survivor(const PointCloud& cloud, const std::vector<std::size_t>& removed,
                                            const std::vector<std::size_t>& survivors,
                                            const std::vector<int>& survivor_labels) {
  if (survivors.empty()) throw Error(ErrorKind::NoSurvivors, "no survivors to assign removed points to");
  if (survivors.size() != survivor_labels.size()) {
    throw Error(ErrorKind::InvalidInput, "survivor label count mismatch");
  }
  // Sort survivors so that the index's lowest-position tie rule matches the
  // lowest original point index.
  std::vector<std::size_t> perm(survivors.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return survivors[a] < survivors[b]; });
  PointMatrix coords(static_cast<Eigen::Index>(survivors.size()), cloud.dim());
  std::vector<int> labels(survivors.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    coords.row(static_cast<Eigen::Index>(k)) = cloud.coords.row(static_cast<Eigen::Index>(survivors[perm[k]]));
    labels[k] = survivor_labels[perm[k]];
  }
  const NeighborhoodIndex index(coords);
  std::vector<int> out(removed.size());
  for (std::size_t k = 0; k < removed.size(); ++k) {
    out[k] = labels[index.nearest(cloud.point(removed[k]))];
  }
  return out;
}

}  // namespace mmc
