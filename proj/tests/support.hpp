#pragma once

// Reference implementations used as test oracles. They are deliberately
// naive and share no code with the library beyond plain Eigen containers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Left-to-right sum, the same accumulation order the library uses, so that
// boundary cases of closed-ball membership compare exactly.
inline double dist2(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double d = a(k) - b(k);
    s += d * d;
  }
  return s;
}

// Cyclic Jacobi eigensolver. Returns eigenvalues descending with matching
// eigenvector columns.
inline std::pair<Vector, Matrix> jacobi_eigen(Matrix a, int sweeps = 100) {
  const Eigen::Index n = a.rows();
  Matrix v = Matrix::Identity(n, n);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return a(x, x) > a(y, y); });
  Vector values(n);
  Matrix vectors(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return {values, vectors};
}

inline std::vector<std::size_t> radius_scan(const Matrix& pts, const Vector& x, double r) {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    if (std::sqrt(dist2(pts.row(i).transpose(), x)) <= r) out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

inline std::size_t nearest_scan(const Matrix& pts, const std::vector<std::size_t>& candidates, const Vector& x) {
  std::size_t best = candidates.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c : candidates) {
    const double d = dist2(pts.row(static_cast<Eigen::Index>(c)).transpose(), x);
    if (d < best_d || (d == best_d && c < best)) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

// Component id per node, numbered by smallest member, via breadth-first search.
inline std::vector<std::size_t> bfs_components(const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = adj.size();
  const std::size_t unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> id(n, unset);
  std::size_t next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (id[s] != unset) continue;
    std::queue<std::size_t> q;
    q.push(s);
    id[s] = next;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t w : adj[u]) {
        if (id[w] == unset) {
          id[w] = next;
          q.push(w);
        }
      }
    }
    ++next;
  }
  return id;
}

// Largest possible number of correctly matched points over partial
// injective maps predicted id -> truth label, by exhaustive search.
inline double misclustering_bruteforce(const std::vector<int>& pred, const std::vector<int>& truth, int k) {
  int kp = 0;
  for (int p : pred) kp = std::max(kp, p);
  std::vector<std::vector<int>> overlap(static_cast<std::size_t>(kp), std::vector<int>(static_cast<std::size_t>(k), 0));
  for (std::size_t i = 0; i < pred.size(); ++i) ++overlap[static_cast<std::size_t>(pred[i] - 1)][static_cast<std::size_t>(truth[i] - 1)];
  std::vector<char> used(static_cast<std::size_t>(k), 0);
  std::function<int(int)> best = [&](int p) -> int {
    if (p == kp) return 0;
    int result = best(p + 1);  // p left unmatched
    for (int t = 0; t < k; ++t) {
      if (used[static_cast<std::size_t>(t)]) continue;
      used[static_cast<std::size_t>(t)] = 1;
      result = std::max(result, overlap[static_cast<std::size_t>(p)][static_cast<std::size_t>(t)] + best(p + 1));
      used[static_cast<std::size_t>(t)] = 0;
    }
    return result;
  };
  return 1.0 - static_cast<double>(best(0)) / static_cast<double>(pred.size());
}

// Minimum-inertia partition of the rows into exactly k nonempty groups, by
// enumerating restricted growth strings. Returns group ids 0..k-1.
inline std::vector<int> exhaustive_kmeans(const Matrix& rows, int k, double* inertia_out = nullptr) {
  const auto n = static_cast<std::size_t>(rows.rows());
  std::vector<int> current(n, 0), best;
  double best_inertia = std::numeric_limits<double>::infinity();
  const auto evaluate = [&]() {
    double total = 0.0;
    for (int g = 0; g < k; ++g) {
      Vector mean = Vector::Zero(rows.cols());
      int count = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (current[i] == g) {
          mean += rows.row(static_cast<Eigen::Index>(i)).transpose();
          ++count;
        }
      mean /= count;
      for (std::size_t i = 0; i < n; ++i)
        if (current[i] == g) total += dist2(rows.row(static_cast<Eigen::Index>(i)).transpose(), mean);
    }
    if (total < best_inertia) {
      best_inertia = total;
      best = current;
    }
  };
  std::function<void(std::size_t, int)> recurse = [&](std::size_t i, int used) {
    if (n - i < static_cast<std::size_t>(k - used)) return;
    if (i == n) {
      if (used == k) evaluate();
      return;
    }
    for (int g = 0; g <= std::min(used, k - 1); ++g) {
      current[i] = g;
      recurse(i + 1, std::max(used, g + 1));
    }
  };
  recurse(0, 0);
  if (inertia_out) *inertia_out = best_inertia;
  return best;
}

// NJW by explicit normalization, Jacobi eigenvectors and exhaustive k-means
// on the normalized rows.
inline std::vector<int> njw_dense(const Matrix& w, int k) {
  const Eigen::Index n = w.rows();
  const Vector deg = w.rowwise().sum();
  Matrix z(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) z(i, j) = w(i, j) / std::sqrt(deg(i) * deg(j));
  const auto [values, vectors] = jacobi_eigen(z);
  Matrix x = vectors.leftCols(k);
  for (Eigen::Index i = 0; i < n; ++i) x.row(i) /= x.row(i).norm();
  return exhaustive_kmeans(x, k);
}

// Whether two labelings agree up to a bijection of ids.
template <typename A, typename B>
bool same_partition(const std::vector<A>& a, const std::vector<B>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  return true;
}

// Orthonormal basis (columns) of a random d-dimensional subspace of R^D.
inline Matrix random_basis(std::mt19937_64& gen, Eigen::Index dim, Eigen::Index d) {
  std::normal_distribution<double> normal;
  Matrix g(dim, d);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = normal(gen);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(dim, d);
}

inline Matrix random_symmetric(std::mt19937_64& gen, Eigen::Index dim, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(gen);
  return m;
}

inline Matrix random_rotation(std::mt19937_64& gen, Eigen::Index dim) { return random_basis(gen, dim, dim); }

}  // namespace oracle
