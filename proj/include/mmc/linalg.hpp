#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mmc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A dense D x D symmetric matrix. Construction symmetrizes the input by
// averaging it with its transpose, so entries (i,j) and (j,i) are always
// bit-identical. Used for local covariances and orthogonal projections.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(const Matrix& m);

  static SymmetricMatrix zero(Eigen::Index dim);
  static SymmetricMatrix identity(Eigen::Index dim);
  // v v^T / |v|^2 for a nonzero v.
  static SymmetricMatrix line_projection(const Vector& direction);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }
  double trace() const { return m_.trace(); }
  bool all_finite() const { return m_.allFinite(); }

  SymmetricMatrix operator+(const SymmetricMatrix& other) const;
  SymmetricMatrix operator-(const SymmetricMatrix& other) const;
  SymmetricMatrix operator*(double s) const;

 private:
  Matrix m_;
};

inline SymmetricMatrix operator*(double s, const SymmetricMatrix& m) { return m * s; }

struct EigenDecomposition {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // column k pairs with eigenvalues[k]
};

// Eigenvalues in descending order with orthonormal eigenvectors. Each
// eigenvector is oriented so that its first component exceeding 1e-12 in
// magnitude is positive, which makes every downstream result reproducible.
EigenDecomposition eigh(const SymmetricMatrix& m);

// Eigenvalues only, descending.
Vector eigenvalues(const SymmetricMatrix& m);

double spectral_norm(const SymmetricMatrix& m);
double frobenius_norm(const SymmetricMatrix& m);

enum class NormMode { Spectral, Frobenius };

double matrix_norm(const SymmetricMatrix& m, NormMode mode);
double difference_norm(const SymmetricMatrix& a, const SymmetricMatrix& b, NormMode mode);

// Orthogonal projection onto the span of the first d eigenvectors of `e`.
SymmetricMatrix projection_onto_top_d(const EigenDecomposition& e, Eigen::Index d);

// True when eigenvalues d-1 and d (0-based) coincide within 1e-12, i.e. the
// top-d subspace is not uniquely determined.
bool has_degenerate_gap(const EigenDecomposition& e, Eigen::Index d);

bool is_projection(const SymmetricMatrix& p, double tol = 1e-8);

// Rank of a projection, rounded from its trace.
Eigen::Index projection_rank(const SymmetricMatrix& p);

// Orthonormal basis (D x rank) of the range of a projection.
Matrix projection_basis(const SymmetricMatrix& p);

// Principal angles between the ranges of two projections, min(p, q) values
// in [0, pi/2], sorted descending. Small angles are taken from the sines and
// large ones from the cosines so both ends keep full precision.
std::vector<double> principal_angles(const SymmetricMatrix& p, const SymmetricMatrix& q);

// C + lambda * r^2 * I.
SymmetricMatrix regularize(const SymmetricMatrix& c, double r, double lambda = 1e-8);

// Hellinger distance between N(0, Ci) and N(0, Cj). Both inputs must be
// positive definite; throws SingularCovariance otherwise.
double hellinger_distance(const SymmetricMatrix& ci, const SymmetricMatrix& cj);

// |Ci^{-1/2}(xi - xj)| + |Cj^{-1/2}(xj - xi)| with symmetric square roots.
double mahalanobis_avg(const SymmetricMatrix& ci, const SymmetricMatrix& cj, const Vector& xi,
                       const Vector& xj);

// Plain left-to-right accumulation so results are bit-stable across call
// sites and match straightforward reference loops.
inline double squared_distance(const double* a, const double* b, Eigen::Index dim) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

}  // namespace mmc
