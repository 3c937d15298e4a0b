#include "mmc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mmc/error.hpp"

namespace mmc {

namespace {

void require_finite(const SymmetricMatrix& m, const char* what) {
  if (!m.all_finite()) throw Error(ErrorKind::InvalidInput, std::string(what) + ": non-finite entries");
}

void require_same_dim(const SymmetricMatrix& a, const SymmetricMatrix& b, const char* what) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::InvalidInput, std::string(what) + ": dimension mismatch");
}

void orient(Matrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double v = vectors(r, c);
      if (std::abs(v) > 1e-12) {
        if (v < 0) vectors.col(c) *= -1.0;
        break;
      }
    }
  }
}

// Inverse square root of a positive definite matrix via its eigenvectors.
Matrix inverse_sqrt(const SymmetricMatrix& c) {
  const EigenDecomposition e = eigh(c);
  const double top = std::max(std::abs(e.eigenvalues(0)), std::numeric_limits<double>::min());
  const double floor = top * std::numeric_limits<double>::epsilon() * static_cast<double>(c.dim());
  if (!(e.eigenvalues(e.eigenvalues.size() - 1) > floor)) {
    throw Error(ErrorKind::SingularCovariance, "covariance is not positive definite");
  }
  const Vector inv_sqrt = e.eigenvalues.array().rsqrt();
  return e.eigenvectors * inv_sqrt.asDiagonal() * e.eigenvectors.transpose();
}

double log_det_pd(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularCovariance, "covariance is not positive definite");
  }
  const Matrix& l = llt.matrixLLT();
  double s = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    if (!(l(i, i) > 0.0)) throw Error(ErrorKind::SingularCovariance, "covariance is singular");
    s += std::log(l(i, i));
  }
  return 2.0 * s;
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::InvalidInput, "symmetric matrix must be square and nonempty");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymmetricMatrix SymmetricMatrix::zero(Eigen::Index dim) { return SymmetricMatrix(Matrix::Zero(dim, dim)); }

SymmetricMatrix SymmetricMatrix::identity(Eigen::Index dim) {
  return SymmetricMatrix(Matrix::Identity(dim, dim));
}

SymmetricMatrix SymmetricMatrix::line_projection(const Vector& direction) {
  const double n2 = direction.squaredNorm();
  if (!(n2 > 0.0)) throw Error(ErrorKind::InvalidInput, "line_projection: zero direction");
  return SymmetricMatrix(direction * direction.transpose() / n2);
}

SymmetricMatrix SymmetricMatrix::operator+(const SymmetricMatrix& other) const {
  require_same_dim(*this, other, "operator+");
  SymmetricMatrix out;
  out.m_ = m_ + other.m_;
  return out;
}

SymmetricMatrix SymmetricMatrix::operator-(const SymmetricMatrix& other) const {
  require_same_dim(*this, other, "operator-");
  SymmetricMatrix out;
  out.m_ = m_ - other.m_;
  return out;
}

SymmetricMatrix SymmetricMatrix::operator*(double s) const {
  SymmetricMatrix out;
  out.m_ = m_ * s;
  return out;
}

EigenDecomposition eigh(const SymmetricMatrix& m) {
  require_finite(m, "eigh");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::InvalidInput, "eigh: solver failed");
  const Eigen::Index n = m.dim();
  EigenDecomposition e;
  e.eigenvalues.resize(n);
  e.eigenvectors.resize(n, n);
  // Eigen returns ascending order.
  for (Eigen::Index k = 0; k < n; ++k) {
    e.eigenvalues(k) = solver.eigenvalues()(n - 1 - k);
    e.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  orient(e.eigenvectors);
  return e;
}

Vector eigenvalues(const SymmetricMatrix& m) {
  require_finite(m, "eigenvalues");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::InvalidInput, "eigenvalues: solver failed");
  return solver.eigenvalues().reverse();
}

double spectral_norm(const SymmetricMatrix& m) {
  const Vector ev = eigenvalues(m);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double frobenius_norm(const SymmetricMatrix& m) {
  require_finite(m, "frobenius_norm");
  return m.matrix().norm();
}

double matrix_norm(const SymmetricMatrix& m, NormMode mode) {
  return mode == NormMode::Spectral ? spectral_norm(m) : frobenius_norm(m);
}

double difference_norm(const SymmetricMatrix& a, const SymmetricMatrix& b, NormMode mode) {
  return matrix_norm(a - b, mode);
}

SymmetricMatrix projection_onto_top_d(const EigenDecomposition& e, Eigen::Index d) {
  const Eigen::Index n = e.eigenvalues.size();
  if (d < 1 || d > n) throw Error(ErrorKind::InvalidInput, "projection_onto_top_d: d out of range");
  const auto basis = e.eigenvectors.leftCols(d);
  return SymmetricMatrix(basis * basis.transpose());
}

bool has_degenerate_gap(const EigenDecomposition& e, Eigen::Index d) {
  if (d < 1 || d >= e.eigenvalues.size()) return false;
  return std::abs(e.eigenvalues(d - 1) - e.eigenvalues(d)) <= 1e-12;
}

bool is_projection(const SymmetricMatrix& p, double tol) {
  if (!p.all_finite()) return false;
  const Matrix& m = p.matrix();
  const Matrix residual = m * m - m;
  return spectral_norm(SymmetricMatrix(residual)) <= tol;
}

Eigen::Index projection_rank(const SymmetricMatrix& p) {
  return static_cast<Eigen::Index>(std::llround(p.trace()));
}

Matrix projection_basis(const SymmetricMatrix& p) {
  const Eigen::Index rank = projection_rank(p);
  const EigenDecomposition e = eigh(p);
  return e.eigenvectors.leftCols(rank);
}

std::vector<double> principal_angles(const SymmetricMatrix& p, const SymmetricMatrix& q) {
  require_same_dim(p, q, "principal_angles");
  if (!is_projection(p) || !is_projection(q)) {
    throw Error(ErrorKind::InvalidInput, "principal_angles: input is not an orthogonal projection");
  }
  if (projection_rank(p) < 1 || projection_rank(q) < 1) {
    throw Error(ErrorKind::InvalidInput, "principal_angles: zero projection");
  }
  // The smaller subspace is measured against the larger one.
  const bool p_small = projection_rank(p) <= projection_rank(q);
  const SymmetricMatrix& small = p_small ? p : q;
  const SymmetricMatrix& large = p_small ? q : p;
  const Matrix s = projection_basis(small);
  const Matrix l = projection_basis(large);
  const Eigen::Index count = s.cols();

  Eigen::JacobiSVD<Matrix> cos_svd(l.transpose() * s);
  const Vector cosines = cos_svd.singularValues();  // descending -> angles ascending
  const Matrix residual = s - l * (l.transpose() * s);
  Eigen::JacobiSVD<Matrix> sin_svd(residual);
  Vector sines = sin_svd.singularValues();  // descending -> reverse for ascending angles
  sines.conservativeResize(count);
  std::vector<double> sin_ascending(sines.data(), sines.data() + count);
  std::sort(sin_ascending.begin(), sin_ascending.end());

  std::vector<double> angles(static_cast<std::size_t>(count));
  for (Eigen::Index k = 0; k < count; ++k) {
    const double c = std::clamp(cosines(k), -1.0, 1.0);
    const double sn = std::clamp(sin_ascending[static_cast<std::size_t>(k)], -1.0, 1.0);
    angles[static_cast<std::size_t>(k)] = (c * c >= 0.5) ? std::asin(sn) : std::acos(c);
  }
  std::sort(angles.begin(), angles.end(), std::greater<>());
  return angles;
}

SymmetricMatrix regularize(const SymmetricMatrix& c, double r, double lambda) {
  return c + SymmetricMatrix::identity(c.dim()) * (lambda * r * r);
}

double hellinger_distance(const SymmetricMatrix& ci, const SymmetricMatrix& cj) {
  require_same_dim(ci, cj, "hellinger_distance");
  require_finite(ci, "hellinger_distance");
  require_finite(cj, "hellinger_distance");
  const double ld_i = log_det_pd(ci.matrix());
  const double ld_j = log_det_pd(cj.matrix());
  const double ld_sum = log_det_pd(ci.matrix() + cj.matrix());
  const double dim = static_cast<double>(ci.dim());
  const double log_ratio = 0.5 * dim * std::log(2.0) + 0.25 * (ld_i + ld_j) - 0.5 * ld_sum;
  const double radicand = 1.0 - std::exp(log_ratio);
  return std::sqrt(std::max(radicand, 0.0));
}

double mahalanobis_avg(const SymmetricMatrix& ci, const SymmetricMatrix& cj, const Vector& xi,
                       const Vector& xj) {
  require_same_dim(ci, cj, "mahalanobis_avg");
  if (xi.size() != ci.dim() || xj.size() != ci.dim()) {
    throw Error(ErrorKind::InvalidInput, "mahalanobis_avg: point dimension mismatch");
  }
  const Vector diff = xi - xj;
  return (inverse_sqrt(ci) * diff).norm() + (inverse_sqrt(cj) * (-diff)).norm();
}

}  // namespace mmc
