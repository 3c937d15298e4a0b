#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "mmc/error.hpp"
#include "mmc/local_pca.hpp"
#include "support.hpp"

using namespace mmc;
using std::numbers::pi;

namespace {

PointCloud from_matrix(const Matrix& m) {
  PointCloud c;
  c.coords = m;
  return c;
}

// n evenly spaced points on the segment a + t (b - a), t in [0, 1].
Matrix dense_segment(const Vector& a, const Vector& b, int n) {
  Matrix out(n, a.size());
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    out.row(i) = (a + t * (b - a)).transpose();
  }
  return out;
}

Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

SymmetricMatrix outer(const Vector& v) { return SymmetricMatrix(v * v.transpose()); }

// Uniform sample of the d-ball of radius r inside span(basis).
Matrix uniform_flat_ball(std::mt19937_64& gen, const Matrix& basis, double r, int n) {
  const Eigen::Index d = basis.cols();
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix out(n, basis.rows());
  for (int i = 0; i < n; ++i) {
    Vector g(d);
    for (Eigen::Index k = 0; k < d; ++k) g(k) = normal(gen);
    g *= r * std::pow(u(gen), 1.0 / static_cast<double>(d)) / g.norm();
    out.row(i) = (basis * g).transpose();
  }
  return out;
}

}  // namespace

TEST_CASE("local covariance small cases") {
  Matrix one(1, 2);
  one << 0.3, 0.4;
  const auto c1 = from_matrix(one);
  CHECK(frobenius_norm(local_covariance(c1, build_index(c1), c1.point_vector(0), 1.0)) == 0.0);

  Matrix two(2, 1);
  two << 0.0, 1.0;
  const auto c2 = from_matrix(two);
  const auto c = local_covariance(c2, build_index(c2), Vector::Constant(1, 0.5), 1.0);
  CHECK(c(0, 0) == doctest::Approx(0.25));

  try {
    local_covariance(c2, build_index(c2), Vector::Constant(1, 10.0), 1.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyNeighborhood);
  }
}

TEST_CASE("dense segment covariance in the interior and at an endpoint") {
  const double r = 0.05;
  for (double theta : {0.0, pi / 4, pi / 3}) {
    const Vector v = vec2(std::cos(theta), std::sin(theta));
    const auto cloud = from_matrix(dense_segment(-v, v, 100001));
    const auto index = build_index(cloud);
    const auto interior = local_covariance(cloud, index, 0.3 * v, r);
    CHECK(spectral_norm(interior - (r * r / 3.0) * outer(v)) <= 0.02 * r * r / 3.0);
    const auto endpoint = local_covariance(cloud, index, v, r);
    CHECK(spectral_norm(endpoint - (r * r / 12.0) * outer(v)) <= 0.02 * r * r / 12.0);
  }
}

TEST_CASE("estimate_projection examples") {
  const double r = 0.1;
  Matrix c = Matrix::Zero(2, 2);
  c(0, 0) = r * r / 3.0;
  const auto q = estimate_projection(SymmetricMatrix(c), 1);
  CHECK(frobenius_norm(q - outer(vec2(1, 0))) <= 1e-12);

  CHECK(frobenius_norm(estimate_projection(SymmetricMatrix::identity(3), 3) - SymmetricMatrix::identity(3)) <= 1e-12);

  const Vector v = vec2(std::cos(pi / 4), std::sin(pi / 4));
  const auto cloud = from_matrix(dense_segment(-v, v, 20001));
  const auto seg = estimate_projection(local_covariance(cloud, build_index(cloud), 0.2 * v, r), 1);
  Matrix expected(2, 2);
  expected << 0.5, 0.5, 0.5, 0.5;
  CHECK(frobenius_norm(seg - SymmetricMatrix(expected)) <= 1e-9);
}

TEST_CASE("thresholded dimension estimate") {
  Matrix m = Matrix::Zero(3, 3);
  m.diagonal() << 1.0, 0.5, 0.01;
  auto e = estimate_dim_thresholded(SymmetricMatrix(m), 0.09);
  CHECK(e.est_dim == 2);
  CHECK(e.projection.trace() == doctest::Approx(2));

  for (double eta : {0.01, 0.5, 0.99}) CHECK(estimate_dim_thresholded(SymmetricMatrix::identity(3), eta).est_dim == 3);

  // Exactly at the threshold the eigenvalue does not count.
  m.diagonal() << 1.0, 0.5, 0.0;
  CHECK(estimate_dim_thresholded(SymmetricMatrix(m), 0.25).est_dim == 1);

  try {
    estimate_dim_thresholded(SymmetricMatrix::zero(2), 0.5);
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::ZeroCovariance);
  }
  CHECK_THROWS_AS(estimate_dim_thresholded(SymmetricMatrix::identity(2), 0.0), Error);
  CHECK_THROWS_AS(estimate_dim_thresholded(SymmetricMatrix::identity(2), 1.0), Error);
}

TEST_CASE("dimension is inflated at a crossing") {
  const Matrix a = dense_segment(vec2(-1, 0), vec2(1, 0), 20001);
  const Matrix b = dense_segment(vec2(0, -1), vec2(0, 1), 20001);
  Matrix both(a.rows() + b.rows(), 2);
  both << a, b;
  const auto cloud = from_matrix(both);
  const auto c = local_covariance(cloud, build_index(cloud), vec2(0, 0), 0.05);
  CHECK(estimate_dim_thresholded(c, 0.04).est_dim == 2);
  const auto away = local_covariance(cloud, build_index(cloud), vec2(0.5, 0), 0.05);
  CHECK(estimate_dim_thresholded(away, 0.04).est_dim == 1);
}

TEST_CASE("uniform flat ball covariance is r^2/(d+2) times the tangent projection") {
  std::mt19937_64 gen(2718);
  const double r = 0.3;
  for (auto [d, dim] : {std::pair<int, int>{1, 2}, {2, 3}, {2, 5}, {3, 6}, {1, 4}}) {
    const Matrix basis = oracle::random_basis(gen, dim, d);
    const auto cloud = from_matrix(uniform_flat_ball(gen, basis, r, 100000));
    const auto c = local_covariance(cloud, build_index(cloud), Vector::Zero(dim), r);
    const SymmetricMatrix target(r * r / (d + 2.0) * basis * basis.transpose());
    CHECK(spectral_norm(c - target) <= 0.02 * r * r);
    CHECK(spectral_norm(c) <= r * r);
  }
}

TEST_CASE("covariance is translation and rotation equivariant") {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(-1, 1);
  Matrix pts(400, 3);
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    for (Eigen::Index k = 0; k < 3; ++k) pts(i, k) = u(gen);
  const auto cloud = from_matrix(pts);
  Vector x(3);
  x << 0.1, -0.2, 0.3;
  const double r = 0.7;
  const auto base = local_covariance(cloud, build_index(cloud), x, r);

  Vector shift(3);
  shift << 5.0, -3.0, 0.25;
  const auto moved = from_matrix(pts.rowwise() + shift.transpose());
  CHECK(frobenius_norm(local_covariance(moved, build_index(moved), x + shift, r) - base) <= 1e-12);

  const Matrix rot = oracle::random_rotation(gen, 3);
  const auto rotated = from_matrix(pts * rot.transpose());
  const auto c = local_covariance(rotated, build_index(rotated), rot * x, r);
  CHECK(frobenius_norm(c - SymmetricMatrix(rot * base.matrix() * rot.transpose())) <= 1e-9);
}

TEST_CASE("batch local models") {
  Matrix one(1, 2);
  one << 1.0, 2.0;
  const auto single = from_matrix(one);
  const auto models = batch_local_models(single, build_index(single), single.coords, 0.5, LocalPcaMode::fixed_dim(1));
  REQUIRE(models.size() == 1);
  CHECK(models[0].degenerate);
  CHECK(models[0].neighbor_count == 1);
  CHECK(frobenius_norm(models[0].covariance) == 0.0);

  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0, 1);
  Matrix pts(600, 3);
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    for (Eigen::Index k = 0; k < 3; ++k) pts(i, k) = u(gen);
  const auto cloud = from_matrix(pts);
  const auto index = build_index(cloud);
  const PointMatrix centers = pts.topRows(80);
  for (const LocalPcaMode mode : {LocalPcaMode::fixed_dim(2), LocalPcaMode::thresholded(0.3)}) {
    const auto seq = batch_local_models(cloud, index, centers, 0.2, mode, 1);
    const auto par = batch_local_models(cloud, index, centers, 0.2, mode, 4);
    REQUIRE(seq.size() == 80);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      REQUIRE(seq[i].covariance.matrix() == par[i].covariance.matrix());
      REQUIRE(seq[i].projection.matrix() == par[i].projection.matrix());
      REQUIRE(seq[i].est_dim == par[i].est_dim);
      const Vector c = centers.row(static_cast<Eigen::Index>(i)).transpose();
      const auto direct = local_covariance(cloud, index, c, 0.2);
      REQUIRE(direct.matrix() == seq[i].covariance.matrix());
      REQUIRE(std::abs(seq[i].projection.trace() - static_cast<double>(seq[i].est_dim)) <= 1e-9);
      REQUIRE(eigenvalues(seq[i].covariance).minCoeff() >= -1e-10 * spectral_norm(seq[i].covariance));
      REQUIRE(spectral_norm(seq[i].covariance) <= 0.2 * 0.2);
      if (mode.kind == LocalPcaMode::Kind::FixedDim) {
        REQUIRE(direct.matrix() == seq[i].covariance.matrix());
        REQUIRE(frobenius_norm(estimate_projection(direct, 2) - seq[i].projection) == 0.0);
      }
    }
  }
}
