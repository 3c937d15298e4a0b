#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmc/linalg.hpp"
#include "mmc/neighborhoods.hpp"

namespace mmc {

// Synthetic benchmark families. Formulas (before padding to D dimensions):
//
//   two_segments      S1 = [-1,1] x {0}, S2 = {(x, x tan a) : |x| <= cos a}
//   two_curves_angle  C1 = {(t, t^2 / 2) : |t| <= 0.6}, C2 = C1 rotated by a about
//                     the origin; the curves cross only at the origin
//   three_curves      y = 0.5 + m (x - 0.5) + c (x - 0.5)^2 on x in [0.1, 0.9]
//                     for (m, c) in {(-1, 0.5), (0, -0.5), (1, 0.5)}
//   self_intersecting_curves
//                     lemniscate 5 (sin t, sin t cos t) and its copy rotated
//                     by pi/2
//   two_spheres       unit spheres centred at (+-0.75, 0, 0)
//   mobius_strips     ((1 + v/2 cos(u/2)) cos u, (1 + v/2 cos(u/2)) sin u,
//                     v/2 sin(u/2)), |v| <= 1, and its copy rotated by pi/2
//                     about the x axis
//   monkey_saddle     z = x^3 - 3 x y^2 and the plane z = x / 2, |x|,|y| <= 1
//   paraboloids       z = (x^2 + y^2)/2 - 1/2 and z = 1/2 - (x^2 + y^2)/2 over
//                     the disc of radius 1.4; they cross on the unit circle
//
// Points are uniform with respect to arclength / area on each piece, plus
// noise drawn uniformly from the D-ball of radius tau.
enum class DatasetName {
  TwoSegments,
  ThreeCurves,
  SelfIntersectingCurves,
  TwoSpheres,
  MobiusStrips,
  MonkeySaddle,
  Paraboloids,
  TwoCurvesAngle,
};

std::string to_string(DatasetName name);
DatasetName parse_dataset(const std::string& name);  // throws UnknownDataset
const std::vector<DatasetName>& all_datasets();

struct DatasetInfo {
  int clusters;        // K
  int intrinsic_dim;   // d
  Eigen::Index native_dim;
};
DatasetInfo dataset_info(DatasetName name);

struct DatasetSpec {
  DatasetName name = DatasetName::TwoSegments;
  std::size_t n_per_cluster = 500;
  double tau = 0.0;
  std::optional<double> angle;  // two_segments / two_curves_angle; pi/2 when unset
  std::uint64_t seed = 0;
  Eigen::Index ambient_dim = 0;  // 0 selects the native dimension
  // Draw the total n = K * n_per_cluster with cluster membership
  // proportional to surface measure instead of equal counts.
  bool measure_proportional = false;

  double angle_or_default() const;
  Eigen::Index dim() const;
  void validate() const;
};

struct GeneratedData {
  PointCloud cloud;   // noisy points with labels 1..K
  PointMatrix clean;  // the noiseless surface points s_i
  int clusters = 0;
  int intrinsic_dim = 0;
};

GeneratedData generate(const DatasetSpec& spec);

// Largest distance from the centroid of the cloud to one of its points.
double global_radius(const PointCloud& cloud);

// Distance from `point` to the piece with 1-based id `surface_id`. Closed
// form for segments and spheres, numeric minimization over the
// parametrization otherwise.
double distance_to_surface(const Vector& point, int surface_id, const DatasetSpec& spec);

// Measure (length or area) of each piece, in label order.
std::vector<double> surface_measures(const DatasetSpec& spec);

}  // namespace mmc
