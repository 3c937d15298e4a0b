#include "mmc/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "mmc/error.hpp"
#include "mmc/random.hpp"

namespace mmc {

namespace {

// One smooth piece: a parametrization over a box of one or two parameters,
// or one of the closed-form shapes.
struct Patch {
  enum class Kind { Parametric, Segment, Sphere } kind = Kind::Parametric;
  int params = 1;
  double lo[2] = {0.0, 0.0};
  double hi[2] = {1.0, 1.0};
  bool periodic[2] = {false, false};
  std::function<Vector(double, double)> f;

  Vector a, b;        // segment endpoints
  Vector center;      // sphere
  double radius = 1.0;

  Eigen::Index native_dim() const {
    switch (kind) {
      case Kind::Segment: return a.size();
      case Kind::Sphere: return center.size();
      case Kind::Parametric: return f(lo[0], lo[1]).size();
    }
    return 0;
  }

  double density(double u, double v) const {
    const double hu = 1e-6 * (hi[0] - lo[0]);
    const Vector fu = (f(u + hu, v) - f(u - hu, v)) / (2.0 * hu);
    if (params == 1) return fu.norm();
    const double hv = 1e-6 * (hi[1] - lo[1]);
    const Vector fv = (f(u, v + hv) - f(u, v - hv)) / (2.0 * hv);
    const double g = fu.squaredNorm() * fv.squaredNorm() - std::pow(fu.dot(fv), 2);
    return std::sqrt(std::max(g, 0.0));
  }
};

constexpr int kGrid1 = 4000;
constexpr int kGrid2 = 300;

// Midpoint-rule measure and the maximum of the density over the grid nodes.
struct DensityStats {
  double measure = 0.0;
  double max_density = 0.0;
};

DensityStats density_stats(const Patch& p) {
  DensityStats s;
  if (p.params == 1) {
    const double step = (p.hi[0] - p.lo[0]) / kGrid1;
    for (int i = 0; i <= kGrid1; ++i) {
      const double u = p.lo[0] + step * i;
      const double dens = p.density(u, 0.0);
      s.max_density = std::max(s.max_density, dens);
      if (i < kGrid1) s.measure += p.density(u + 0.5 * step, 0.0) * step;
    }
    return s;
  }
  const double su = (p.hi[0] - p.lo[0]) / kGrid2;
  const double sv = (p.hi[1] - p.lo[1]) / kGrid2;
  for (int i = 0; i <= kGrid2; ++i) {
    for (int j = 0; j <= kGrid2; ++j) {
      const double u = p.lo[0] + su * i;
      const double v = p.lo[1] + sv * j;
      s.max_density = std::max(s.max_density, p.density(u, v));
      if (i < kGrid2 && j < kGrid2) s.measure += p.density(u + 0.5 * su, v + 0.5 * sv) * su * sv;
    }
  }
  return s;
}

double measure_of(const Patch& p) {
  switch (p.kind) {
    case Patch::Kind::Segment: return (p.b - p.a).norm();
    case Patch::Kind::Sphere: return 4.0 * M_PI * p.radius * p.radius;
    case Patch::Kind::Parametric: return density_stats(p).measure;
  }
  return 0.0;
}

Vector rotate2(const Vector& x, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Vector out(2);
  out << c * x(0) - s * x(1), s * x(0) + c * x(1);
  return out;
}

Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

Vector vec3(double x, double y, double z) {
  Vector v(3);
  v << x, y, z;
  return v;
}

Patch segment(Vector a, Vector b) {
  Patch p;
  p.kind = Patch::Kind::Segment;
  p.a = std::move(a);
  p.b = std::move(b);
  return p;
}

Patch curve(double lo, double hi, bool periodic, std::function<Vector(double)> f) {
  Patch p;
  p.params = 1;
  p.lo[0] = lo;
  p.hi[0] = hi;
  p.periodic[0] = periodic;
  p.f = [g = std::move(f)](double u, double) { return g(u); };
  return p;
}

Patch surface(double ulo, double uhi, bool uper, double vlo, double vhi, bool vper,
              std::function<Vector(double, double)> f) {
  Patch p;
  p.params = 2;
  p.lo[0] = ulo;
  p.hi[0] = uhi;
  p.periodic[0] = uper;
  p.lo[1] = vlo;
  p.hi[1] = vhi;
  p.periodic[1] = vper;
  p.f = std::move(f);
  return p;
}

Vector mobius(double u, double v) {
  const double w = 1.0 + 0.5 * v * std::cos(0.5 * u);
  return vec3(w * std::cos(u), w * std::sin(u), 0.5 * v * std::sin(0.5 * u));
}

std::vector<Patch> patches_for(const DatasetSpec& spec) {
  const double angle = spec.angle_or_default();
  std::vector<Patch> out;
  switch (spec.name) {
    case DatasetName::TwoSegments:
      out.push_back(segment(vec2(-1.0, 0.0), vec2(1.0, 0.0)));
      out.push_back(segment(vec2(-std::cos(angle), -std::sin(angle)), vec2(std::cos(angle), std::sin(angle))));
      break;
    case DatasetName::TwoCurvesAngle:
      out.push_back(curve(-0.6, 0.6, false, [](double t) { return vec2(t, 0.5 * t * t); }));
      out.push_back(curve(-0.6, 0.6, false, [angle](double t) { return rotate2(vec2(t, 0.5 * t * t), angle); }));
      break;
    case DatasetName::ThreeCurves:
      for (auto [m, c] : {std::pair{-1.0, 0.5}, std::pair{0.0, -0.5}, std::pair{1.0, 0.5}}) {
        out.push_back(curve(0.1, 0.9, false, [m = m, c = c](double x) {
          const double u = x - 0.5;
          return vec2(x, 0.5 + m * u + c * u * u);
        }));
      }
      break;
    case DatasetName::SelfIntersectingCurves:
      out.push_back(curve(0.0, 2.0 * M_PI, true,
                          [](double t) { return vec2(5.0 * std::sin(t), 5.0 * std::sin(t) * std::cos(t)); }));
      out.push_back(curve(0.0, 2.0 * M_PI, true, [](double t) {
        return rotate2(vec2(5.0 * std::sin(t), 5.0 * std::sin(t) * std::cos(t)), 0.5 * M_PI);
      }));
      break;
    case DatasetName::TwoSpheres:
      for (double cx : {-0.75, 0.75}) {
        Patch p;
        p.kind = Patch::Kind::Sphere;
        p.center = vec3(cx, 0.0, 0.0);
        p.radius = 1.0;
        out.push_back(p);
      }
      break;
    case DatasetName::MobiusStrips:
      out.push_back(surface(0.0, 2.0 * M_PI, true, -1.0, 1.0, false, mobius));
      out.push_back(surface(0.0, 2.0 * M_PI, true, -1.0, 1.0, false, [](double u, double v) {
        const Vector m = mobius(u, v);
        return vec3(m(0), -m(2), m(1));
      }));
      break;
    case DatasetName::MonkeySaddle:
      out.push_back(surface(-1.0, 1.0, false, -1.0, 1.0, false,
                            [](double x, double y) { return vec3(x, y, x * x * x - 3.0 * x * y * y); }));
      out.push_back(surface(-1.0, 1.0, false, -1.0, 1.0, false, [](double x, double y) { return vec3(x, y, 0.5 * x); }));
      break;
    case DatasetName::Paraboloids:
      for (double sign : {1.0, -1.0}) {
        out.push_back(surface(0.0, 1.4, false, 0.0, 2.0 * M_PI, true, [sign](double rho, double phi) {
          return vec3(rho * std::cos(phi), rho * std::sin(phi), sign * (0.5 * rho * rho - 0.5));
        }));
      }
      break;
  }
  return out;
}

struct Sampler {
  const Patch* patch;
  double max_density = 0.0;

  explicit Sampler(const Patch& p) : patch(&p) {
    if (p.kind == Patch::Kind::Parametric) max_density = 1.1 * density_stats(p).max_density;
  }

  Vector draw(Rng& rng) const {
    const Patch& p = *patch;
    switch (p.kind) {
      case Patch::Kind::Segment: return p.a + rng.uniform() * (p.b - p.a);
      case Patch::Kind::Sphere: {
        Vector g(p.center.size());
        do {
          for (Eigen::Index k = 0; k < g.size(); ++k) g(k) = rng.normal();
        } while (g.norm() == 0.0);
        return p.center + p.radius * g / g.norm();
      }
      case Patch::Kind::Parametric:
        for (;;) {
          const double u = rng.uniform(p.lo[0], p.hi[0]);
          const double v = p.params == 2 ? rng.uniform(p.lo[1], p.hi[1]) : 0.0;
          if (rng.uniform() * max_density <= p.density(u, v)) return p.f(u, v);
        }
    }
    return {};
  }
};

Vector ball_noise(Rng& rng, Eigen::Index dim, double tau) {
  Vector z = Vector::Zero(dim);
  if (tau <= 0.0) return z;
  double n2 = 0.0;
  do {
    for (Eigen::Index k = 0; k < dim; ++k) z(k) = rng.normal();
    n2 = z.squaredNorm();
  } while (n2 == 0.0);
  const double radius = tau * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
  return z * (radius / std::sqrt(n2));
}

// Squared distance from x (native coordinates) to p(u, v), minimized by a
// grid scan followed by a shrinking pattern search.
double parametric_distance2(const Patch& p, const Vector& x) {
  auto cost = [&](double u, double v) { return (p.f(u, v) - x).squaredNorm(); };
  auto wrap = [&](int k, double t) {
    if (p.periodic[k]) {
      const double span = p.hi[k] - p.lo[k];
      t = p.lo[k] + std::fmod(std::fmod(t - p.lo[k], span) + span, span);
    }
    return std::clamp(t, p.lo[k], p.hi[k]);
  };
  const int grid = p.params == 1 ? kGrid1 : kGrid2;
  double best_u = p.lo[0];
  double best_v = p.lo[1];
  double best = std::numeric_limits<double>::infinity();
  const int vgrid = p.params == 2 ? grid : 0;
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; j <= vgrid; ++j) {
      const double u = p.lo[0] + (p.hi[0] - p.lo[0]) * i / grid;
      const double v = p.params == 2 ? p.lo[1] + (p.hi[1] - p.lo[1]) * j / grid : 0.0;
      const double c = cost(u, v);
      if (c < best) {
        best = c;
        best_u = u;
        best_v = v;
      }
    }
  }
  double step[2] = {(p.hi[0] - p.lo[0]) / grid, (p.hi[1] - p.lo[1]) / std::max(grid, 1)};
  const double stop[2] = {1e-14 * (p.hi[0] - p.lo[0]), 1e-14 * (p.hi[1] - p.lo[1])};
  while (step[0] > stop[0] || (p.params == 2 && step[1] > stop[1])) {
    bool improved = false;
    for (int k = 0; k < p.params; ++k) {
      for (double dir : {-1.0, 1.0}) {
        double u = best_u;
        double v = best_v;
        (k == 0 ? u : v) += dir * step[k];
        u = wrap(0, u);
        if (p.params == 2) v = wrap(1, v);
        const double c = cost(u, v);
        if (c < best) {
          best = c;
          best_u = u;
          best_v = v;
          improved = true;
        }
      }
    }
    if (!improved) {
      step[0] *= 0.5;
      step[1] *= 0.5;
    }
  }
  return best;
}

double patch_distance(const Patch& p, const Vector& point) {
  const Eigen::Index native = p.native_dim();
  const Vector x = point.head(native);
  const double extra2 = point.size() > native ? point.tail(point.size() - native).squaredNorm() : 0.0;
  double d2 = 0.0;
  switch (p.kind) {
    case Patch::Kind::Segment: {
      const Vector ab = p.b - p.a;
      const double t = std::clamp((x - p.a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
      d2 = (x - (p.a + t * ab)).squaredNorm();
      break;
    }
    case Patch::Kind::Sphere: {
      const double gap = (x - p.center).norm() - p.radius;
      d2 = gap * gap;
      break;
    }
    case Patch::Kind::Parametric: d2 = parametric_distance2(p, x); break;
  }
  return std::sqrt(d2 + extra2);
}

}  // namespace

std::string to_string(DatasetName name) {
  switch (name) {
    case DatasetName::TwoSegments: return "two_segments";
    case DatasetName::ThreeCurves: return "three_curves";
    case DatasetName::SelfIntersectingCurves: return "self_intersecting_curves";
    case DatasetName::TwoSpheres: return "two_spheres";
    case DatasetName::MobiusStrips: return "mobius_strips";
    case DatasetName::MonkeySaddle: return "monkey_saddle";
    case DatasetName::Paraboloids: return "paraboloids";
    case DatasetName::TwoCurvesAngle: return "two_curves_angle";
  }
  return "unknown";
}

const std::vector<DatasetName>& all_datasets() {
  static const std::vector<DatasetName> names = {
      DatasetName::TwoSegments,  DatasetName::ThreeCurves,   DatasetName::SelfIntersectingCurves,
      DatasetName::TwoSpheres,   DatasetName::MobiusStrips,  DatasetName::MonkeySaddle,
      DatasetName::Paraboloids,  DatasetName::TwoCurvesAngle};
  return names;
}

DatasetName parse_dataset(const std::string& name) {
  for (DatasetName d : all_datasets()) {
    if (to_string(d) == name) return d;
  }
  throw Error(ErrorKind::UnknownDataset, "unknown dataset '" + name + "'");
}

DatasetInfo dataset_info(DatasetName name) {
  switch (name) {
    case DatasetName::TwoSegments:
    case DatasetName::TwoCurvesAngle: return {2, 1, 2};
    case DatasetName::ThreeCurves: return {3, 1, 2};
    case DatasetName::SelfIntersectingCurves: return {2, 1, 2};
    case DatasetName::TwoSpheres:
    case DatasetName::MobiusStrips:
    case DatasetName::MonkeySaddle:
    case DatasetName::Paraboloids: return {2, 2, 3};
  }
  return {0, 0, 0};
}

double DatasetSpec::angle_or_default() const { return angle ? *angle : 0.5 * M_PI; }

Eigen::Index DatasetSpec::dim() const { return ambient_dim > 0 ? ambient_dim : dataset_info(name).native_dim; }

void DatasetSpec::validate() const {
  if (n_per_cluster < 1) throw Error(ErrorKind::InvalidInput, "n_per_cluster must be at least 1");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw Error(ErrorKind::InvalidInput, "tau must be a finite value >= 0");
  if (angle && !(*angle > 0.0 && *angle <= 0.5 * M_PI + 1e-12)) {
    throw Error(ErrorKind::InvalidInput, "angle must lie in (0, pi/2]");
  }
  if (ambient_dim != 0 && ambient_dim < dataset_info(name).native_dim) {
    throw Error(ErrorKind::InvalidInput, "ambient dimension is smaller than the dataset's native dimension");
  }
}

GeneratedData generate(const DatasetSpec& spec) {
  spec.validate();
  const auto pieces = patches_for(spec);
  const DatasetInfo info = dataset_info(spec.name);
  const Eigen::Index dim = spec.dim();
  const auto k = pieces.size();
  Rng rng(spec.seed);

  std::vector<Sampler> samplers;
  samplers.reserve(k);
  for (const auto& p : pieces) samplers.emplace_back(p);

  // Source piece for every point.
  std::vector<int> source;
  if (spec.measure_proportional) {
    std::vector<double> cumulative(k);
    double total = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      total += measure_of(pieces[c]);
      cumulative[c] = total;
    }
    source.resize(spec.n_per_cluster * k);
    for (auto& s : source) {
      const double u = rng.uniform() * total;
      s = static_cast<int>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
      s = std::min(s, static_cast<int>(k) - 1);
    }
  } else {
    for (std::size_t c = 0; c < k; ++c) source.insert(source.end(), spec.n_per_cluster, static_cast<int>(c));
  }

  GeneratedData out;
  out.clusters = info.clusters;
  out.intrinsic_dim = info.intrinsic_dim;
  const auto n = static_cast<Eigen::Index>(source.size());
  out.clean = PointMatrix::Zero(n, dim);
  out.cloud.coords.resize(n, dim);
  out.cloud.labels = std::vector<int>(source.size());
  out.cloud.seed = spec.seed;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = source[static_cast<std::size_t>(i)];
    const Vector s = samplers[static_cast<std::size_t>(c)].draw(rng);
    out.clean.row(i).head(s.size()) = s.transpose();
    out.cloud.coords.row(i) = out.clean.row(i) + ball_noise(rng, dim, spec.tau).transpose();
    (*out.cloud.labels)[static_cast<std::size_t>(i)] = c + 1;
  }
  return out;
}

double global_radius(const PointCloud& cloud) {
  cloud.validate();
  const Eigen::RowVectorXd centroid = cloud.coords.colwise().mean();
  double best = 0.0;
  for (Eigen::Index i = 0; i < cloud.coords.rows(); ++i) best = std::max(best, (cloud.coords.row(i) - centroid).norm());
  return best;
}

double distance_to_surface(const Vector& point, int surface_id, const DatasetSpec& spec) {
  spec.validate();
  const auto pieces = patches_for(spec);
  if (surface_id < 1 || static_cast<std::size_t>(surface_id) > pieces.size()) {
    throw Error(ErrorKind::InvalidInput, "surface id out of range");
  }
  const Patch& p = pieces[static_cast<std::size_t>(surface_id - 1)];
  if (point.size() < p.native_dim()) throw Error(ErrorKind::InvalidInput, "point dimension too small");
  return patch_distance(p, point);
}

std::vector<double> surface_measures(const DatasetSpec& spec) {
  spec.validate();
  std::vector<double> out;
  for (const auto& p : patches_for(spec)) out.push_back(measure_of(p));
  return out;
}

}  // namespace mmc
