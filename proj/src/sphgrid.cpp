#include "polyscat/sphgrid.hpp"

#include <cmath>
#include <numeric>

#include "polyscat/convex_hull.hpp"

namespace polyscat {

double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double num = std::abs(a.dot(b.cross(c)));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

SphericalGrid SphericalGrid::from_points(std::vector<Vec3> points, AreaMode mode) {
  for (auto& p : points) {
    const double len = p.norm();
    if (!(len > 0.0)) throw Error(Errc::InvalidInput, "zero direction in grid");
    // Leave already-unit points bit-exact so grids survive a text round trip.
    if (std::abs(len - 1.0) > 1e-14) p /= len;
  }
  SphericalGrid g;
  g.mode_ = mode;
  g.triangles_ = convex_hull(points);
  if (g.triangles_.size() != 2 * points.size() - 4)
    throw Error(Errc::InvalidInput, "grid points are not all hull vertices");
  g.triangle_areas_.reserve(g.triangles_.size());
  g.weights_.assign(points.size(), 0.0);
  for (const auto& t : g.triangles_) {
    const Vec3& a = points[t[0]];
    const Vec3& b = points[t[1]];
    const Vec3& c = points[t[2]];
    const double area =
        mode == AreaMode::Flat ? 0.5 * (b - a).cross(c - a).norm() : spherical_triangle_area(a, b, c);
    g.triangle_areas_.push_back(area);
    for (int i : t) g.weights_[i] += area / 3.0;
  }
  g.points_ = std::move(points);
  return g;
}

double SphericalGrid::total_area() const {
  return std::accumulate(triangle_areas_.begin(), triangle_areas_.end(), 0.0);
}

std::vector<Vec3> fibonacci_points(int n) {
  if (n < 12) throw Error(Errc::InvalidInput, "grid needs at least 12 points");
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return pts;
}

SphericalGrid build_grid(int n, AreaMode mode) { return SphericalGrid::from_points(fibonacci_points(n), mode); }

GridPtr make_grid(int n, AreaMode mode) { return std::make_shared<const SphericalGrid>(build_grid(n, mode)); }

}  // namespace polyscat
