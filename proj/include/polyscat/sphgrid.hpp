#pragma once

#include <array>
#include <memory>
#include <vector>

#include "polyscat/types.hpp"

namespace polyscat {

enum class AreaMode { Flat, Spherical };

// Directions on the unit sphere with a covering triangulation. The
// per-point quadrature weight is one third of the adjacent triangle areas,
// which reproduces the vertex-averaged triangle rule.
class SphericalGrid {
 public:
  // Normalizes the points and triangulates them by their convex hull.
  static SphericalGrid from_points(std::vector<Vec3> points, AreaMode mode = AreaMode::Flat);

  const std::vector<Vec3>& points() const { return points_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<double>& triangle_areas() const { return triangle_areas_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return points_.size(); }
  AreaMode area_mode() const { return mode_; }
  double total_area() const;

 private:
  std::vector<Vec3> points_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<double> triangle_areas_;
  std::vector<double> weights_;
  AreaMode mode_ = AreaMode::Flat;
};

using GridPtr = std::shared_ptr<const SphericalGrid>;

// Fibonacci lattice of n >= 12 points.
std::vector<Vec3> fibonacci_points(int n);
SphericalGrid build_grid(int n, AreaMode mode = AreaMode::Flat);
GridPtr make_grid(int n, AreaMode mode = AreaMode::Flat);

// Area of the spherical triangle with unit-vector corners (Van Oosterom-Strackee).
double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace polyscat
