#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "polyscat/types.hpp"

namespace testing {

using polyscat::Vec3;

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v(g(rng), g(rng), g(rng));
  return v.normalized();
}

// Convex polygon: sorted random angles on an ellipse, placed in a random plane.
struct TestPolygon {
  std::vector<Vec3> vertices;
  Vec3 normal;
};

inline TestPolygon random_polygon(std::mt19937_64& rng, int min_sides = 3, int max_sides = 7) {
  std::uniform_int_distribution<int> sides(min_sides, max_sides);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = sides(rng);
  std::vector<double> angles(n);
  for (auto& a : angles) a = 2.0 * polyscat::kPi * u(rng);
  std::sort(angles.begin(), angles.end());
  const Vec3 normal = random_unit(rng);
  Vec3 e1 = normal.unitOrthogonal();
  Vec3 e2 = normal.cross(e1);
  const double ra = 0.3 + u(rng), rb = 0.3 + u(rng);
  const Vec3 center(u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5);
  TestPolygon p{{}, normal};
  for (double a : angles) p.vertices.push_back(center + ra * std::cos(a) * e1 + rb * std::sin(a) * e2);
  return p;
}

inline double polygon_area(const std::vector<Vec3>& v, const Vec3& normal) {
  Vec3 s = Vec3::Zero();
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i].cross(v[(i + 1) % v.size()]);
  return 0.5 * s.dot(normal);
}

inline double deg(double rad) { return rad * 180.0 / polyscat::kPi; }

}  // namespace testing
