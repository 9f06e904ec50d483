#pragma once

#include <array>
#include <span>
#include <vector>

#include "polyscat/types.hpp"

namespace polyscat {

// Triangulated boundary of the convex hull of a 3-D point set (quickhull).
// Triangles are counterclockwise seen from outside. Points inside the hull,
// or within `rel_eps * scale` of an existing face, are not hull vertices.
// Throws Error(InvalidInput) when the points are coplanar or fewer than 4.
std::vector<std::array<int, 3>> convex_hull(std::span<const Vec3> points, double rel_eps = 1e-11);

}  // namespace polyscat
