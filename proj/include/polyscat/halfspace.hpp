#pragma once

#include <optional>
#include <span>
#include <vector>

#include "polyscat/polyhedron.hpp"

namespace polyscat {

struct HalfspaceIntersection {
  ConvexPolyhedron polyhedron;
  // For each input plane, the index of its facet in `polyhedron`, or nullopt
  // when the plane does not support a 2-D facet (or repeats an earlier plane).
  std::vector<std::optional<std::size_t>> facet_of_plane;

  std::vector<std::size_t> vanished() const;
  // Per input plane facet area, 0 for vanished planes.
  std::vector<double> plane_areas() const;
};

// Intersection of the half spaces {x : <normals[j], x> <= offsets[j]} via
// polygon clipping; the dual-point hull checks boundedness (requires the
// origin strictly inside).
// Errors: EmptyInterior (some offset <= 0), Unbounded (normals do not
// positively span R^3), InvalidInput (size mismatch).
HalfspaceIntersection halfspace_intersection(std::span<const Vec3> normals, std::span<const double> offsets);

}  // namespace polyscat
