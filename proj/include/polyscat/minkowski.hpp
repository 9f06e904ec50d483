#pragma once

#include <span>
#include <string>
#include <vector>

#include "polyscat/halfspace.hpp"

namespace polyscat {

struct BalancedAreas {
  std::vector<double> areas;
  std::vector<std::size_t> clamped;  // entries raised to the positive floor
};

// Minimal-norm correction A' = A - N^T (N N^T)^+ N A so that
// sum_j A'_j nu_j = 0, then entries below 1e-6 * max(A) are clamped up to it.
// Errors: InvalidInput (size mismatch or empty input).
BalancedAreas balance_areas(std::span<const Vec3> normals, std::span<const double> areas);

// Facet area of each plane of the intersection of {x : nu_j . x <= alpha_j};
// 0 for planes that do not support a facet. Errors as halfspace_intersection.
std::vector<double> facet_areas(std::span<const Vec3> normals, std::span<const double> offsets);

struct FitOptions {
  double alpha_min = 0.0;  // <= 0 selects 1e-3 * mean(sqrt(A))
  int max_iterations = 200;
  double fd_step = 1e-5;   // relative finite-difference step
};

struct OffsetFit {
  std::vector<Vec3> normals;
  std::vector<double> targets;
  std::vector<double> offsets;
  double residual = 0.0;               // sum_j (a_j - A_j)^2
  std::vector<double> history;         // residual after each accepted step
  int iterations = 0;
  bool converged = false;
  std::vector<std::size_t> vanished;   // planes without a facet at the solution
};

// Least-squares face offsets by a damped Gauss-Newton (Levenberg-Marquardt)
// iteration with a forward-difference Jacobian and the box alpha >= alpha_min.
// Offsets are reported relative to the centroid of the fitted polytope.
// Errors: SpanDeficient (normals do not span R^3), InvalidInput.
OffsetFit fit_offsets(std::span<const Vec3> normals, std::span<const double> areas,
                      std::span<const double> initial, const FitOptions& options = {});

std::string format_fit_report(const OffsetFit& fit);

// Convex hull of a point set as a polyhedron; coplanar hull triangles are
// merged into one face.
ConvexPolyhedron hull_polyhedron(std::span<const Vec3> points);

// Replaces vertex clusters closer than `threshold` by their mean and
// rebuilds the convex hull.
ConvexPolyhedron merge_close_vertices(const ConvexPolyhedron& poly, double threshold);

}  // namespace polyscat
