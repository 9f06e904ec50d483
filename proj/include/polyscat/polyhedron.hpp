#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "polyscat/types.hpp"

namespace polyscat {

using FaceLoop = std::vector<int>;

// Convex polyhedron with planar faces. Face loops are counterclockwise seen
// from outside, so the right-hand rule gives the outward normal. Immutable
// once built; construct through build_polyhedron().
class ConvexPolyhedron {
 public:
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<FaceLoop>& faces() const { return faces_; }
  const std::vector<Vec3>& normals() const { return normals_; }
  const std::vector<double>& areas() const { return areas_; }
  // Signed distance of each face plane from the origin: <normal, x> = offset.
  const std::vector<double>& offsets() const { return offsets_; }
  const std::vector<double>& perimeters() const { return perimeters_; }

  std::size_t face_count() const { return faces_.size(); }
  std::vector<Vec3> face_vertices(std::size_t face) const;

  double total_area() const;
  // Divergence theorem: sum of offset * area / 3.
  double volume() const;
  Vec3 centroid() const;
  double diameter() const;

  ConvexPolyhedron translated(const Vec3& shift) const;

 private:
  friend ConvexPolyhedron build_polyhedron(std::vector<Vec3>, std::vector<FaceLoop>);

  std::vector<Vec3> vertices_;
  std::vector<FaceLoop> faces_;
  std::vector<Vec3> normals_;
  std::vector<double> areas_;
  std::vector<double> offsets_;
  std::vector<double> perimeters_;
};

// Validates and derives normals, areas, offsets and perimeters.
// Errors: InvalidInput, DegenerateFace, NonPlanarFace, NotConvex.
ConvexPolyhedron build_polyhedron(std::vector<Vec3> vertices, std::vector<FaceLoop> faces);

// Orders the indexed coplanar points counterclockwise about `normal`.
FaceLoop order_face_loop(std::span<const Vec3> vertices, FaceLoop indices, const Vec3& normal);

// Volume by tetrahedral decomposition about the vertex mean; independent of
// the divergence-theorem route in ConvexPolyhedron::volume().
double decomposed_volume(const ConvexPolyhedron& poly);

struct FrontView {
  std::vector<std::size_t> front;        // normal . d < 0
  std::vector<std::size_t> back;         // normal . d >= 0
  std::vector<std::size_t> significant;  // front faces with |d . normal| >= h5
};

FrontView classify_faces(const ConvexPolyhedron& poly, const Vec3& d, double h5);

struct AdmissibilityParams {
  double h0 = 0.1;  // minimum volume
  double h1 = 1.0;  // maximum volume
  double h2 = 0.5;  // minimum |n_a x n_b| over distinct front-face pairs
  double h3 = 0.4;  // minimum face area
  double h4 = 3.5;  // maximum face perimeter
  double h5 = 0.1;  // significance threshold on |d . n|

  void validate() const;
};

struct AdmissibilityReport {
  double volume = 0.0;
  bool volume_ok = false;
  // Minimum cross-product norm over front-face pairs, over all directions;
  // +inf when no direction has two front faces.
  double min_front_cross = 0.0;
  bool front_cross_ok = false;
  double min_area = 0.0;
  bool area_ok = false;
  double max_perimeter = 0.0;
  bool perimeter_ok = false;
  std::vector<std::vector<std::size_t>> significant;  // per direction

  bool admissible() const { return volume_ok && front_cross_ok && area_ok && perimeter_ok; }
};

AdmissibilityReport check_admissibility(const ConvexPolyhedron& poly, const AdmissibilityParams& params,
                                        std::span<const Vec3> directions);

// Obstacle text format: "v x y z" per vertex, "f i1 i2 ... ik" per face
// (1-based), '#' starts a comment.
ConvexPolyhedron parse_obstacle(const std::string& text, const std::string& source = "<string>");
ConvexPolyhedron read_obstacle(const std::filesystem::path& path);
std::string format_obstacle(const ConvexPolyhedron& poly);
void write_obstacle(const std::filesystem::path& path, const ConvexPolyhedron& poly);

namespace shapes {
// Unit-side regular tetrahedron with centroid at the origin (faces C1..C4).
ConvexPolyhedron regular_tetrahedron();
// Axis-aligned cube of the given side, centered at the origin.
ConvexPolyhedron cube(double side = 1.0);
// Unit-side equilateral triangular prism of unit length along z, centered at its centroid.
ConvexPolyhedron triangular_prism();
// Cuboctahedron from the unit cube's edge midpoints, rotated 45 degrees about z.
ConvexPolyhedron cuboctahedron();
}  // namespace shapes

}  // namespace polyscat
