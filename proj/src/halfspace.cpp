#include "polyscat/halfspace.hpp"

#include <algorithm>
#include <cmath>

#include "polyscat/convex_hull.hpp"

namespace polyscat {

std::vector<std::size_t> HalfspaceIntersection::vanished() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < facet_of_plane.size(); ++j)
    if (!facet_of_plane[j]) out.push_back(j);
  return out;
}

std::vector<double> HalfspaceIntersection::plane_areas() const {
  std::vector<double> out(facet_of_plane.size(), 0.0);
  for (std::size_t j = 0; j < facet_of_plane.size(); ++j)
    if (facet_of_plane[j]) out[j] = polyhedron.areas()[*facet_of_plane[j]];
  return out;
}

namespace {

struct Polygon {
  std::vector<Vec3> points;
  int plane;  // input plane index, -1 for the bounding box
};

double polygon_area(const std::vector<Vec3>& pts) {
  Vec3 twice = Vec3::Zero();
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) twice += (pts[i] - pts[0]).cross(pts[i + 1] - pts[0]);
  return 0.5 * twice.norm();
}

std::vector<Polygon> bounding_box(double b) {
  auto corner = [b](int i) { return Vec3(i & 1 ? b : -b, i & 2 ? b : -b, i & 4 ? b : -b); };
  const int loops[6][4] = {{0, 4, 6, 2}, {1, 3, 7, 5}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 2, 3, 1}, {4, 5, 7, 6}};
  std::vector<Polygon> box;
  for (const auto& l : loops) box.push_back({{corner(l[0]), corner(l[1]), corner(l[2]), corner(l[3])}, -1});
  return box;
}

// Clips every polygon to {n.x <= a} and closes the cut with a cap polygon on
// the plane. Returns false when no point lies strictly outside.
bool clip(std::vector<Polygon>& faces, const Vec3& n, double a, int plane, double eps) {
  bool cut = false;
  for (const auto& f : faces)
    for (const auto& p : f.points)
      if (n.dot(p) - a > eps) cut = true;
  if (!cut) return false;

  std::vector<Vec3> cap;
  std::vector<Polygon> kept;
  for (const auto& f : faces) {
    const std::size_t m = f.points.size();
    std::vector<double> d(m);
    for (std::size_t i = 0; i < m; ++i) d[i] = n.dot(f.points[i]) - a;
    Polygon out{{}, f.plane};
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t nx = (i + 1) % m;
      if (d[i] <= eps) {
        out.points.push_back(f.points[i]);
        if (d[i] >= -eps) cap.push_back(f.points[i]);
      }
      if ((d[i] < -eps && d[nx] > eps) || (d[i] > eps && d[nx] < -eps)) {
        const double t = d[i] / (d[i] - d[nx]);
        const Vec3 x = f.points[i] + t * (f.points[nx] - f.points[i]);
        out.points.push_back(x);
        cap.push_back(x);
      }
    }
    if (out.points.size() >= 3) kept.push_back(std::move(out));
  }
  faces = std::move(kept);

  std::vector<Vec3> unique;
  for (const auto& p : cap)
    if (std::none_of(unique.begin(), unique.end(), [&](const Vec3& q) { return (p - q).norm() <= eps; }))
      unique.push_back(p);
  if (unique.size() >= 3) {
    std::vector<Vec3> tmp = unique;
    FaceLoop idx(tmp.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    Polygon capf{{}, plane};
    for (int i : order_face_loop(tmp, idx, n)) capf.points.push_back(tmp[i]);
    faces.push_back(std::move(capf));
  }
  return true;
}

}  // namespace

HalfspaceIntersection halfspace_intersection(std::span<const Vec3> normals, std::span<const double> offsets) {
  if (normals.size() != offsets.size()) throw Error(Errc::InvalidInput, "normals and offsets differ in length");
  if (normals.size() < 4) throw Error(Errc::Unbounded, "fewer than 4 half spaces cannot bound a region");
  const std::size_t k = normals.size();

  std::vector<Vec3> unit(k);
  std::vector<double> off(k);
  std::vector<Vec3> dual(k);
  for (std::size_t j = 0; j < k; ++j) {
    if (!(offsets[j] > 0.0)) throw Error(Errc::EmptyInterior, "plane offsets must be positive");
    const double len = normals[j].norm();
    if (!(len > 0.0)) throw Error(Errc::InvalidInput, "zero normal");
    unit[j] = normals[j] / len;
    off[j] = offsets[j] / len;
    dual[j] = unit[j] / off[j];
  }

  // Boundedness: the origin must lie strictly inside the hull of the dual
  // points; the nearest dual facet also bounds the primal radius.
  std::vector<std::array<int, 3>> hull;
  try {
    hull = convex_hull(dual);
  } catch (const Error&) {
    throw Error(Errc::Unbounded, "normals do not span R^3");
  }
  double dual_scale = 0.0;
  for (const auto& y : dual) dual_scale = std::max(dual_scale, y.norm());
  double min_c = 1e300;
  for (const auto& t : hull) {
    const Vec3 n = (dual[t[1]] - dual[t[0]]).cross(dual[t[2]] - dual[t[0]]).normalized();
    min_c = std::min(min_c, n.dot(dual[t[0]]));
  }
  if (!(min_c > 1e-12 * dual_scale)) throw Error(Errc::Unbounded, "normals do not positively span R^3");
  const double radius = 1.0 / min_c;

  std::vector<Polygon> faces = bounding_box(2.0 * radius);
  const double eps = 1e-12 * radius;
  for (std::size_t j = 0; j < k; ++j) clip(faces, unit[j], off[j], static_cast<int>(j), eps);

  double extent = 0.0;
  for (const auto& f : faces) {
    if (f.plane < 0) throw Error(Errc::Unbounded, "the bounding box survived clipping");
    for (const auto& p : f.points) extent = std::max(extent, p.norm());
  }

  // Weld shared corners and index the faces.
  const double weld = 1e-10 * extent;
  std::vector<Vec3> vertices;
  std::vector<FaceLoop> loops;
  std::vector<std::optional<std::size_t>> facet_of_plane(k);
  for (const auto& f : faces) {
    if (polygon_area(f.points) < 1e-12 * extent * extent) continue;
    FaceLoop loop;
    for (const auto& p : f.points) {
      std::size_t v = 0;
      while (v < vertices.size() && (vertices[v] - p).norm() > weld) ++v;
      if (v == vertices.size()) vertices.push_back(p);
      if (std::find(loop.begin(), loop.end(), static_cast<int>(v)) == loop.end()) loop.push_back(static_cast<int>(v));
    }
    if (loop.size() < 3) continue;
    facet_of_plane[f.plane] = loops.size();
    loops.push_back(order_face_loop(vertices, std::move(loop), unit[f.plane]));
  }

  return HalfspaceIntersection{build_polyhedron(std::move(vertices), std::move(loops)), std::move(facet_of_plane)};
}

}  // namespace polyscat
