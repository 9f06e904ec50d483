#include "polyscat/polyhedron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Geometry>

#include "polyscat/text_io.hpp"

namespace polyscat {

namespace {

constexpr double kShapeTol = 1e-9;
constexpr double kMinFaceArea = 1e-12;

double max_pairwise_distance(const std::vector<Vec3>& pts) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d2 = std::max(d2, (pts[i] - pts[j]).squaredNorm());
  return std::sqrt(d2);
}

}  // namespace

std::vector<Vec3> ConvexPolyhedron::face_vertices(std::size_t face) const {
  std::vector<Vec3> out;
  out.reserve(faces_.at(face).size());
  for (int i : faces_[face]) out.push_back(vertices_[i]);
  return out;
}

double ConvexPolyhedron::total_area() const { return std::accumulate(areas_.begin(), areas_.end(), 0.0); }

double ConvexPolyhedron::volume() const {
  double v = 0.0;
  for (std::size_t j = 0; j < faces_.size(); ++j) v += offsets_[j] * areas_[j];
  return v / 3.0;
}

Vec3 ConvexPolyhedron::centroid() const {
  Vec3 ref = Vec3::Zero();
  for (const auto& v : vertices_) ref += v;
  ref /= static_cast<double>(vertices_.size());
  double vol = 0.0;
  Vec3 moment = Vec3::Zero();
  for (const auto& loop : faces_) {
    const Vec3& a = vertices_[loop[0]];
    for (std::size_t i = 1; i + 1 < loop.size(); ++i) {
      const Vec3& b = vertices_[loop[i]];
      const Vec3& c = vertices_[loop[i + 1]];
      const double t = (a - ref).dot((b - ref).cross(c - ref)) / 6.0;
      vol += t;
      moment += t * (ref + a + b + c) / 4.0;
    }
  }
  return moment / vol;
}

double ConvexPolyhedron::diameter() const { return max_pairwise_distance(vertices_); }

ConvexPolyhedron ConvexPolyhedron::translated(const Vec3& shift) const {
  ConvexPolyhedron out = *this;
  for (auto& v : out.vertices_) v += shift;
  for (std::size_t j = 0; j < out.faces_.size(); ++j) out.offsets_[j] += out.normals_[j].dot(shift);
  return out;
}

ConvexPolyhedron build_polyhedron(std::vector<Vec3> vertices, std::vector<FaceLoop> faces) {
  if (vertices.size() < 4) throw Error(Errc::InvalidInput, "a polyhedron needs at least 4 vertices");
  if (faces.size() < 4) throw Error(Errc::InvalidInput, "a polyhedron needs at least 4 faces");
  const int nv = static_cast<int>(vertices.size());
  for (std::size_t j = 0; j < faces.size(); ++j) {
    const auto& loop = faces[j];
    if (loop.size() < 3) throw Error(Errc::InvalidInput, "face " + std::to_string(j) + " has fewer than 3 vertices");
    for (int i : loop)
      if (i < 0 || i >= nv) throw Error(Errc::InvalidInput, "face " + std::to_string(j) + " index out of range");
    FaceLoop sorted = loop;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(Errc::InvalidInput, "face " + std::to_string(j) + " repeats a vertex");
  }

  ConvexPolyhedron p;
  const double tol = kShapeTol * std::max(max_pairwise_distance(vertices), 1e-300);
  p.normals_.reserve(faces.size());
  for (std::size_t j = 0; j < faces.size(); ++j) {
    const auto& loop = faces[j];
    const Vec3& a = vertices[loop[0]];
    Vec3 twice_area = Vec3::Zero();
    double perimeter = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Vec3& u = vertices[loop[i]];
      const Vec3& w = vertices[loop[(i + 1) % loop.size()]];
      perimeter += (w - u).norm();
      if (i >= 1 && i + 1 < loop.size()) twice_area += (u - a).cross(w - a);
    }
    const double area = 0.5 * twice_area.norm();
    if (!(area >= kMinFaceArea)) throw Error(Errc::DegenerateFace, "face " + std::to_string(j) + " has zero area");
    const Vec3 n = twice_area.normalized();
    const double offset = n.dot(a);
    for (int i : loop)
      if (std::abs(n.dot(vertices[i]) - offset) > tol)
        throw Error(Errc::NonPlanarFace, "face " + std::to_string(j) + " is not planar");
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Vec3& u = vertices[loop[i]];
      const Vec3& w = vertices[loop[(i + 1) % loop.size()]];
      const Vec3& x = vertices[loop[(i + 2) % loop.size()]];
      // Distance of w outside the chord u-x.
      if ((w - u).cross(x - w).dot(n) < -tol * std::max((x - u).norm(), tol))
        throw Error(Errc::NotConvex, "face " + std::to_string(j) + " is not a convex loop");
    }
    p.normals_.push_back(n);
    p.areas_.push_back(area);
    p.offsets_.push_back(offset);
    p.perimeters_.push_back(perimeter);
  }
  for (std::size_t j = 0; j < faces.size(); ++j)
    for (const auto& v : vertices)
      if (p.normals_[j].dot(v) - p.offsets_[j] > tol)
        throw Error(Errc::NotConvex, "a vertex lies outside face " + std::to_string(j));

  Vec3 balance = Vec3::Zero();
  double total = 0.0;
  for (std::size_t j = 0; j < faces.size(); ++j) {
    balance += p.areas_[j] * p.normals_[j];
    total += p.areas_[j];
  }
  if (balance.norm() > kShapeTol * total) throw Error(Errc::InvalidInput, "faces do not close the surface");

  p.vertices_ = std::move(vertices);
  p.faces_ = std::move(faces);
  return p;
}

FaceLoop order_face_loop(std::span<const Vec3> vertices, FaceLoop indices, const Vec3& normal) {
  if (indices.empty()) return indices;
  Vec3 c = Vec3::Zero();
  for (int i : indices) c += vertices[i];
  c /= static_cast<double>(indices.size());
  const Vec3 n = normal.normalized();
  Vec3 u = n.unitOrthogonal();
  const Vec3 w = n.cross(u);
  std::vector<std::pair<double, int>> keyed;
  keyed.reserve(indices.size());
  for (int i : indices) {
    const Vec3 r = vertices[i] - c;
    keyed.emplace_back(std::atan2(r.dot(w), r.dot(u)), i);
  }
  std::sort(keyed.begin(), keyed.end());
  FaceLoop out;
  for (const auto& [angle, i] : keyed) out.push_back(i);
  return out;
}

double decomposed_volume(const ConvexPolyhedron& poly) {
  Vec3 ref = Vec3::Zero();
  for (const auto& v : poly.vertices()) ref += v;
  ref /= static_cast<double>(poly.vertices().size());
  double vol = 0.0;
  for (const auto& loop : poly.faces()) {
    const Vec3& a = poly.vertices()[loop[0]];
    for (std::size_t i = 1; i + 1 < loop.size(); ++i)
      vol += (a - ref).dot((poly.vertices()[loop[i]] - ref).cross(poly.vertices()[loop[i + 1]] - ref)) / 6.0;
  }
  return vol;
}

FrontView classify_faces(const ConvexPolyhedron& poly, const Vec3& d, double h5) {
  FrontView view;
  for (std::size_t j = 0; j < poly.face_count(); ++j) {
    const double c = poly.normals()[j].dot(d);
    if (c < 0.0) {
      view.front.push_back(j);
      if (std::abs(c) >= h5) view.significant.push_back(j);
    } else {
      view.back.push_back(j);
    }
  }
  return view;
}

void AdmissibilityParams::validate() const {
  for (double h : {h0, h1, h2, h3, h4, h5})
    if (!(h > 0.0)) throw Error(Errc::InvalidInput, "admissibility constants must be positive");
  if (h0 > h1) throw Error(Errc::InvalidInput, "h0 must not exceed h1");
}

AdmissibilityReport check_admissibility(const ConvexPolyhedron& poly, const AdmissibilityParams& params,
                                        std::span<const Vec3> directions) {
  AdmissibilityReport r;
  r.volume = poly.volume();
  r.volume_ok = params.h0 <= r.volume && r.volume <= params.h1;

  r.min_front_cross = std::numeric_limits<double>::infinity();
  for (const auto& d : directions) {
    const FrontView view = classify_faces(poly, d, params.h5);
    for (std::size_t a = 0; a < view.front.size(); ++a)
      for (std::size_t b = a + 1; b < view.front.size(); ++b)
        r.min_front_cross = std::min(
            r.min_front_cross, poly.normals()[view.front[a]].cross(poly.normals()[view.front[b]]).norm());
    r.significant.push_back(view.significant);
  }
  r.front_cross_ok = r.min_front_cross >= params.h2;

  r.min_area = *std::min_element(poly.areas().begin(), poly.areas().end());
  r.area_ok = r.min_area >= params.h3;
  r.max_perimeter = *std::max_element(poly.perimeters().begin(), poly.perimeters().end());
  r.perimeter_ok = r.max_perimeter <= params.h4;
  return r;
}

ConvexPolyhedron parse_obstacle(const std::string& text, const std::string& source) {
  std::vector<Vec3> vertices;
  std::vector<FaceLoop> faces;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = line;
    if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    const auto tok = text::split_ws(body);
    if (tok.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    try {
      if (tok[0] == "v") {
        if (tok.size() != 4) throw Error(Errc::Parse, "vertex line needs 3 coordinates");
        vertices.emplace_back(text::parse_double(tok[1]), text::parse_double(tok[2]), text::parse_double(tok[3]));
      } else if (tok[0] == "f") {
        FaceLoop loop;
        for (std::size_t i = 1; i < tok.size(); ++i) loop.push_back(static_cast<int>(text::parse_long(tok[i]) - 1));
        faces.push_back(std::move(loop));
      } else {
        throw Error(Errc::Parse, "unknown record '" + std::string(tok[0]) + "'");
      }
    } catch (const Error& e) {
      throw Error(Errc::Parse, where + ": " + e.what());
    }
  }
  try {
    return build_polyhedron(std::move(vertices), std::move(faces));
  } catch (const Error& e) {
    throw Error(e.code(), source + ": " + e.what());
  }
}

ConvexPolyhedron read_obstacle(const std::filesystem::path& path) {
  return parse_obstacle(text::read_file(path), path.string());
}

std::string format_obstacle(const ConvexPolyhedron& poly) {
  std::string out = "# convex polyhedron: " + std::to_string(poly.vertices().size()) + " vertices, " +
                    std::to_string(poly.face_count()) + " faces\n";
  for (const auto& v : poly.vertices()) out += "v " + text::format_vec(v) + "\n";
  for (const auto& loop : poly.faces()) {
    out += "f";
    for (int i : loop) out += " " + std::to_string(i + 1);
    out += "\n";
  }
  return out;
}

void write_obstacle(const std::filesystem::path& path, const ConvexPolyhedron& poly) {
  text::write_file(path, format_obstacle(poly));
}

namespace shapes {

ConvexPolyhedron regular_tetrahedron() {
  const double h = 1.0 / std::sqrt(8.0);
  return build_polyhedron({{0.5, 0.0, -h}, {-0.5, 0.0, -h}, {0.0, 0.5, h}, {0.0, -0.5, h}},
                          {{1, 3, 2}, {0, 2, 3}, {0, 3, 1}, {0, 1, 2}});
}

ConvexPolyhedron cube(double side) {
  if (!(side > 0.0)) throw Error(Errc::InvalidInput, "cube side must be positive");
  std::vector<Vec3> v;
  for (int i = 0; i < 8; ++i)
    v.emplace_back((i & 1 ? 0.5 : -0.5) * side, (i & 2 ? 0.5 : -0.5) * side, (i & 4 ? 0.5 : -0.5) * side);
  return build_polyhedron(std::move(v),
                          {{0, 4, 6, 2}, {1, 3, 7, 5}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 2, 3, 1}, {4, 5, 7, 6}});
}

ConvexPolyhedron triangular_prism() {
  const double r = 1.0 / std::sqrt(3.0);
  std::vector<Vec3> v;
  for (double z : {-0.5, 0.5})
    for (int i = 0; i < 3; ++i) {
      const double t = kPi / 2 + 2 * kPi * i / 3;
      v.emplace_back(r * std::cos(t), r * std::sin(t), z);
    }
  return build_polyhedron(std::move(v), {{0, 2, 1}, {3, 4, 5}, {0, 1, 4, 3}, {1, 2, 5, 4}, {2, 0, 3, 5}});
}

ConvexPolyhedron cuboctahedron() {
  std::vector<Vec3> v;
  for (int axis = 0; axis < 3; ++axis)
    for (double a : {-0.5, 0.5})
      for (double b : {-0.5, 0.5}) {
        Vec3 p = Vec3::Zero();
        p[(axis + 1) % 3] = a;
        p[(axis + 2) % 3] = b;
        v.push_back(p);
      }
  std::vector<Vec3> planes;
  for (int axis = 0; axis < 3; ++axis)
    for (double s : {-1.0, 1.0}) planes.push_back(s * Vec3::Unit(axis));
  for (int i = 0; i < 8; ++i)
    planes.push_back(Vec3(i & 1 ? 1 : -1, i & 2 ? 1 : -1, i & 4 ? 1 : -1).normalized());
  std::vector<FaceLoop> faces;
  for (const auto& n : planes) {
    double support = -1e300;
    for (const auto& p : v) support = std::max(support, n.dot(p));
    FaceLoop on;
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
      if (std::abs(n.dot(v[i]) - support) < 1e-12) on.push_back(i);
    faces.push_back(order_face_loop(v, on, n));
  }
  const Eigen::Matrix3d rot = Eigen::AngleAxisd(kPi / 4, Vec3::UnitZ()).toRotationMatrix();
  for (auto& p : v) p = rot * p;
  return build_polyhedron(std::move(v), std::move(faces));
}

}  // namespace shapes

}  // namespace polyscat
