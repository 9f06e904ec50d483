#include "polyscat/convex_hull.hpp"

#include <algorithm>
#include <unordered_map>

namespace polyscat {

namespace {

struct Face {
  std::array<int, 3> v{};
  std::array<int, 3> nb{-1, -1, -1};  // neighbor across edge (v[i], v[i+1])
  Vec3 normal = Vec3::Zero();
  double offset = 0.0;
  std::vector<int> outside;
  bool alive = true;
  int visible_round = -1;
  int hidden_round = -1;
};

class Quickhull {
 public:
  Quickhull(std::span<const Vec3> pts, double rel_eps) : pts_(pts) {
    double scale = 0.0;
    for (const auto& p : pts_) scale = std::max(scale, p.cwiseAbs().maxCoeff());
    eps_ = rel_eps * std::max(scale, 1e-300) * 3.0;
  }

  std::vector<std::array<int, 3>> run() {
    build_simplex();
    for (std::size_t i = 0; i < faces_.size(); ++i) {
      if (faces_[i].alive && !faces_[i].outside.empty()) expand(static_cast<int>(i));
    }
    std::vector<std::array<int, 3>> out;
    for (const auto& f : faces_)
      if (f.alive) out.push_back(f.v);
    return out;
  }

 private:
  double dist(const Face& f, int p) const { return f.normal.dot(pts_[p]) - f.offset; }

  void set_plane(Face& f) const {
    const Vec3& a = pts_[f.v[0]];
    Vec3 n = (pts_[f.v[1]] - a).cross(pts_[f.v[2]] - a);
    const double len = n.norm();
    f.normal = len > 0 ? Vec3(n / len) : Vec3::Zero();
    f.offset = f.normal.dot(a);
  }

  void build_simplex() {
    const int n = static_cast<int>(pts_.size());
    if (n < 4) throw Error(Errc::InvalidInput, "convex hull needs at least 4 points");
    int i0 = 0;
    for (int i = 1; i < n; ++i)
      if (pts_[i].x() < pts_[i0].x()) i0 = i;
    int i1 = i0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      const double d = (pts_[i] - pts_[i0]).squaredNorm();
      if (d > best) best = d, i1 = i;
    }
    const Vec3 axis = (pts_[i1] - pts_[i0]).normalized();
    int i2 = i0;
    best = -1.0;
    for (int i = 0; i < n; ++i) {
      const Vec3 r = pts_[i] - pts_[i0];
      const double d = (r - r.dot(axis) * axis).squaredNorm();
      if (d > best) best = d, i2 = i;
    }
    if (std::sqrt(best) <= eps_) throw Error(Errc::InvalidInput, "points are collinear");
    const Vec3 pn = (pts_[i1] - pts_[i0]).cross(pts_[i2] - pts_[i0]).normalized();
    int i3 = i0;
    best = -1.0;
    for (int i = 0; i < n; ++i) {
      const double d = std::abs(pn.dot(pts_[i] - pts_[i0]));
      if (d > best) best = d, i3 = i;
    }
    if (best <= eps_) throw Error(Errc::InvalidInput, "points are coplanar");

    const std::array<int, 4> s{i0, i1, i2, i3};
    // Face k omits vertex s[k]; orient so that the omitted vertex is behind.
    for (int k = 0; k < 4; ++k) {
      Face f;
      int m = 0;
      for (int j = 0; j < 4; ++j)
        if (j != k) f.v[m++] = s[j];
      set_plane(f);
      if (dist(f, s[k]) > 0) {
        std::swap(f.v[1], f.v[2]);
        set_plane(f);
      }
      faces_.push_back(std::move(f));
    }
    std::unordered_map<long long, int> edge_owner;
    auto key = [n](int a, int b) { return static_cast<long long>(a) * n + b; };
    for (int fi = 0; fi < 4; ++fi)
      for (int e = 0; e < 3; ++e) edge_owner[key(faces_[fi].v[e], faces_[fi].v[(e + 1) % 3])] = fi;
    for (int fi = 0; fi < 4; ++fi)
      for (int e = 0; e < 3; ++e)
        faces_[fi].nb[e] = edge_owner.at(key(faces_[fi].v[(e + 1) % 3], faces_[fi].v[e]));

    for (int i = 0; i < n; ++i) {
      if (std::find(s.begin(), s.end(), i) != s.end()) continue;
      assign(i, 0, 4);
    }
  }

  // Puts point p in the outside set of the face in [first, last) it is
  // farthest above, if any.
  void assign(int p, std::size_t first, std::size_t last) {
    int best_face = -1;
    double best = eps_;
    for (std::size_t fi = first; fi < last; ++fi) {
      if (!faces_[fi].alive) continue;
      const double d = dist(faces_[fi], p);
      if (d > best) best = d, best_face = static_cast<int>(fi);
    }
    if (best_face >= 0) faces_[best_face].outside.push_back(p);
  }

  struct HorizonEdge {
    int a, b, hidden;
  };

  void expand(int start) {
    ++round_;
    const Face& sf = faces_[start];
    int eye = sf.outside.front();
    double far = dist(sf, eye);
    for (int p : sf.outside) {
      const double d = dist(sf, p);
      if (d > far) far = d, eye = p;
    }

    std::vector<int> visible{start};
    faces_[start].visible_round = round_;
    std::vector<HorizonEdge> horizon;
    for (std::size_t q = 0; q < visible.size(); ++q) {
      const int fi = visible[q];
      for (int e = 0; e < 3; ++e) {
        const int nb = faces_[fi].nb[e];
        Face& nf = faces_[nb];
        if (nf.visible_round == round_) continue;
        if (nf.hidden_round != round_) {
          if (dist(nf, eye) > eps_) {
            nf.visible_round = round_;
            visible.push_back(nb);
            continue;
          }
          nf.hidden_round = round_;
        }
        horizon.push_back({faces_[fi].v[e], faces_[fi].v[(e + 1) % 3], nb});
      }
    }

    const std::size_t first_new = faces_.size();
    std::unordered_map<int, int> by_start, by_end;
    for (const auto& h : horizon) {
      Face f;
      f.v = {h.a, h.b, eye};
      set_plane(f);
      f.nb[0] = h.hidden;
      const int id = static_cast<int>(faces_.size());
      Face& hidden = faces_[h.hidden];
      for (int e = 0; e < 3; ++e)
        if (hidden.v[e] == h.b && hidden.v[(e + 1) % 3] == h.a) hidden.nb[e] = id;
      by_start[h.a] = id;
      by_end[h.b] = id;
      faces_.push_back(std::move(f));
    }
    for (std::size_t fi = first_new; fi < faces_.size(); ++fi) {
      Face& f = faces_[fi];
      auto s = by_start.find(f.v[1]);
      auto e = by_end.find(f.v[0]);
      if (s == by_start.end() || e == by_end.end())
        throw Error(Errc::InvalidInput, "convex hull horizon is not a simple cycle");
      f.nb[1] = s->second;
      f.nb[2] = e->second;
    }

    std::vector<int> orphans;
    for (int fi : visible) {
      Face& f = faces_[fi];
      f.alive = false;
      for (int p : f.outside)
        if (p != eye) orphans.push_back(p);
      f.outside.clear();
      f.outside.shrink_to_fit();
    }
    for (int p : orphans) assign(p, first_new, faces_.size());
  }

  std::span<const Vec3> pts_;
  double eps_ = 0.0;
  int round_ = 0;
  std::vector<Face> faces_;
};

}  // namespace

std::vector<std::array<int, 3>> convex_hull(std::span<const Vec3> points, double rel_eps) {
  return Quickhull(points, rel_eps).run();
}

}  // namespace polyscat
