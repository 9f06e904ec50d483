#include <doctest.h>

#include <cmath>
#include <set>

#include "polyscat/sphgrid.hpp"
#include "support.hpp"

using namespace polyscat;

namespace {

double spacing_ratio(const SphericalGrid& g) {
  const auto& p = g.points();
  double lo = 1e9, hi = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double nearest = 1e9;
    for (std::size_t j = 0; j < p.size(); ++j)
      if (j != i) nearest = std::min(nearest, angle_between(p[i], p[j]));
    lo = std::min(lo, nearest);
    hi = std::max(hi, nearest);
  }
  return hi / lo;
}

}  // namespace

TEST_CASE("smallest grid is a deltahedron") {
  const auto g = build_grid(12);
  CHECK(g.size() == 12);
  CHECK(g.triangles().size() == 20);
  std::set<std::pair<int, int>> edges;
  for (const auto& t : g.triangles())
    for (int k = 0; k < 3; ++k) edges.emplace(std::min(t[k], t[(k + 1) % 3]), std::max(t[k], t[(k + 1) % 3]));
  CHECK(12 - static_cast<int>(edges.size()) + 20 == 2);
  for (const auto& p : g.points()) CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("triangles cover the sphere") {
  for (int n : {12, 100, 2000, 7518}) {
    const auto g = build_grid(n);
    // Outward orientation: every triangle's normal points away from the origin.
    for (const auto& t : g.triangles()) {
      const Vec3 &a = g.points()[t[0]], &b = g.points()[t[1]], &c = g.points()[t[2]];
      REQUIRE((b - a).cross(c - a).dot(a + b + c) > 0.0);
    }
    CHECK(static_cast<int>(g.triangles().size()) == 2 * n - 4);
    double wsum = 0.0;
    for (double w : g.weights()) {
      REQUIRE(w > 0.0);
      wsum += w;
    }
    CHECK(wsum == doctest::Approx(g.total_area()).epsilon(1e-12));
  }
  const auto flat = build_grid(7518);
  CHECK(flat.total_area() < 4 * kPi);
  CHECK(std::abs(flat.total_area() - 4 * kPi) <= 0.02 * 4 * kPi);
  const auto sph = build_grid(2000, AreaMode::Spherical);
  CHECK(sph.area_mode() == AreaMode::Spherical);
  CHECK(std::abs(sph.total_area() - 4 * kPi) <= 1e-9);
}

TEST_CASE("near-uniform spacing") {
  for (int n : {12, 50, 500, 2000}) CHECK(spacing_ratio(build_grid(n)) <= 2.0);
}

TEST_CASE("grid construction errors and determinism") {
  CHECK_THROWS_AS(build_grid(11), Error);
  CHECK(build_grid(300).points() == build_grid(300).points());
  CHECK(make_grid(300)->triangles() == build_grid(300).triangles());
  // Octant triangle covers an eighth of the sphere.
  CHECK(spherical_triangle_area(Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()) == doctest::Approx(kPi / 2));
  const auto g = SphericalGrid::from_points(
      {{2, 0, 0}, {-1, 0, 0}, {0, 3, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -5}}, AreaMode::Spherical);
  CHECK(g.triangles().size() == 8);
  CHECK(g.total_area() == doctest::Approx(4 * kPi));
  for (double w : g.weights()) CHECK(w == doctest::Approx(4 * kPi / 6));
}
