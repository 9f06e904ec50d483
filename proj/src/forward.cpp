#include "polyscat/forward.hpp"

#include <random>

#include "polyscat/parallel.hpp"

namespace polyscat {

namespace {

constexpr cplx kI{0.0, 1.0};

// Eigen conjugates complex cross products; this one does not.
CVec3 cross(const CVec3& a, const Vec3& b) {
  return {a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(), a.x() * b.y() - a.y() * b.x()};
}

// (exp(is) - 1) / (is), written as exp(is/2) sin(s/2)/(s/2) to avoid cancellation.
cplx edge_factor(double s) {
  const double h = 0.5 * s;
  double sinc;
  if (std::abs(h) < 1e-6) {
    const double h2 = h * h;
    sinc = 1.0 - h2 / 6.0 + h2 * h2 / 120.0;
  } else {
    sinc = std::sin(h) / h;
  }
  return std::polar(sinc, h);
}

// Integral of exp(i s(y)) over a triangle where s is affine with vertex
// values s1, s2, s3 and |s_i| < 1: 2|T| sum_n i^n h_n(s) / (n+2)!, with h_n
// the complete homogeneous symmetric polynomial.
cplx triangle_series(double area, double s1, double s2, double s3) {
  double h1 = 1.0, h2 = 1.0, h3 = 1.0;  // h_n of (s3), (s2,s3), (s1,s2,s3)
  double zpow = 1.0;
  cplx ipow = 1.0;
  double fact = 2.0;  // (n+2)!
  cplx sum = h3 / fact;
  for (int n = 1; n < 40; ++n) {
    zpow *= s3;
    h1 = zpow;
    h2 = h1 + s2 * h2;
    h3 = h2 + s1 * h3;
    ipow *= kI;
    fact *= (n + 2);
    const cplx term = ipow * (h3 / fact);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return 2.0 * area * sum;
}

}  // namespace

cplx polygon_fourier_integral(std::span<const Vec3> v, const Vec3& normal, const Vec3& q) {
  const std::size_t n = v.size();
  if (n < 3) throw Error(Errc::DegenerateFace, "polygon needs at least 3 vertices");
  const Vec3 nu = normal.normalized();

  Vec3 center = Vec3::Zero();
  for (const auto& p : v) center += p;
  center /= static_cast<double>(n);
  double radius = 0.0;
  double signed_area = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    radius = std::max(radius, (v[i] - center).norm());
    signed_area += 0.5 * (v[i] - center).cross(v[(i + 1) % n] - center).dot(nu);
  }
  if (!(std::abs(signed_area) >= 1e-12)) throw Error(Errc::DegenerateFace, "polygon has zero area");
  const double orientation = signed_area > 0 ? 1.0 : -1.0;

  const Vec3 qt = q - q.dot(nu) * nu;
  const double qt2 = qt.squaredNorm();
  if (std::sqrt(qt2) * radius < 1.0) {
    // Nearly constant phase on the face: Taylor series on the fan about the center.
    cplx sum = 0.0;
    const double sc = q.dot(center);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3& a = v[i];
      const Vec3& b = v[(i + 1) % n];
      const double area = 0.5 * (a - center).cross(b - center).dot(nu);
      sum += triangle_series(area, 0.0, q.dot(a) - sc, q.dot(b) - sc);
    }
    return orientation * std::polar(1.0, sc) * sum;
  }

  // Divergence theorem in the plane: the field F = -i q_t exp(i q.y)/|q_t|^2
  // has in-plane divergence exp(i q.y), so the face integral becomes a sum of
  // closed-form edge integrals.
  cplx sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& a = v[i];
    const Vec3& b = v[(i + 1) % n];
    const Vec3 edge = b - a;
    const double flux = qt.dot(edge.cross(nu));  // q_t . (outward edge normal) * length
    if (flux == 0.0) continue;
    sum += flux * std::polar(1.0, q.dot(a)) * edge_factor(q.dot(edge));
  }
  return orientation * (-kI) * sum / qt2;
}

FarFieldPair po_far_field(const ConvexPolyhedron& poly, const PlaneWave& wave, const Vec3& xhat) {
  const Vec3 dxp = wave.d.cross(wave.p);
  const Vec3 q = wave.k * (wave.d - xhat);
  CVec3 h = CVec3::Zero();
  for (std::size_t j = 0; j < poly.face_count(); ++j) {
    const Vec3& nu = poly.normals()[j];
    if (!(nu.dot(wave.d) < 0.0)) continue;
    const Vec3 amp = xhat.cross(nu.cross(dxp));
    const auto verts = poly.face_vertices(j);
    h += amp.cast<cplx>() * polygon_fourier_integral(verts, nu, q);
  }
  h *= kI * wave.k / (2.0 * kPi);
  const CVec3 e = cross(h, xhat);
  return {e, h};
}

FarFieldSamples sample_phaseless(const ConvexPolyhedron& poly, const PlaneWave& wave, GridPtr grid) {
  FarFieldSamples s;
  s.grid = grid;
  s.wave = wave;
  s.kind = FieldKind::Modulus;
  s.moduli.assign(grid->size(), 0.0);
  const auto& pts = grid->points();
  parallel_for(grid->size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) s.moduli[i] = po_far_field(poly, wave, pts[i]).e.norm();
  });
  return s;
}

FarFieldSamples sample_far_field(const ConvexPolyhedron& poly, const PlaneWave& wave, GridPtr grid,
                                 FieldKind kind) {
  if (kind == FieldKind::Modulus) throw Error(Errc::WrongKind, "use sample_phaseless for moduli");
  FarFieldSamples s;
  s.grid = grid;
  s.wave = wave;
  s.kind = kind;
  s.fields.assign(grid->size(), CVec3::Zero());
  const auto& pts = grid->points();
  parallel_for(grid->size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto ff = po_far_field(poly, wave, pts[i]);
      s.fields[i] = kind == FieldKind::ComplexE ? ff.e : ff.h;
    }
  });
  return s;
}

FarFieldSamples apply_translation_phase(const FarFieldSamples& samples, const Vec3& z) {
  if (!samples.is_complex()) throw Error(Errc::WrongKind, "translation needs complex samples");
  FarFieldSamples out = samples;
  const auto& pts = samples.grid->points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    out.fields[i] *= std::polar(1.0, samples.wave.k * (samples.wave.d - pts[i]).dot(z));
  return out;
}

namespace {
std::vector<double> noise_factors(std::size_t n, const NoiseModel& noise) {
  if (!(noise.level >= 0.0)) throw Error(Errc::InvalidInput, "noise level must be nonnegative");
  std::vector<double> f(n, 1.0);
  if (noise.level == 0.0) return f;
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& x : f) x = std::max(0.0, 1.0 + noise.level * normal(rng));
  return f;
}
}  // namespace

FarFieldSamples add_noise(const FarFieldSamples& samples, const NoiseModel& noise) {
  if (samples.is_complex()) throw Error(Errc::WrongKind, "add_noise expects modulus samples");
  FarFieldSamples out = samples;
  const auto f = noise_factors(out.moduli.size(), noise);
  for (std::size_t i = 0; i < f.size(); ++i) out.moduli[i] *= f[i];
  return out;
}

FarFieldSamples add_noise_complex(const FarFieldSamples& samples, const NoiseModel& noise) {
  if (!samples.is_complex()) throw Error(Errc::WrongKind, "add_noise_complex expects complex samples");
  FarFieldSamples out = samples;
  const auto f = noise_factors(out.fields.size(), noise);
  for (std::size_t i = 0; i < f.size(); ++i) out.fields[i] *= f[i];
  return out;
}

FarFieldSamples dipole_far_field(const PlaneWave& wave, GridPtr grid, const Vec3& z0) {
  FarFieldSamples s;
  s.grid = grid;
  s.wave = wave;
  s.kind = FieldKind::ComplexE;
  const auto& pts = grid->points();
  s.fields.reserve(pts.size());
  for (const auto& x : pts) {
    const Vec3 tangential = wave.p - wave.p.dot(x) * x;
    s.fields.push_back(tangential.cast<cplx>() * std::polar(1.0, wave.k * (wave.d - x).dot(z0)));
  }
  return s;
}

}  // namespace polyscat
