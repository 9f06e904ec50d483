#pragma once

#include <span>

#include "polyscat/farfield.hpp"
#include "polyscat/polyhedron.hpp"

namespace polyscat {

// Exact value of the surface integral of exp(i q.y) over a planar convex or
// simple polygon whose loop is counterclockwise about `normal`.
// Errors: DegenerateFace (fewer than 3 vertices or zero area).
cplx polygon_fourier_integral(std::span<const Vec3> vertices, const Vec3& normal, const Vec3& q);

struct FarFieldPair {
  CVec3 e;
  CVec3 h;
};

// Physical-optics far field of a PEC polyhedron: only front faces radiate.
FarFieldPair po_far_field(const ConvexPolyhedron& poly, const PlaneWave& wave, const Vec3& xhat);

FarFieldSamples sample_phaseless(const ConvexPolyhedron& poly, const PlaneWave& wave, GridPtr grid);
// kind must be ComplexE or ComplexH.
FarFieldSamples sample_far_field(const ConvexPolyhedron& poly, const PlaneWave& wave, GridPtr grid,
                                 FieldKind kind = FieldKind::ComplexE);

// Multiplies each value by exp(ik(d - xhat).z): the far field of the
// obstacle translated by z. Errors: WrongKind for modulus samples.
FarFieldSamples apply_translation_phase(const FarFieldSamples& samples, const Vec3& z);

// |E|(1 + delta r_j) with r_j standard normal drawn in grid order from the
// seeded generator; negative products clamp to 0. Errors: WrongKind.
FarFieldSamples add_noise(const FarFieldSamples& samples, const NoiseModel& noise);
// Same multiplicative factor applied to whole complex vectors.
FarFieldSamples add_noise_complex(const FarFieldSamples& samples, const NoiseModel& noise);

// Low-frequency stand-in for an obstacle at z0: the tangential dipole
// pattern p - (p.xhat)xhat (pure degree 1) carrying the translation phase.
FarFieldSamples dipole_far_field(const PlaneWave& wave, GridPtr grid, const Vec3& z0);

}  // namespace polyscat
