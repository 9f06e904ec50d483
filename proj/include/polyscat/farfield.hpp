#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "polyscat/sphgrid.hpp"
#include "polyscat/types.hpp"

namespace polyscat {

// Incident plane wave E^i = p exp(ik d.x).
struct PlaneWave {
  Vec3 d = Vec3::UnitX();
  Vec3 p = Vec3::UnitZ();
  double k = 1.0;

  // Errors: InvalidInput unless |d| = |p| = 1, d.p = 0 (to 1e-12) and k > 0.
  static PlaneWave make(const Vec3& d, const Vec3& p, double k);
  static PlaneWave from_wavelength(const Vec3& d, const Vec3& p, double wavelength);

  double wavelength() const { return 2.0 * kPi / k; }
};

enum class FieldKind { Modulus, ComplexE, ComplexH };

const char* to_string(FieldKind kind);

// Far-field data on a grid. Exactly one of `moduli` (Modulus kind) or
// `fields` (complex kinds) is populated, one entry per grid point.
struct FarFieldSamples {
  GridPtr grid;
  PlaneWave wave;
  FieldKind kind = FieldKind::Modulus;
  std::vector<double> moduli;
  std::vector<CVec3> fields;

  bool is_complex() const { return kind != FieldKind::Modulus; }
  std::size_t size() const { return grid ? grid->size() : 0; }
  // Moduli of either kind.
  std::vector<double> magnitudes() const;
};

struct NoiseModel {
  double level = 0.0;  // relative level delta
  std::uint64_t seed = 1;
};

// Text format:
//   # kind=modulus|complex-E|complex-H
//   # k=<k> d=<dx dy dz> p=<px py pz>
//   x y z  v                              (modulus)
//   x y z  re1 im1 re2 im2 re3 im3        (complex)
std::string format_far_field(const FarFieldSamples& samples);
FarFieldSamples parse_far_field(const std::string& text, const std::string& source = "<string>",
                                AreaMode mode = AreaMode::Flat);
void write_far_field(const std::filesystem::path& path, const FarFieldSamples& samples);
FarFieldSamples read_far_field(const std::filesystem::path& path, AreaMode mode = AreaMode::Flat);

}  // namespace polyscat
