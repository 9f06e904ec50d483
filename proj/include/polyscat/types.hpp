#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace polyscat {

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

enum class Errc {
  NonPlanarFace,
  NotConvex,
  DegenerateFace,
  InvalidInput,
  Unbounded,
  EmptyInterior,
  WrongKind,
  ZeroField,
  DegenerateDirection,
  GrazingNormal,
  SpanDeficient,
  Parse,
  Config,
  Io,
};

const char* to_string(Errc code) noexcept;

// Single exception type for the library; the code identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Angle between two (not necessarily unit) vectors, robust near 0 and pi.
inline double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace polyscat
