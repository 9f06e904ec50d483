#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "polyscat/farfield.hpp"

namespace polyscat {

// Axis-aligned search box with a coarse scan resolution per axis.
struct SampleRegion {
  Vec3 lower = Vec3::Zero();
  Vec3 upper = Vec3::Constant(100.0);
  std::array<int, 3> points{11, 11, 11};

  // Errors: InvalidInput unless lower < upper and points >= 2 on every axis.
  void validate() const;
  Vec3 node(int i, int j, int l) const;
};

enum class Polarity { Maximize, Minimize };

const char* to_string(Polarity polarity);
Polarity parse_polarity(const std::string& text);

// Normalized energy of the complex far field projected onto the six
// phase-translated degree-1 tangential harmonics. Samples are preprocessed
// once; each evaluation is O(N).
class Indicator {
 public:
  // Errors: WrongKind (modulus samples), ZeroField (||E|| < 1e-14).
  explicit Indicator(const FarFieldSamples& samples);

  double operator()(const Vec3& z) const;
  double field_norm() const { return std::sqrt(norm2_); }

 private:
  std::vector<Vec3> phase_dir_;                  // k (d - xhat_i)
  std::vector<std::array<cplx, 6>> projections_; // w_i E_i . B_b(xhat_i)
  double norm2_ = 0.0;
};

double indicator_value(const FarFieldSamples& samples, const Vec3& z);

struct ScanPoint {
  Vec3 z;
  double value = 0.0;
};

struct LocateResult {
  Vec3 location = Vec3::Zero();
  double value = 0.0;
  std::vector<ScanPoint> scan;  // coarse grid, x fastest
  int refinement_steps = 0;
};

// Coarse scan of the region followed by a clamped compass search from the
// best node, halving the step down to 1e-3.
LocateResult locate(const FarFieldSamples& samples, const SampleRegion& region,
                    Polarity polarity = Polarity::Maximize);
LocateResult locate(const Indicator& indicator, const SampleRegion& region,
                    Polarity polarity = Polarity::Maximize);

// "z_x z_y z_z value" per scan node.
std::string format_scan(const LocateResult& result);

}  // namespace polyscat
