#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "polyscat/farfield.hpp"
#include "polyscat/sphgrid.hpp"

namespace polyscat {

// Real orthonormal spherical harmonics without the Condon-Shortley phase:
//   Y_n^0 = P_n^0(cos t),  Y_n^m = sqrt2 P_n^m cos(m phi),  Y_n^-m = sqrt2 P_n^m sin(m phi)
// where P_n^m are the fully normalized associated Legendre functions.
inline int harmonic_index(int n, int m) { return n * n + n + m; }
inline int harmonic_count(int cutoff) { return (cutoff + 1) * (cutoff + 1); }

double eval_scalar_harmonic(int n, int m, const Vec3& xhat);
// All harmonics up to `cutoff`, laid out by harmonic_index().
std::vector<double> eval_scalar_harmonics(int cutoff, const Vec3& xhat);

struct VectorHarmonic {
  Vec3 u;  // Grad Y / sqrt(n(n+1))
  Vec3 v;  // xhat x u
};

// Tangential vector harmonics for n >= 1. Finite at the poles: the
// derivative terms use recurrences for dP/dtheta and P/sin(theta).
VectorHarmonic eval_vector_harmonics(int n, int m, const Vec3& xhat);

class HarmonicExpansion {
 public:
  HarmonicExpansion() = default;
  HarmonicExpansion(int cutoff, std::vector<double> coefficients);

  int cutoff() const { return cutoff_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  double coefficient(int n, int m) const { return coeffs_.at(harmonic_index(n, m)); }

  // Band-limited value sum c_n^m Y_n^m(xhat).
  double operator()(const Vec3& xhat) const;

 private:
  int cutoff_ = 0;
  std::vector<double> coeffs_{0.0};
};

// c_n^m = sum over grid points of w_i f_i Y_n^m(x_i) with the triangle
// vertex-average weights.
HarmonicExpansion sht_forward(const SphericalGrid& grid, std::span<const double> values, int cutoff);
// Uses the sample moduli (either kind).
HarmonicExpansion sht_forward(const FarFieldSamples& samples, int cutoff);

double synthesize(const HarmonicExpansion& expansion, const Vec3& xhat);

// Dump format: one "n m c" line per coefficient.
std::string format_expansion(const HarmonicExpansion& expansion);
HarmonicExpansion parse_expansion(const std::string& text);

}  // namespace polyscat
