#pragma once

#include <span>
#include <string>
#include <vector>

#include "polyscat/harmonics.hpp"

namespace polyscat {

struct Peak {
  Vec3 direction;
  double value = 0.0;
};

// Local maxima of the smoothed phaseless pattern for one incident wave,
// sorted by descending value.
struct PeakSet {
  std::vector<Peak> peaks;
  Vec3 incident = Vec3::UnitX();
  double wavelength = 1.0;
};

struct RecoveryThresholds {
  double e_tol = 0.5;                        // minimum peak value
  double sigma = 0.3;                        // exclusion radius about d (radians)
  double cluster_angle = 15.0 * kPi / 180;   // effective-normal clustering (radians)
  int cutoff = 10;                           // spherical harmonic cut-off degree
  int starts_theta = 5;                      // multistart mesh over [0,pi] x [0,2pi]
  int starts_phi = 11;

  void validate() const;
};

// Peak-value threshold min_j |C_j| min_n |d_n . nu_j| / wavelength from
// a-priori bounds on face area and obliquity.
double peak_threshold_from_priors(double min_area, double min_obliquity, double wavelength);

struct PeakSearchDiagnostics {
  int starts = 0;
  int converged = 0;
  int failed = 0;  // starts dropped for non-convergence
  int distinct = 0;
};

// Multistart Nelder-Mead ascent of the band-limited expansion. Converged
// points closer than 1 degree are merged, keeping the higher value.
PeakSet find_local_maxima(const HarmonicExpansion& expansion, const RecoveryThresholds& thresholds,
                          const Vec3& incident, double wavelength, PeakSearchDiagnostics* diagnostics = nullptr);

// Drops peaks within sigma of d, below e_tol, or whose normal would not face d.
PeakSet select_critical_directions(const PeakSet& peaks, const RecoveryThresholds& thresholds);

struct FaceEstimate {
  Vec3 normal;
  double area = 0.0;
};

// Specular inversion nu = (x - d)/sqrt(2(1 - x.d)) and the peak law
// area = wavelength * value / |d . nu|.
// Errors: DegenerateDirection (x.d >= 1 - 1e-12), GrazingNormal (|d . nu| < 1e-6).
FaceEstimate normal_and_area_from_peak(const Vec3& xhat, double value, const Vec3& incident, double wavelength);

// Specular direction d - 2(d.nu)nu of a face seen from d.
Vec3 critical_direction(const Vec3& incident, const Vec3& normal);

struct RecoveredFace {
  Vec3 normal;
  double area = 0.0;
  double peak_value = 0.0;
  std::size_t source = 0;  // incident-direction index
  Vec3 direction;          // critical observation direction
};

struct RecoveredFaceSet {
  std::vector<RecoveredFace> entries;
};

// Converts selected peaks of incident direction `source` to face entries.
std::vector<RecoveredFace> faces_from_peaks(const PeakSet& critical, std::size_t source);

// Greedy clustering by angle in order of descending peak value; each
// cluster is represented by its strongest entry.
RecoveredFaceSet cluster_effective_normals(std::span<const RecoveredFace> entries, double cluster_angle);

// Rows "source_d_index,nu_x,nu_y,nu_z,peak_value,area" with a header line.
std::string format_face_table(std::span<const RecoveredFace> entries);

}  // namespace polyscat
