#include "polyscat/maxima.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "polyscat/text_io.hpp"

namespace polyscat {

void RecoveryThresholds::validate() const {
  if (!(e_tol >= 0.0) || !(sigma >= 0.0) || !(cluster_angle >= 0.0))
    throw Error(Errc::InvalidInput, "recovery thresholds must be nonnegative");
  if (cutoff < 0) throw Error(Errc::InvalidInput, "cutoff must be nonnegative");
  if (starts_theta < 1 || starts_phi < 1) throw Error(Errc::InvalidInput, "multistart mesh must be non-empty");
}

double peak_threshold_from_priors(double min_area, double min_obliquity, double wavelength) {
  return min_area * min_obliquity / wavelength;
}

namespace {

constexpr double kDedupAngle = kPi / 180.0;

struct AscentResult {
  Vec3 direction;
  double value;
  bool converged;
};

// Nelder-Mead on -f in a tangent-plane chart x(u, v) = normalize(x0 + u e1 + v e2),
// re-centered whenever the iterate drifts far from the chart origin.
AscentResult ascend(const HarmonicExpansion& f, Vec3 x0) {
  using P = std::array<double, 2>;
  constexpr int kMaxIterations = 4000;
  constexpr int kMaxCharts = 20;
  double step = 0.15;
  int iterations = 0;
  for (int chart = 0; chart < kMaxCharts; ++chart) {
    const Vec3 e1 = x0.unitOrthogonal();
    const Vec3 e2 = x0.cross(e1);
    auto at = [&](const P& p) { return Vec3((x0 + p[0] * e1 + p[1] * e2).normalized()); };
    auto cost = [&](const P& p) { return -f(at(p)); };

    std::array<P, 3> s{P{0, 0}, P{step, 0}, P{0, step}};
    std::array<double, 3> c{cost(s[0]), cost(s[1]), cost(s[2])};
    bool recenter = false;
    while (iterations++ < kMaxIterations) {
      std::array<int, 3> order{0, 1, 2};
      std::sort(order.begin(), order.end(), [&](int a, int b) { return c[a] < c[b]; });
      const int best = order[0], mid = order[1], worst = order[2];
      const double size = std::max(std::hypot(s[mid][0] - s[best][0], s[mid][1] - s[best][1]),
                                   std::hypot(s[worst][0] - s[best][0], s[worst][1] - s[best][1]));
      const double spread = c[worst] - c[best];
      if (size < 1e-10 || spread <= 1e-15 * (1.0 + std::abs(c[best]))) return {at(s[best]), -c[best], true};
      if (std::hypot(s[best][0], s[best][1]) > 0.5) {
        x0 = at(s[best]);
        step = std::max(size, 1e-3);
        recenter = true;
        break;
      }
      const P centroid{0.5 * (s[best][0] + s[mid][0]), 0.5 * (s[best][1] + s[mid][1])};
      auto along = [&](double t) {
        return P{centroid[0] + t * (s[worst][0] - centroid[0]), centroid[1] + t * (s[worst][1] - centroid[1])};
      };
      const P r = along(-1.0);
      const double cr = cost(r);
      if (cr < c[best]) {
        const P e = along(-2.0);
        const double ce = cost(e);
        if (ce < cr) s[worst] = e, c[worst] = ce;
        else s[worst] = r, c[worst] = cr;
      } else if (cr < c[mid]) {
        s[worst] = r, c[worst] = cr;
      } else {
        const bool outside = cr < c[worst];
        const P k = along(outside ? -0.5 : 0.5);
        const double ck = cost(k);
        if (ck <= (outside ? cr : c[worst])) {
          s[worst] = k, c[worst] = ck;
        } else {
          for (int i : {mid, worst}) {
            s[i] = P{0.5 * (s[i][0] + s[best][0]), 0.5 * (s[i][1] + s[best][1])};
            c[i] = cost(s[i]);
          }
        }
      }
    }
    if (!recenter) break;
  }
  return {x0, f(x0), false};
}

}  // namespace

PeakSet find_local_maxima(const HarmonicExpansion& expansion, const RecoveryThresholds& thresholds,
                          const Vec3& incident, double wavelength, PeakSearchDiagnostics* diagnostics) {
  thresholds.validate();
  PeakSearchDiagnostics diag;
  std::vector<Peak> found;
  for (int i = 0; i < thresholds.starts_theta; ++i) {
    const double theta = thresholds.starts_theta == 1 ? kPi / 2 : kPi * i / (thresholds.starts_theta - 1);
    for (int j = 0; j < thresholds.starts_phi; ++j) {
      const double phi = thresholds.starts_phi == 1 ? 0.0 : 2 * kPi * j / (thresholds.starts_phi - 1);
      const Vec3 start(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
      ++diag.starts;
      const auto r = ascend(expansion, start);
      if (!r.converged) {
        ++diag.failed;
        continue;
      }
      ++diag.converged;
      found.push_back({r.direction.normalized(), r.value});
    }
  }
  std::stable_sort(found.begin(), found.end(), [](const Peak& a, const Peak& b) { return a.value > b.value; });
  PeakSet out;
  out.incident = incident;
  out.wavelength = wavelength;
  for (const auto& p : found) {
    const bool duplicate = std::any_of(out.peaks.begin(), out.peaks.end(), [&](const Peak& q) {
      return angle_between(p.direction, q.direction) < kDedupAngle;
    });
    if (!duplicate) out.peaks.push_back(p);
  }
  diag.distinct = static_cast<int>(out.peaks.size());
  if (diagnostics) *diagnostics = diag;
  return out;
}

PeakSet select_critical_directions(const PeakSet& peaks, const RecoveryThresholds& thresholds) {
  PeakSet out;
  out.incident = peaks.incident;
  out.wavelength = peaks.wavelength;
  const Vec3& d = peaks.incident;
  for (const auto& p : peaks.peaks) {
    const double dist = angle_between(p.direction, d);
    if (dist < thresholds.sigma || dist == 0.0) continue;
    if (p.value < thresholds.e_tol) continue;
    if (p.direction.dot(d) >= 1.0 - 1e-12) continue;
    const Vec3 nu = (p.direction - d) / std::sqrt(2.0 * (1.0 - p.direction.dot(d)));
    if (nu.dot(d) >= 0.0) continue;
    out.peaks.push_back(p);
  }
  return out;
}

FaceEstimate normal_and_area_from_peak(const Vec3& xhat, double value, const Vec3& incident, double wavelength) {
  const double c = xhat.dot(incident);
  if (c >= 1.0 - 1e-12) throw Error(Errc::DegenerateDirection, "peak coincides with the incident direction");
  const Vec3 nu = ((xhat - incident) / std::sqrt(2.0 * (1.0 - c))).normalized();
  const double obliquity = std::abs(incident.dot(nu));
  if (obliquity < 1e-6) throw Error(Errc::GrazingNormal, "face is parallel to the incident direction");
  return {nu, wavelength * value / obliquity};
}

Vec3 critical_direction(const Vec3& incident, const Vec3& normal) {
  return incident - 2.0 * incident.dot(normal) * normal;
}

std::vector<RecoveredFace> faces_from_peaks(const PeakSet& critical, std::size_t source) {
  std::vector<RecoveredFace> out;
  for (const auto& p : critical.peaks) {
    const auto est = normal_and_area_from_peak(p.direction, p.value, critical.incident, critical.wavelength);
    out.push_back({est.normal, est.area, p.value, source, p.direction});
  }
  return out;
}

RecoveredFaceSet cluster_effective_normals(std::span<const RecoveredFace> entries, double cluster_angle) {
  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return entries[a].peak_value > entries[b].peak_value; });
  RecoveredFaceSet out;
  for (std::size_t i : order) {
    const auto& e = entries[i];
    const bool joined = std::any_of(out.entries.begin(), out.entries.end(), [&](const RecoveredFace& rep) {
      return angle_between(rep.normal, e.normal) < cluster_angle;
    });
    if (!joined) out.entries.push_back(e);
  }
  return out;
}

std::string format_face_table(std::span<const RecoveredFace> entries) {
  std::string out = "source_d_index,nu_x,nu_y,nu_z,peak_value,area\n";
  for (const auto& e : entries)
    out += std::to_string(e.source + 1) + "," + text::format_vec(e.normal, ',') + "," +
           text::format_double(e.peak_value) + "," + text::format_double(e.area) + "\n";
  return out;
}

}  // namespace polyscat
