#include "polyscat/locator.hpp"

#include <algorithm>
#include <cmath>

#include "polyscat/harmonics.hpp"
#include "polyscat/parallel.hpp"
#include "polyscat/text_io.hpp"

namespace polyscat {

void SampleRegion::validate() const {
  for (int a = 0; a < 3; ++a) {
    if (!(std::isfinite(lower[a]) && std::isfinite(upper[a]) && lower[a] < upper[a]))
      throw Error(Errc::InvalidInput, "sample region bounds must satisfy lower < upper");
    if (points[a] < 2) throw Error(Errc::InvalidInput, "sample region needs at least 2 points per axis");
  }
}

Vec3 SampleRegion::node(int i, int j, int l) const {
  const std::array<int, 3> idx{i, j, l};
  Vec3 z;
  for (int a = 0; a < 3; ++a)
    z[a] = lower[a] + (upper[a] - lower[a]) * static_cast<double>(idx[a]) / (points[a] - 1);
  return z;
}

const char* to_string(Polarity polarity) { return polarity == Polarity::Maximize ? "max" : "min"; }

Polarity parse_polarity(const std::string& text) {
  if (text == "max" || text == "maximize") return Polarity::Maximize;
  if (text == "min" || text == "minimize") return Polarity::Minimize;
  throw Error(Errc::Config, "polarity must be max or min, got '" + text + "'");
}

Indicator::Indicator(const FarFieldSamples& samples) {
  if (!samples.is_complex()) throw Error(Errc::WrongKind, "indicator needs complex far-field samples");
  const auto& grid = *samples.grid;
  const std::size_t n = grid.size();
  phase_dir_.resize(n);
  projections_.resize(n);
  const Vec3 d = samples.wave.d;
  const double k = samples.wave.k;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& x = grid.points()[i];
    const double w = grid.weights()[i];
    const CVec3& e = samples.fields[i];
    phase_dir_[i] = k * (d - x);
    norm2_ += w * e.squaredNorm();
    for (int m = -1; m <= 1; ++m) {
      const VectorHarmonic vh = eval_vector_harmonics(1, m, x);
      projections_[i][m + 1] = w * vh.u.cast<cplx>().dot(e);
      projections_[i][m + 4] = w * vh.v.cast<cplx>().dot(e);
    }
  }
  if (!(std::sqrt(norm2_) >= 1e-14)) throw Error(Errc::ZeroField, "far field norm below 1e-14");
}

double Indicator::operator()(const Vec3& z) const {
  std::array<cplx, 6> acc{};
  for (std::size_t i = 0; i < phase_dir_.size(); ++i) {
    const double t = -phase_dir_[i].dot(z);
    const cplx ph(std::cos(t), std::sin(t));
    for (int b = 0; b < 6; ++b) acc[b] += projections_[i][b] * ph;
  }
  double s = 0.0;
  for (const auto& a : acc) s += std::norm(a);
  return s / norm2_;
}

double indicator_value(const FarFieldSamples& samples, const Vec3& z) { return Indicator(samples)(z); }

LocateResult locate(const FarFieldSamples& samples, const SampleRegion& region, Polarity polarity) {
  return locate(Indicator(samples), region, polarity);
}

LocateResult locate(const Indicator& indicator, const SampleRegion& region, Polarity polarity) {
  region.validate();
  const double sign = polarity == Polarity::Maximize ? 1.0 : -1.0;
  const auto& np = region.points;
  const std::size_t total = static_cast<std::size_t>(np[0]) * np[1] * np[2];

  LocateResult res;
  res.scan.resize(total);
  parallel_for(total, [&](std::size_t b, std::size_t e) {
    for (std::size_t idx = b; idx < e; ++idx) {
      const int i = static_cast<int>(idx % np[0]);
      const int j = static_cast<int>((idx / np[0]) % np[1]);
      const int l = static_cast<int>(idx / (static_cast<std::size_t>(np[0]) * np[1]));
      const Vec3 z = region.node(i, j, l);
      res.scan[idx] = {z, indicator(z)};
    }
  });

  std::size_t best = 0;
  for (std::size_t idx = 1; idx < total; ++idx)
    if (sign * res.scan[idx].value > sign * res.scan[best].value) best = idx;

  Vec3 z = res.scan[best].z;
  double fz = res.scan[best].value;
  Vec3 step;
  for (int a = 0; a < 3; ++a) step[a] = (region.upper[a] - region.lower[a]) / (np[a] - 1) / 2.0;
  while (step.maxCoeff() >= 1e-3) {
    bool moved = false;
    for (int a = 0; a < 3 && !moved; ++a) {
      for (double dir : {1.0, -1.0}) {
        Vec3 trial = z;
        trial[a] = std::clamp(trial[a] + dir * step[a], region.lower[a], region.upper[a]);
        if (trial == z) continue;
        const double ft = indicator(trial);
        ++res.refinement_steps;
        if (sign * ft > sign * fz) {
          z = trial;
          fz = ft;
          moved = true;
          break;
        }
      }
    }
    if (!moved) step /= 2.0;
  }
  res.location = z;
  res.value = fz;
  return res;
}

std::string format_scan(const LocateResult& result) {
  std::string out = "# z_x z_y z_z value\n";
  for (const auto& p : result.scan) out += text::format_vec(p.z) + " " + text::format_double(p.value) + "\n";
  return out;
}

}  // namespace polyscat
