#include "polyscat/harmonics.hpp"

#include <cmath>
#include <sstream>

#include "polyscat/text_io.hpp"

namespace polyscat {

namespace {

inline int tri(int n, int m) { return n * (n + 1) / 2 + m; }

// Fully normalized associated Legendre values P (with 1/sqrt(4 pi)), plus
// Q = P / sin(theta) for m >= 1 and dP/dtheta when requested.
struct LegendreTable {
  int cutoff;
  std::vector<double> p, q, dp;

  LegendreTable(int nmax, double ct, double st, bool derivatives) : cutoff(nmax) {
    const int size = tri(nmax + 1, 0);
    p.assign(size, 0.0);
    if (derivatives) q.assign(size, 0.0);
    p[0] = 1.0 / std::sqrt(4.0 * kPi);
    for (int m = 1; m <= nmax; ++m) {
      const double f = std::sqrt((2.0 * m + 1.0) / (2.0 * m));
      p[tri(m, m)] = f * st * p[tri(m - 1, m - 1)];
      if (derivatives) q[tri(m, m)] = f * p[tri(m - 1, m - 1)];
    }
    for (int m = 0; m <= nmax; ++m) {
      if (m + 1 <= nmax) {
        const double f = std::sqrt(2.0 * m + 3.0) * ct;
        p[tri(m + 1, m)] = f * p[tri(m, m)];
        if (derivatives && m >= 1) q[tri(m + 1, m)] = f * q[tri(m, m)];
      }
      for (int n = m + 2; n <= nmax; ++n) {
        const double nn = n, mm = m;
        const double a = std::sqrt((4.0 * nn * nn - 1.0) / (nn * nn - mm * mm));
        const double b = std::sqrt(((nn - 1) * (nn - 1) - mm * mm) / (4.0 * (nn - 1) * (nn - 1) - 1.0));
        p[tri(n, m)] = a * (ct * p[tri(n - 1, m)] - b * p[tri(n - 2, m)]);
        if (derivatives && m >= 1) q[tri(n, m)] = a * (ct * q[tri(n - 1, m)] - b * q[tri(n - 2, m)]);
      }
    }
    if (!derivatives) return;
    dp.assign(size, 0.0);
    for (int n = 1; n <= nmax; ++n) {
      dp[tri(n, 0)] = -std::sqrt(n * (n + 1.0)) * p[tri(n, 1)];
      for (int m = 1; m <= n; ++m) {
        const double lower = std::sqrt((n + m) * (n - m + 1.0)) * p[tri(n, m - 1)];
        const double upper = m < n ? std::sqrt((n + m + 1.0) * (n - m)) * p[tri(n, m + 1)] : 0.0;
        dp[tri(n, m)] = 0.5 * (lower - upper);
      }
    }
  }
};

struct SphericalFrame {
  double ct, st, cphi, sphi;
  explicit SphericalFrame(const Vec3& x) {
    const Vec3 u = x.normalized();
    st = std::hypot(u.x(), u.y());
    ct = u.z();
    if (st > 0.0) {
      cphi = u.x() / st;
      sphi = u.y() / st;
    } else {
      cphi = 1.0;
      sphi = 0.0;
    }
  }
};

void check_degree(int n, int m) {
  if (n < 0 || std::abs(m) > n) throw Error(Errc::InvalidInput, "harmonic needs n >= 0 and |m| <= n");
}

}  // namespace

std::vector<double> eval_scalar_harmonics(int cutoff, const Vec3& xhat) {
  if (cutoff < 0) throw Error(Errc::InvalidInput, "negative cutoff");
  const SphericalFrame f(xhat);
  const LegendreTable leg(cutoff, f.ct, f.st, false);
  std::vector<double> out(harmonic_count(cutoff));
  const double sqrt2 = std::sqrt(2.0);
  double cm = 1.0, sm = 0.0;  // cos(m phi), sin(m phi)
  for (int m = 0; m <= cutoff; ++m) {
    if (m > 0) {
      const double c = cm * f.cphi - sm * f.sphi;
      sm = sm * f.cphi + cm * f.sphi;
      cm = c;
    }
    for (int n = m; n <= cutoff; ++n) {
      const double pnm = leg.p[tri(n, m)];
      if (m == 0) {
        out[harmonic_index(n, 0)] = pnm;
      } else {
        out[harmonic_index(n, m)] = sqrt2 * pnm * cm;
        out[harmonic_index(n, -m)] = sqrt2 * pnm * sm;
      }
    }
  }
  return out;
}

double eval_scalar_harmonic(int n, int m, const Vec3& xhat) {
  check_degree(n, m);
  return eval_scalar_harmonics(n, xhat)[harmonic_index(n, m)];
}

VectorHarmonic eval_vector_harmonics(int n, int m, const Vec3& xhat) {
  check_degree(n, m);
  if (n < 1) throw Error(Errc::InvalidInput, "vector harmonics start at degree 1");
  const Vec3 x = xhat.normalized();
  const SphericalFrame f(x);
  const LegendreTable leg(n, f.ct, f.st, true);
  const int am = std::abs(m);
  const double mphi = std::atan2(f.sphi, f.cphi) * am;
  double d_theta, d_phi;  // dY/dtheta and (1/sin theta) dY/dphi
  if (m == 0) {
    d_theta = leg.dp[tri(n, 0)];
    d_phi = 0.0;
  } else {
    const double s2 = std::sqrt(2.0);
    if (m > 0) {
      d_theta = s2 * leg.dp[tri(n, am)] * std::cos(mphi);
      d_phi = -s2 * am * leg.q[tri(n, am)] * std::sin(mphi);
    } else {
      d_theta = s2 * leg.dp[tri(n, am)] * std::sin(mphi);
      d_phi = s2 * am * leg.q[tri(n, am)] * std::cos(mphi);
    }
  }
  const Vec3 e_theta(f.ct * f.cphi, f.ct * f.sphi, -f.st);
  const Vec3 e_phi(-f.sphi, f.cphi, 0.0);
  const Vec3 u = (d_theta * e_theta + d_phi * e_phi) / std::sqrt(n * (n + 1.0));
  return {u, x.cross(u)};
}

HarmonicExpansion::HarmonicExpansion(int cutoff, std::vector<double> coefficients)
    : cutoff_(cutoff), coeffs_(std::move(coefficients)) {
  if (cutoff < 0 || coeffs_.size() != static_cast<std::size_t>(harmonic_count(cutoff)))
    throw Error(Errc::InvalidInput, "expansion needs (cutoff+1)^2 coefficients");
}

double HarmonicExpansion::operator()(const Vec3& xhat) const {
  const auto y = eval_scalar_harmonics(cutoff_, xhat);
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) sum += coeffs_[i] * y[i];
  return sum;
}

HarmonicExpansion sht_forward(const SphericalGrid& grid, std::span<const double> values, int cutoff) {
  if (values.size() != grid.size()) throw Error(Errc::InvalidInput, "one value per grid point expected");
  if (cutoff < 0) throw Error(Errc::InvalidInput, "negative cutoff");
  std::vector<double> c(harmonic_count(cutoff), 0.0);
  const auto& pts = grid.points();
  const auto& w = grid.weights();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double wf = w[i] * values[i];
    if (wf == 0.0) continue;
    const auto y = eval_scalar_harmonics(cutoff, pts[i]);
    for (std::size_t j = 0; j < y.size(); ++j) c[j] += wf * y[j];
  }
  return HarmonicExpansion(cutoff, std::move(c));
}

HarmonicExpansion sht_forward(const FarFieldSamples& samples, int cutoff) {
  if (!samples.grid) throw Error(Errc::InvalidInput, "samples have no grid");
  const auto values = samples.magnitudes();
  return sht_forward(*samples.grid, values, cutoff);
}

double synthesize(const HarmonicExpansion& expansion, const Vec3& xhat) { return expansion(xhat); }

std::string format_expansion(const HarmonicExpansion& e) {
  std::string out;
  for (int n = 0; n <= e.cutoff(); ++n)
    for (int m = -n; m <= n; ++m)
      out += std::to_string(n) + " " + std::to_string(m) + " " + text::format_double(e.coefficient(n, m)) + "\n";
  return out;
}

HarmonicExpansion parse_expansion(const std::string& contents) {
  std::vector<std::tuple<int, int, double>> rows;
  int cutoff = 0;
  std::istringstream in(contents);
  std::string line;
  while (std::getline(in, line)) {
    const auto tok = text::split_ws(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    if (tok.size() != 3) throw Error(Errc::Parse, "expansion line needs 'n m c'");
    const int n = static_cast<int>(text::parse_long(tok[0]));
    const int m = static_cast<int>(text::parse_long(tok[1]));
    check_degree(n, m);
    rows.emplace_back(n, m, text::parse_double(tok[2]));
    cutoff = std::max(cutoff, n);
  }
  std::vector<double> c(harmonic_count(cutoff), 0.0);
  std::vector<bool> seen(c.size(), false);
  for (const auto& [n, m, v] : rows) {
    const int i = harmonic_index(n, m);
    if (seen[i]) throw Error(Errc::Parse, "duplicate coefficient " + std::to_string(n) + " " + std::to_string(m));
    seen[i] = true;
    c[i] = v;
  }
  if (rows.size() != c.size()) throw Error(Errc::Parse, "expansion is missing coefficients");
  return HarmonicExpansion(cutoff, std::move(c));
}

}  // namespace polyscat
