#include "polyscat/farfield.hpp"

#include <sstream>

#include "polyscat/text_io.hpp"

namespace polyscat {

PlaneWave PlaneWave::make(const Vec3& d, const Vec3& p, double k) {
  constexpr double tol = 1e-12;
  if (std::abs(d.norm() - 1.0) > tol) throw Error(Errc::InvalidInput, "incident direction must be a unit vector");
  if (std::abs(p.norm() - 1.0) > tol) throw Error(Errc::InvalidInput, "polarization must be a unit vector");
  if (std::abs(d.dot(p)) > tol) throw Error(Errc::InvalidInput, "polarization must be orthogonal to d");
  if (!(k > 0.0) || !std::isfinite(k)) throw Error(Errc::InvalidInput, "wavenumber must be positive");
  return PlaneWave{d, p, k};
}

PlaneWave PlaneWave::from_wavelength(const Vec3& d, const Vec3& p, double wavelength) {
  if (!(wavelength > 0.0)) throw Error(Errc::InvalidInput, "wavelength must be positive");
  return make(d, p, 2.0 * kPi / wavelength);
}

const char* to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::Modulus: return "modulus";
    case FieldKind::ComplexE: return "complex-E";
    case FieldKind::ComplexH: return "complex-H";
  }
  return "modulus";
}

std::vector<double> FarFieldSamples::magnitudes() const {
  if (!is_complex()) return moduli;
  std::vector<double> out;
  out.reserve(fields.size());
  for (const auto& f : fields) out.push_back(f.norm());
  return out;
}

std::string format_far_field(const FarFieldSamples& s) {
  if (!s.grid) throw Error(Errc::InvalidInput, "samples have no grid");
  std::string out;
  out += std::string("# kind=") + to_string(s.kind) + "\n";
  out += "# k=" + text::format_double(s.wave.k) + " d=" + text::format_vec(s.wave.d) +
         " p=" + text::format_vec(s.wave.p) + "\n";
  const auto& pts = s.grid->points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out += text::format_vec(pts[i]);
    out += " ";
    if (s.is_complex()) {
      for (int c = 0; c < 3; ++c)
        out += " " + text::format_double(s.fields[i][c].real()) + " " + text::format_double(s.fields[i][c].imag());
    } else {
      out += " " + text::format_double(s.moduli[i]);
    }
    out += "\n";
  }
  return out;
}

FarFieldSamples parse_far_field(const std::string& contents, const std::string& source, AreaMode mode) {
  FarFieldSamples s;
  bool have_kind = false, have_wave = false;
  Vec3 d = Vec3::Zero(), p = Vec3::Zero();
  double k = 0.0;
  std::vector<Vec3> pts;
  std::istringstream in(contents);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    try {
      std::string_view body = text::trim(line);
      if (body.empty()) continue;
      if (body.front() == '#') {
        body.remove_prefix(1);
        const auto tok = text::split_ws(body);
        for (std::size_t i = 0; i < tok.size(); ++i) {
          auto read3 = [&](Vec3& v) {
            if (i + 2 >= tok.size()) throw Error(Errc::Parse, "vector needs 3 components");
            v = Vec3(text::parse_double(tok[i].substr(2)), text::parse_double(tok[i + 1]),
                     text::parse_double(tok[i + 2]));
            i += 2;
          };
          if (tok[i].starts_with("kind=")) {
            const auto v = tok[i].substr(5);
            if (v == "modulus") s.kind = FieldKind::Modulus;
            else if (v == "complex-E") s.kind = FieldKind::ComplexE;
            else if (v == "complex-H") s.kind = FieldKind::ComplexH;
            else throw Error(Errc::Parse, "unknown kind '" + std::string(v) + "'");
            have_kind = true;
          } else if (tok[i].starts_with("k=")) {
            k = text::parse_double(tok[i].substr(2));
            have_wave = true;
          } else if (tok[i].starts_with("d=")) {
            read3(d);
          } else if (tok[i].starts_with("p=")) {
            read3(p);
          }
        }
        continue;
      }
      if (!have_kind || !have_wave) throw Error(Errc::Parse, "data before header");
      const auto tok = text::split_ws(body);
      const std::size_t want = s.kind == FieldKind::Modulus ? 4 : 9;
      if (tok.size() != want) throw Error(Errc::Parse, "expected " + std::to_string(want) + " columns");
      pts.emplace_back(text::parse_double(tok[0]), text::parse_double(tok[1]), text::parse_double(tok[2]));
      if (s.kind == FieldKind::Modulus) {
        s.moduli.push_back(text::parse_double(tok[3]));
      } else {
        CVec3 f;
        for (int c = 0; c < 3; ++c)
          f[c] = cplx(text::parse_double(tok[3 + 2 * c]), text::parse_double(tok[4 + 2 * c]));
        s.fields.push_back(f);
      }
    } catch (const Error& e) {
      throw Error(Errc::Parse, where + e.what());
    }
  }
  if (!have_kind || !have_wave) throw Error(Errc::Parse, source + ": missing header");
  try {
    s.wave = PlaneWave::make(d, p, k);
  } catch (const Error& e) {
    throw Error(Errc::Parse, source + ": " + e.what());
  }
  s.grid = std::make_shared<const SphericalGrid>(SphericalGrid::from_points(std::move(pts), mode));
  return s;
}

void write_far_field(const std::filesystem::path& path, const FarFieldSamples& samples) {
  text::write_file(path, format_far_field(samples));
}

FarFieldSamples read_far_field(const std::filesystem::path& path, AreaMode mode) {
  return parse_far_field(text::read_file(path), path.string(), mode);
}

}  // namespace polyscat
