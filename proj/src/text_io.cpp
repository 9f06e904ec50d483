#include "polyscat/text_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace polyscat {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonPlanarFace: return "NonPlanarFace";
    case Errc::NotConvex: return "NotConvex";
    case Errc::DegenerateFace: return "DegenerateFace";
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::Unbounded: return "Unbounded";
    case Errc::EmptyInterior: return "EmptyInterior";
    case Errc::WrongKind: return "WrongKind";
    case Errc::ZeroField: return "ZeroField";
    case Errc::DegenerateDirection: return "DegenerateDirection";
    case Errc::GrazingNormal: return "GrazingNormal";
    case Errc::SpanDeficient: return "SpanDeficient";
    case Errc::Parse: return "Parse";
    case Errc::Config: return "Config";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

namespace text {

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // fold -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_vec(const Vec3& v, char sep) {
  return format_double(v.x()) + sep + format_double(v.y()) + sep + format_double(v.z());
}

double parse_double(std::string_view token) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw Error(Errc::Parse, "not a number: '" + std::string(token) + "'");
  return v;
}

long parse_long(std::string_view token) {
  token = trim(token);
  long v = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw Error(Errc::Parse, "not an integer: '" + std::string(token) + "'");
  return v;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

}  // namespace text
}  // namespace polyscat
