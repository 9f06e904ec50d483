#include "polyscat/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "polyscat/forward.hpp"
#include "polyscat/harmonics.hpp"
#include "polyscat/parallel.hpp"
#include "polyscat/text_io.hpp"

namespace polyscat {

namespace fs = std::filesystem;

std::vector<IncidentPair> default_incidents() {
  return {{{1, 0, 0}, {0, 0, 1}},  {{-1, 0, 0}, {0, 0, 1}}, {{0, 1, 0}, {0, 0, 1}},
          {{0, -1, 0}, {0, 0, 1}}, {{0, 0, 1}, {1, 0, 0}},  {{0, 0, -1}, {1, 0, 0}}};
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(Errc::Config, msg); };
  if (obstacle.empty() && location_source != LocationSource::File) fail("obstacle path is empty");
  if (incidents.empty()) fail("incident table is empty");
  for (std::size_t n = 0; n < incidents.size(); ++n) {
    try {
      PlaneWave::make(incidents[n].d, incidents[n].p, 1.0);
    } catch (const Error& e) {
      fail("incident " + std::to_string(n + 1) + ": " + e.what());
    }
  }
  if (!(wavelength_shape > 0.0) || !(wavelength_location > 0.0)) fail("wavelengths must be positive");
  if (grid_shape < 12 || grid_location < 12) fail("grid sizes must be at least 12");
  try {
    thresholds.validate();
    region.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  if (!(noise.level >= 0.0)) fail("noise level must be nonnegative");
  if (!(initial_offset > 0.0)) fail("initial_offset must be positive");
  if (!(vertex_merge >= 0.0)) fail("vertex_merge must be nonnegative");
  if (output.empty()) fail("output path is empty");
  if (location_source == LocationSource::File && location_data.empty()) fail("location_data path is empty");
  if (prior_min_area.has_value() != prior_min_obliquity.has_value())
    fail("prior_min_area and prior_min_obliquity must be given together");
}

RecoveryThresholds ExperimentConfig::effective_thresholds() const {
  RecoveryThresholds t = thresholds;
  if (prior_min_area && prior_min_obliquity)
    t.e_tol = peak_threshold_from_priors(*prior_min_area, *prior_min_obliquity, wavelength_shape);
  return t;
}

namespace {

struct LineReader {
  std::string source;
  int line = 0;
  std::vector<std::string_view> values;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::Config, source + ":" + std::to_string(line) + ": " + msg);
  }
  void expect(std::size_t n) const {
    if (values.size() != n) fail("expected " + std::to_string(n) + " value(s), got " + std::to_string(values.size()));
  }
  double num(std::size_t i) const {
    try {
      return text::parse_double(values[i]);
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  int integer(std::size_t i) const {
    try {
      return static_cast<int>(text::parse_long(values[i]));
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  double scalar() const {
    expect(1);
    return num(0);
  }
  Vec3 vec(std::size_t offset) const { return {num(offset), num(offset + 1), num(offset + 2)}; }
  bool boolean() const {
    expect(1);
    if (values[0] == "true" || values[0] == "yes" || values[0] == "1") return true;
    if (values[0] == "false" || values[0] == "no" || values[0] == "0") return false;
    fail("expected a boolean");
  }
};

fs::path resolve(const fs::path& base, std::string_view value) {
  fs::path p{std::string(value)};
  return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source, const fs::path& base_dir) {
  ExperimentConfig cfg;
  LineReader r{source, 0, {}};
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view raw(text.data() + pos, end - pos);
    pos = end + 1;
    ++r.line;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    raw = text::trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string_view::npos) r.fail("expected 'key = value'");
    const std::string key(text::trim(raw.substr(0, eq)));
    const std::string_view value = text::trim(raw.substr(eq + 1));
    r.values = text::split_ws(value);
    if (r.values.empty()) r.fail("missing value for '" + key + "'");

    if (key == "obstacle") {
      cfg.obstacle = resolve(base_dir, value);
    } else if (key == "incident") {
      r.expect(6);
      cfg.incidents.push_back({r.vec(0), r.vec(3)});
    } else if (key == "wavelength_shape") {
      cfg.wavelength_shape = r.scalar();
    } else if (key == "wavelength_location") {
      cfg.wavelength_location = r.scalar();
    } else if (key == "grid_shape") {
      r.expect(1);
      cfg.grid_shape = r.integer(0);
    } else if (key == "grid_location") {
      r.expect(1);
      cfg.grid_location = r.integer(0);
    } else if (key == "area_mode") {
      r.expect(1);
      if (r.values[0] == "flat")
        cfg.area_mode = AreaMode::Flat;
      else if (r.values[0] == "spherical")
        cfg.area_mode = AreaMode::Spherical;
      else
        r.fail("area_mode must be flat or spherical");
    } else if (key == "e_tol") {
      cfg.thresholds.e_tol = r.scalar();
    } else if (key == "sigma") {
      cfg.thresholds.sigma = r.scalar();
    } else if (key == "cluster_angle_deg") {
      cfg.thresholds.cluster_angle = r.scalar() * kPi / 180.0;
    } else if (key == "cutoff") {
      r.expect(1);
      cfg.thresholds.cutoff = r.integer(0);
    } else if (key == "multistart") {
      r.expect(2);
      cfg.thresholds.starts_theta = r.integer(0);
      cfg.thresholds.starts_phi = r.integer(1);
    } else if (key == "prior_min_area") {
      cfg.prior_min_area = r.scalar();
    } else if (key == "prior_min_obliquity") {
      cfg.prior_min_obliquity = r.scalar();
    } else if (key == "noise") {
      cfg.noise.level = r.scalar();
    } else if (key == "seed") {
      r.expect(1);
      const long s = r.integer(0);
      if (s < 0) r.fail("seed must be nonnegative");
      cfg.noise.seed = static_cast<std::uint64_t>(s);
    } else if (key == "location") {
      r.expect(3);
      cfg.location = r.vec(0);
    } else if (key == "step3_source") {
      r.expect(1);
      if (r.values[0] == "oracle")
        cfg.location_source = LocationSource::Oracle;
      else if (r.values[0] == "po")
        cfg.location_source = LocationSource::PhysicalOptics;
      else if (r.values[0] == "file")
        cfg.location_source = LocationSource::File;
      else
        r.fail("step3_source must be oracle, po or file");
    } else if (key == "location_data") {
      cfg.location_data = resolve(base_dir, value);
    } else if (key == "region") {
      r.expect(6);
      cfg.region.lower = r.vec(0);
      cfg.region.upper = r.vec(3);
    } else if (key == "region_points") {
      if (r.values.size() == 1) {
        cfg.region.points.fill(r.integer(0));
      } else {
        r.expect(3);
        for (int a = 0; a < 3; ++a) cfg.region.points[a] = r.integer(a);
      }
    } else if (key == "polarity") {
      r.expect(1);
      try {
        cfg.polarity = parse_polarity(std::string(r.values[0]));
      } catch (const Error& e) {
        r.fail(e.what());
      }
    } else if (key == "initial_offset") {
      cfg.initial_offset = r.scalar();
    } else if (key == "vertex_merge") {
      cfg.vertex_merge = r.scalar();
    } else if (key == "output") {
      cfg.output = resolve(base_dir, value);
    } else {
      r.fail("unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig read_config(const fs::path& path) {
  return parse_config(text::read_file(path), path.string(), path.parent_path());
}

FarFieldSamples synthesize_location_data(const ExperimentConfig& config, const ConvexPolyhedron& obstacle) {
  const auto& inc = config.incidents.front();
  const PlaneWave wave = PlaneWave::from_wavelength(inc.d, inc.p, config.wavelength_location);
  const GridPtr grid = make_grid(config.grid_location, config.area_mode);
  FarFieldSamples out;
  if (config.location_source == LocationSource::PhysicalOptics) {
    const ConvexPolyhedron placed = obstacle.translated(config.location - obstacle.centroid());
    out = sample_far_field(placed, wave, grid, FieldKind::ComplexE);
  } else {
    out = dipole_far_field(wave, grid, config.location);
  }
  if (config.noise.level > 0.0)
    out = add_noise_complex(out, {config.noise.level, config.noise.seed + config.incidents.size()});
  return out;
}

Dataset synthesize_dataset(const ExperimentConfig& config) {
  config.validate();
  const ConvexPolyhedron obstacle = read_obstacle(config.obstacle);
  const GridPtr grid = make_grid(config.grid_shape, config.area_mode);
  Dataset data;
  for (std::size_t n = 0; n < config.incidents.size(); ++n) {
    const auto& inc = config.incidents[n];
    const PlaneWave wave = PlaneWave::from_wavelength(inc.d, inc.p, config.wavelength_shape);
    FarFieldSamples s = sample_phaseless(obstacle, wave, grid);
    // One generator stream per incident pair.
    if (config.noise.level > 0.0) s = add_noise(s, {config.noise.level, config.noise.seed + n});
    data.shape.push_back(std::move(s));
  }
  if (config.location_source != LocationSource::File) data.location = synthesize_location_data(config, obstacle);
  return data;
}

fs::path shape_data_path(const ExperimentConfig& config, std::size_t index) {
  return config.output / "data" / ("shape_" + std::to_string(index + 1) + ".txt");
}

fs::path location_data_path(const ExperimentConfig& config) {
  if (config.location_source == LocationSource::File) return config.location_data;
  return config.output / "data" / "location.txt";
}

void write_dataset(const ExperimentConfig& config, const Dataset& data) {
  for (std::size_t n = 0; n < data.shape.size(); ++n) write_far_field(shape_data_path(config, n), data.shape[n]);
  if (data.location && config.location_source != LocationSource::File)
    write_far_field(location_data_path(config), *data.location);
}

bool dataset_present(const ExperimentConfig& config) {
  for (std::size_t n = 0; n < config.incidents.size(); ++n)
    if (!fs::exists(shape_data_path(config, n))) return false;
  return fs::exists(location_data_path(config));
}

Dataset load_dataset(const ExperimentConfig& config) {
  Dataset data;
  for (std::size_t n = 0; n < config.incidents.size(); ++n) {
    FarFieldSamples s = read_far_field(shape_data_path(config, n), config.area_mode);
    if (s.kind != FieldKind::Modulus)
      throw Error(Errc::WrongKind, shape_data_path(config, n).string() + ": expected modulus data");
    // Files sharing a point set share one grid.
    if (!data.shape.empty() && data.shape.front().grid->points() == s.grid->points()) s.grid = data.shape.front().grid;
    data.shape.push_back(std::move(s));
  }
  if (fs::exists(location_data_path(config)))
    data.location = read_far_field(location_data_path(config), config.area_mode);
  return data;
}

PipelineError::PipelineError(std::string stage, const Error& cause, std::shared_ptr<const RecoveryReport> partial)
    : Error(cause.code(), stage + ": " + std::string(cause.what()).substr(std::string(to_string(cause.code())).size() + 2)),
      stage_(std::move(stage)),
      partial_(std::move(partial)) {}

std::vector<DirectionResult> find_critical_directions(const ExperimentConfig& config,
                                                      std::span<const FarFieldSamples> shape_data) {
  const RecoveryThresholds th = config.effective_thresholds();
  std::vector<DirectionResult> out(shape_data.size());
  parallel_for(shape_data.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t n = b; n < e; ++n) {
      const FarFieldSamples& s = shape_data[n];
      const HarmonicExpansion expansion = sht_forward(s, th.cutoff);
      out[n].peaks = find_local_maxima(expansion, th, s.wave.d, s.wave.wavelength(), &out[n].diagnostics);
      out[n].critical = select_critical_directions(out[n].peaks, th);
    }
  });
  return out;
}

void recover_shape(const ExperimentConfig& config, RecoveryReport& report) {
  report.entries.clear();
  for (std::size_t n = 0; n < report.directions.size(); ++n) {
    const auto faces = faces_from_peaks(report.directions[n].critical, n);
    report.entries.insert(report.entries.end(), faces.begin(), faces.end());
  }
  report.effective = cluster_effective_normals(report.entries, config.thresholds.cluster_angle);
  const auto& eff = report.effective.entries;
  if (eff.size() < 4)
    throw Error(Errc::SpanDeficient, "only " + std::to_string(eff.size()) + " effective normal(s) recovered");

  std::vector<Vec3> normals;
  std::vector<double> areas;
  for (const auto& f : eff) {
    normals.push_back(f.normal);
    areas.push_back(f.area);
  }
  report.balanced = balance_areas(normals, areas);
  const std::vector<double> initial(eff.size(), config.initial_offset);
  report.fit = fit_offsets(normals, report.balanced.areas, initial);
  ConvexPolyhedron body = halfspace_intersection(normals, report.fit->offsets).polyhedron;
  if (config.vertex_merge > 0.0) body = merge_close_vertices(body, config.vertex_merge * body.diameter());
  report.shape = body.translated(-body.centroid());
}

LocateResult recover_location(const ExperimentConfig& config, const FarFieldSamples& location_data) {
  return locate(location_data, config.region, config.polarity);
}

RecoveryReport run_pipeline(const ExperimentConfig& config, const Dataset& data) {
  auto report = std::make_shared<RecoveryReport>();
  auto stage = [&](const char* name, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      throw PipelineError(name, e, report);
    }
  };
  stage("peaks", [&] {
    if (data.shape.size() != config.incidents.size())
      throw Error(Errc::InvalidInput, "dataset has " + std::to_string(data.shape.size()) + " shape file(s) for " +
                                          std::to_string(config.incidents.size()) + " incident pair(s)");
    report->directions = find_critical_directions(config, data.shape);
  });
  stage("shape", [&] { recover_shape(config, *report); });
  stage("location", [&] {
    if (!data.location) throw Error(Errc::InvalidInput, "no location data");
    report->location = recover_location(config, *data.location);
  });
  stage("placement", [&] { report->placed = report->shape->translated(report->location->location); });
  return *report;
}

std::string format_location(const LocateResult& result) {
  return text::format_vec(result.location) + " " + text::format_double(result.value) + "\n";
}

std::string format_area_table(const RecoveryReport& report) {
  std::string out = "face,recovered,balanced,fitted\n";
  std::vector<double> fitted;
  if (report.fit) fitted = facet_areas(report.fit->normals, report.fit->offsets);
  for (std::size_t j = 0; j < report.effective.entries.size(); ++j) {
    out += std::to_string(j + 1) + "," + text::format_double(report.effective.entries[j].area) + ",";
    if (j < report.balanced.areas.size()) out += text::format_double(report.balanced.areas[j]);
    out += ",";
    if (j < fitted.size()) out += text::format_double(fitted[j]);
    out += "\n";
  }
  return out;
}

std::string format_offset_table(const OffsetFit& fit) {
  std::string out = "face,offset\n";
  for (std::size_t j = 0; j < fit.offsets.size(); ++j)
    out += std::to_string(j + 1) + "," + text::format_double(fit.offsets[j]) + "\n";
  return out;
}

std::string format_vertex_table(const ConvexPolyhedron& poly) {
  std::string out = "vertex,x,y,z\n";
  for (std::size_t i = 0; i < poly.vertices().size(); ++i)
    out += std::to_string(i + 1) + "," + text::format_vec(poly.vertices()[i], ',') + "\n";
  return out;
}

std::string format_peak_table(std::span<const DirectionResult> directions) {
  std::string out = "source_d_index,x,y,z,value,critical\n";
  for (std::size_t n = 0; n < directions.size(); ++n) {
    for (const auto& p : directions[n].peaks.peaks) {
      const auto& crit = directions[n].critical.peaks;
      const bool is_critical = std::any_of(crit.begin(), crit.end(), [&](const Peak& c) {
        return c.direction == p.direction;
      });
      out += std::to_string(n + 1) + "," + text::format_vec(p.direction, ',') + "," + text::format_double(p.value) +
             "," + (is_critical ? "1" : "0") + "\n";
    }
  }
  return out;
}

void write_location(const ExperimentConfig& config, const LocateResult& result) {
  const fs::path dir = config.output / "report";
  text::write_file(dir / "location.txt", format_location(result));
  text::write_file(dir / "scan.txt", format_scan(result));
}

void write_report(const ExperimentConfig& config, const RecoveryReport& report) {
  const fs::path dir = config.output / "report";
  fs::create_directories(dir);
  if (!report.directions.empty()) text::write_file(dir / "peaks.csv", format_peak_table(report.directions));
  if (!report.entries.empty()) text::write_file(dir / "critical_directions.csv", format_face_table(report.entries));
  if (!report.effective.entries.empty()) {
    text::write_file(dir / "effective_normals.csv", format_face_table(report.effective.entries));
    text::write_file(dir / "areas.csv", format_area_table(report));
  }
  if (report.fit) {
    text::write_file(dir / "offsets.csv", format_offset_table(*report.fit));
    text::write_file(dir / "fit.txt", format_fit_report(*report.fit));
  }
  if (report.shape) text::write_file(dir / "shape.obs", format_obstacle(*report.shape));
  if (report.location) write_location(config, *report.location);
  if (report.placed) {
    text::write_file(dir / "vertices.csv", format_vertex_table(*report.placed));
    text::write_file(dir / "recovered.obs", format_obstacle(*report.placed));
  }
}

double max_vertex_error(const ConvexPolyhedron& a, const ConvexPolyhedron& b) {
  auto one_way = [](const ConvexPolyhedron& from, const ConvexPolyhedron& to) {
    double worst = 0.0;
    for (const auto& v : from.vertices()) {
      double best = INFINITY;
      for (const auto& u : to.vertices()) best = std::min(best, (u - v).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_way(a, b), one_way(b, a));
}

}  // namespace polyscat
