#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "polyscat/parallel.hpp"
#include "polyscat/pipeline.hpp"
#include "polyscat/text_io.hpp"

namespace {

using namespace polyscat;

void configure_threads() {
  if (const char* env = std::getenv("POLYSCAT_THREADS")) {
    const long n = text::parse_long(env);
    if (n < 1) throw Error(Errc::Config, "POLYSCAT_THREADS must be a positive integer");
    set_thread_count(static_cast<unsigned>(n));
  }
}

int run_synth(const std::string& config_path) {
  const ExperimentConfig cfg = read_config(config_path);
  const Dataset data = synthesize_dataset(cfg);
  write_dataset(cfg, data);
  std::cout << "wrote " << data.shape.size() << " shape file(s)" << (data.location ? " and 1 location file" : "")
            << " under " << (cfg.output / "data").string() << "\n";
  return 0;
}

int run_recover(const std::string& config_path) {
  const ExperimentConfig cfg = read_config(config_path);
  Dataset data;
  if (dataset_present(cfg)) {
    data = load_dataset(cfg);
  } else {
    data = synthesize_dataset(cfg);
    write_dataset(cfg, data);
  }
  try {
    const RecoveryReport report = run_pipeline(cfg, data);
    write_report(cfg, report);
    std::cout << "effective normals: " << report.effective.entries.size() << "\n"
              << "location: " << format_location(*report.location)
              << "report: " << (cfg.output / "report").string() << "\n";
  } catch (const PipelineError& e) {
    write_report(cfg, e.partial());
    throw;
  }
  return 0;
}

int run_locate(const std::string& config_path) {
  const ExperimentConfig cfg = read_config(config_path);
  FarFieldSamples samples;
  if (std::filesystem::exists(location_data_path(cfg))) {
    samples = read_far_field(location_data_path(cfg), cfg.area_mode);
  } else {
    samples = synthesize_location_data(cfg, read_obstacle(cfg.obstacle));
    write_far_field(location_data_path(cfg), samples);
  }
  const LocateResult res = recover_location(cfg, samples);
  write_location(cfg, res);
  std::cout << format_location(res);
  return 0;
}

int run_check(const std::string& path, const AdmissibilityParams& params, const std::vector<std::vector<double>>& dirs) {
  params.validate();
  const ConvexPolyhedron poly = read_obstacle(path);
  std::vector<Vec3> directions;
  for (const auto& d : dirs) directions.push_back(Vec3(d[0], d[1], d[2]).normalized());
  if (directions.empty())
    for (const auto& inc : default_incidents()) directions.push_back(inc.d);
  const AdmissibilityReport r = check_admissibility(poly, params, directions);
  auto flag = [](bool ok) { return ok ? "ok" : "FAIL"; };
  std::cout << "faces " << poly.face_count() << "  vertices " << poly.vertices().size() << "\n"
            << "volume " << text::format_double(r.volume) << " " << flag(r.volume_ok) << "\n"
            << "min_front_cross " << text::format_double(r.min_front_cross) << " " << flag(r.front_cross_ok) << "\n"
            << "min_area " << text::format_double(r.min_area) << " " << flag(r.area_ok) << "\n"
            << "max_perimeter " << text::format_double(r.max_perimeter) << " " << flag(r.perimeter_ok) << "\n";
  for (std::size_t n = 0; n < directions.size(); ++n) {
    std::cout << "d" << n + 1 << " (" << text::format_vec(directions[n]) << ") significant:";
    for (auto f : r.significant[n]) std::cout << " " << f + 1;
    std::cout << "\n";
  }
  std::cout << "admissible " << (r.admissible() ? "yes" : "no") << "\n";
  return r.admissible() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polyhedral obstacle recovery from phaseless far-field data"};
  app.require_subcommand(1);

  std::string config_path;
  auto* synth = app.add_subcommand("synth", "Synthesize far-field data for a configuration");
  synth->add_option("config", config_path, "experiment configuration")->required()->check(CLI::ExistingFile);
  auto* recover = app.add_subcommand("recover", "Run the full recovery and write the report");
  recover->add_option("config", config_path, "experiment configuration")->required()->check(CLI::ExistingFile);
  auto* loc = app.add_subcommand("locate", "Recover the location only");
  loc->add_option("config", config_path, "experiment configuration")->required()->check(CLI::ExistingFile);

  std::string obstacle_path;
  AdmissibilityParams params;
  std::vector<std::vector<double>> dirs;
  auto* check = app.add_subcommand("check", "Admissibility report for an obstacle file");
  check->add_option("obstacle", obstacle_path, "obstacle file")->required()->check(CLI::ExistingFile);
  check->add_option("--h0", params.h0, "minimum volume")->capture_default_str();
  check->add_option("--h1", params.h1, "maximum volume")->capture_default_str();
  check->add_option("--h2", params.h2, "minimum front-face cross norm")->capture_default_str();
  check->add_option("--h3", params.h3, "minimum face area")->capture_default_str();
  check->add_option("--h4", params.h4, "maximum face perimeter")->capture_default_str();
  check->add_option("--h5", params.h5, "significance threshold")->capture_default_str();
  check->add_option("--direction", dirs, "incident direction dx dy dz (repeatable)")->expected(3)->allow_extra_args(false);

  CLI11_PARSE(app, argc, argv);

  try {
    configure_threads();
    if (*synth) return run_synth(config_path);
    if (*recover) return run_recover(config_path);
    if (*loc) return run_locate(config_path);
    return run_check(obstacle_path, params, dirs);
  } catch (const PipelineError& e) {
    std::cerr << "polyscat: stage " << e.stage() << " failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "polyscat: " << e.what() << "\n";
    return 2;
  }
}
