#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polyscat/locator.hpp"
#include "polyscat/maxima.hpp"
#include "polyscat/minkowski.hpp"

namespace polyscat {

enum class LocationSource { Oracle, PhysicalOptics, File };

struct IncidentPair {
  Vec3 d;
  Vec3 p;
};

// The six axis directions with the polarizations used for the tetrahedron runs.
std::vector<IncidentPair> default_incidents();

struct ExperimentConfig {
  std::filesystem::path obstacle;
  std::vector<IncidentPair> incidents;
  double wavelength_shape = 0.5;
  double wavelength_location = 50.0;
  int grid_shape = 7518;
  int grid_location = 1878;
  AreaMode area_mode = AreaMode::Flat;
  RecoveryThresholds thresholds;
  std::optional<double> prior_min_area;
  std::optional<double> prior_min_obliquity;
  NoiseModel noise;
  Vec3 location = Vec3::Zero();  // true placement used when synthesizing
  LocationSource location_source = LocationSource::Oracle;
  std::filesystem::path location_data;  // complex far-field file for LocationSource::File
  SampleRegion region;
  Polarity polarity = Polarity::Maximize;
  double initial_offset = 1.0;
  double vertex_merge = 0.0;  // fraction of the diameter; 0 disables
  std::filesystem::path output = "out";

  // Errors: Config.
  void validate() const;
  // Threshold actually used for peak values (priors take precedence).
  RecoveryThresholds effective_thresholds() const;
};

// Flat "key = value" text; repeated "incident = dx dy dz px py pz" lines.
// Relative paths resolve against `base_dir`. Errors: Config with line context.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<string>",
                              const std::filesystem::path& base_dir = {});
ExperimentConfig read_config(const std::filesystem::path& path);

struct Dataset {
  std::vector<FarFieldSamples> shape;     // one modulus set per incident pair
  std::optional<FarFieldSamples> location;  // complex-E at the long wavelength
};

Dataset synthesize_dataset(const ExperimentConfig& config);
FarFieldSamples synthesize_location_data(const ExperimentConfig& config, const ConvexPolyhedron& obstacle);

std::filesystem::path shape_data_path(const ExperimentConfig& config, std::size_t index);
std::filesystem::path location_data_path(const ExperimentConfig& config);
void write_dataset(const ExperimentConfig& config, const Dataset& data);
bool dataset_present(const ExperimentConfig& config);
Dataset load_dataset(const ExperimentConfig& config);

struct DirectionResult {
  PeakSet peaks;
  PeakSet critical;
  PeakSearchDiagnostics diagnostics;
};

struct RecoveryReport {
  std::vector<DirectionResult> directions;
  std::vector<RecoveredFace> entries;
  RecoveredFaceSet effective;
  BalancedAreas balanced;
  std::optional<OffsetFit> fit;
  std::optional<ConvexPolyhedron> shape;   // centroid at the origin
  std::optional<LocateResult> location;
  std::optional<ConvexPolyhedron> placed;  // shape moved to the recovered location
};

// Stage failure carrying the artifacts completed before it.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const Error& cause, std::shared_ptr<const RecoveryReport> partial);

  const std::string& stage() const noexcept { return stage_; }
  const RecoveryReport& partial() const noexcept { return *partial_; }

 private:
  std::string stage_;
  std::shared_ptr<const RecoveryReport> partial_;
};

// Step 1 for every incident pair, in parallel.
std::vector<DirectionResult> find_critical_directions(const ExperimentConfig& config,
                                                      std::span<const FarFieldSamples> shape_data);
// Peaks to effective faces, balancing, offset fit and half-space build.
void recover_shape(const ExperimentConfig& config, RecoveryReport& report);
LocateResult recover_location(const ExperimentConfig& config, const FarFieldSamples& location_data);

// Stages "peaks", "shape", "location", "placement". Errors: PipelineError.
RecoveryReport run_pipeline(const ExperimentConfig& config, const Dataset& data);

// Writes every available artifact under <output>/report.
void write_report(const ExperimentConfig& config, const RecoveryReport& report);
void write_location(const ExperimentConfig& config, const LocateResult& result);

std::string format_location(const LocateResult& result);
std::string format_area_table(const RecoveryReport& report);
std::string format_offset_table(const OffsetFit& fit);
std::string format_vertex_table(const ConvexPolyhedron& poly);
std::string format_peak_table(std::span<const DirectionResult> directions);

// Symmetric Hausdorff distance between the two vertex sets.
double max_vertex_error(const ConvexPolyhedron& a, const ConvexPolyhedron& b);

}  // namespace polyscat
