#pragma once

// Run configuration files: which scenes, sensors, interpretations and
// regions a sweep covers. JSON; see README for the schema.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "perispace/placement.hpp"

namespace perispace {

// How a sensor's candidate variants are generated.
struct FixedPoses {
  std::vector<SensorPose> poses;
  std::string label = "fixed";
};
struct LatticePoses {
  PoseLattice lattice;
};
// Camera at one position, yawed about +z from `from` to `to` inclusive.
struct YawSweep {
  Vec3 position = Vec3::Zero();
  double heading_deg = 0.0;  // yaw of the zero variant, from +x
  double pitch_deg = 0.0;
  double from_deg = 0.0;
  double to_deg = 0.0;
  double step_deg = 10.0;
};
// Pad centres: explicit list, or an nx x ny grid spanning [min, max].
struct PadCenters {
  std::vector<Vec2> centers;
};
struct ProximityInflations {
  std::vector<double> inflations;
};

using VariantSource = std::variant<FixedPoses, LatticePoses, YawSweep, PadCenters, ProximityInflations>;

struct SensorDecl {
  std::string id;
  SensorType type = SensorType::Rgbd;
  SensorSpec spec;
  VariantSource source;
  std::optional<Interpretation> interpretation;
};

struct RunConfig {
  enum class Mode { Sweep, Combo };
  Mode mode = Mode::Sweep;
  std::vector<std::filesystem::path> scene_paths;  // absolute or relative to the config file
  std::vector<SensorDecl> sensors;
  std::vector<Interpretation> interpretations;
  std::vector<RoiSpec> rois;
  std::optional<std::uint64_t> seed;
  std::optional<double> resolution;
  std::size_t workers = 1;
  EvaluationOptions options;
  DynamicAggregation aggregation = DynamicAggregation::Mean;
};

// Throws ParseError on malformed documents and unknown names (the message
// names the field), ConfigError on inconsistent values.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

// Loads every scene; a dynamic scene contributes its snapshots, named
// "<name>#NN".
std::vector<SceneModel> load_scenes(std::span<const std::filesystem::path> paths);

// Expands variant sources against the first scene (workspace for lattices,
// robot base for proximity skins) and prepares every scene. Seed and
// resolution must be set.
SweepConfig build_sweep_config(const RunConfig& run, std::span<const SceneModel> scenes);

}  // namespace perispace
