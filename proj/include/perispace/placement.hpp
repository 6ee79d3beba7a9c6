#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "perispace/metrics.hpp"
#include "perispace/occupancy.hpp"
#include "perispace/scene.hpp"
#include "perispace/sensors.hpp"

namespace perispace {

// Mounting surfaces of the workspace box: left/right are x = min/max,
// back/front are y = min/max, ceiling is z = max.
enum class Surface { Left, Right, Back, Front, Ceiling };

std::string_view surface_name(Surface s);
std::optional<Surface> surface_from_name(std::string_view name);

// In-surface coordinates (u, v) of a point: (y, z) on left/right, (x, z) on
// back/front, (x, y) on the ceiling. Unknown labels fall back to (x, y).
Vec2 surface_coords(std::string_view surface, const Vec3& p);

struct PoseLattice {
  std::vector<Surface> surfaces{Surface::Left, Surface::Right, Surface::Back, Surface::Front, Surface::Ceiling};
  double spacing = 0.6;
  // Minimum clearance between lattice points and the surface edges; the
  // lattice is centred on each surface.
  double margin = 0.0;
  // (pitch up, yaw left) in degrees relative to the inward normal.
  std::vector<Vec2> tilts_deg{{0.0, 0.0}, {30.0, 0.0}, {-30.0, 0.0}, {0.0, 30.0}, {0.0, -30.0}};
};

struct CandidatePose {
  std::size_t position_index = 0;
  std::size_t orientation_index = 0;
  Surface surface = Surface::Left;
  SensorPose pose;
};

// Every lattice position on every selected surface paired with every
// orientation; position-major order. Throws ConfigError on a spacing that is
// non-positive or larger than the smallest surface dimension.
std::vector<CandidatePose> generate_lattice(const Aabb& workspace, const PoseLattice& lattice);

// Lattice points per axis on one surface: floor((L - 2 margin) / spacing) + 1.
std::pair<int, int> lattice_dims(const Aabb& workspace, Surface s, double spacing, double margin);

enum class SensorType { Rgb, Rgbd, Lidar, Pad, Proximity };

std::string_view sensor_type_name(SensorType t);
std::optional<SensorType> sensor_type_from_name(std::string_view name);
bool compatible(SensorType t, Interpretation i);
// The naive/volume reading each sensor type contributes to a fused estimate.
Interpretation default_interpretation(SensorType t);

using SensorSpec = std::variant<CameraSpec, LidarSpec, PadSpec, ProximitySpec>;

// One candidate placement or parameter setting of a sensor.
struct SensorVariant {
  SensorSpec spec;
  SensorPose pose;
  std::string label;  // mounting surface or parameter family
};

struct SensorInstance {
  std::string id;
  SensorType type = SensorType::Rgbd;
  std::vector<SensorVariant> variants;
  // Used by combination sweeps; defaults to default_interpretation(type).
  std::optional<Interpretation> interpretation;
};

struct RoiSpec {
  enum class Kind { Robot, Human };
  std::string name;
  Kind kind = Kind::Robot;
  std::size_t human_index = 0;
  double margin = 0.05;
};

struct EvaluationOptions {
  KeypointRadii radii;
  std::size_t min_visible = 1;
  bool robot_prior = false;
  // Pad prism top; the workspace ceiling when unset.
  std::optional<double> pad_ceiling_z;
};

// Read-only per-scene data shared by every worker.
struct PreparedScene {
  std::string id;
  SceneModel model;
  VoxelGrid truth;
  std::vector<CellIndex> robot_cells;
  std::vector<RegionOfInterest> rois;
  std::vector<std::vector<CellIndex>> roi_cells;  // parallel to rois
  std::vector<CellIndex> zone_cells;  // robot semi-sphere, the RGB zone
};

PreparedScene prepare_scene(const SceneModel& scene, double resolution, std::span<const RoiSpec> rois);

struct SweepRecord {
  std::string combo_id;
  std::size_t combo_index = 0;
  std::size_t pose_id = 0;
  std::string surface;
  SensorPose pose;
  std::string scene;
  std::size_t scene_index = 0;
  std::string roi;
  std::size_t roi_index = 0;
  std::string interp;
  std::size_t interp_index = 0;
  ConfusionCounts counts;
  CoverageScores scores;

  bool operator==(const SweepRecord& o) const {
    return combo_id == o.combo_id && pose_id == o.pose_id && surface == o.surface &&
           pose.position == o.pose.position && pose.orientation.coeffs() == o.pose.orientation.coeffs() &&
           scene == o.scene && roi == o.roi && interp == o.interp && counts == o.counts && scores == o.scores;
  }
};

// Sort order of emitted records.
bool record_order(const SweepRecord& a, const SweepRecord& b);

// Estimate of one sensor variant under one interpretation.
VoxelGrid sensor_estimate(const PreparedScene& scene, const SensorInstance& sensor, std::size_t variant,
                          Interpretation interp, std::uint64_t seed, const EvaluationOptions& options);

// Scores one variant against every ROI of the scene for each interpretation.
// The point cloud and keypoint detections are computed once and shared.
// Throws ConfigError for an interpretation the sensor cannot provide.
std::vector<SweepRecord> evaluate_pose(const PreparedScene& scene, std::size_t scene_index,
                                       const SensorInstance& sensor, std::size_t sensor_index, std::size_t variant,
                                       std::span<const Interpretation> interps, std::span<const std::string> roi_names,
                                       std::uint64_t master_seed, const EvaluationOptions& options);

struct SweepConfig {
  std::vector<PreparedScene> scenes;
  std::vector<SensorInstance> sensors;
  std::vector<Interpretation> interpretations;
  std::vector<std::string> roi_names;  // parallel to PreparedScene::rois
  std::uint64_t seed = 0;
  double resolution = 0.05;
  std::size_t workers = 1;
  EvaluationOptions options;
};

// Failure of one work item, with the pose and scene that caused it.
class SweepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void validate(const SweepConfig& config);

// Runs fn(i) for i in [0, n) on `workers` threads. The exception of the
// lowest failing index is rethrown.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

// Cross product sensors x variants x scenes x ROIs x interpretations, sorted
// by record_order. Independent of the worker count.
std::vector<SweepRecord> sweep(const SweepConfig& config);

// Subsets of the sensor list in evaluation order: by size, then
// lexicographically by member position.
std::vector<std::vector<std::size_t>> sensor_subsets(std::size_t sensor_count);

// Every non-empty sensor subset, every tuple of member variants: fused
// estimate (plus robot prior when configured) scored in every ROI. pose_id is
// the mixed-radix variant tuple, first member most significant.
std::vector<SweepRecord> combo_sweep(const SweepConfig& config);

enum class DynamicAggregation { Mean, Pooled };

struct AggregateRecord {
  std::string combo_id;
  std::size_t pose_id = 0;
  std::string surface;
  SensorPose pose;
  std::string group;
  std::string roi;
  std::string interp;
  std::size_t snapshots = 0;
  ConfusionCounts pooled;
  CoverageScores scores;
};

// Snapshot scenes are named "<group>#<index>"; other names form their own
// group. Every (combo, pose, roi, interp) must be present for every snapshot
// seen in its group, else IncompleteDataError.
std::string scene_group(std::string_view scene);
std::vector<AggregateRecord> aggregate_dynamic(std::span<const SweepRecord> records,
                                               DynamicAggregation mode = DynamicAggregation::Mean);

enum class Metric { F1, Kappa };
std::string_view metric_name(Metric m);
std::optional<Metric> metric_from_name(std::string_view name);

struct PoseScore {
  std::string combo_id;
  std::string surface;
  Vec3 position = Vec3::Zero();
  std::size_t pose_id = 0;
  CoverageScores scores;
  double value(Metric m) const { return m == Metric::F1 ? scores.f1 : scores.kappa; }
};

PoseScore to_pose_score(const SweepRecord& r);
PoseScore to_pose_score(const AggregateRecord& r);

struct HeatmapSurface {
  std::string surface;
  std::vector<double> u;  // ascending lattice coordinates
  std::vector<double> v;
  std::vector<double> values;  // row-major, rows follow v; NaN where absent
  std::vector<std::size_t> best_pose;  // pose_id attaining the maximum
  std::vector<Vec3> positions;

  double at(std::size_t iu, std::size_t iv) const { return values[iv * u.size() + iu]; }
};

struct Heatmap {
  Metric metric = Metric::F1;
  std::vector<HeatmapSurface> surfaces;  // sorted by name
};

// Per-position maximum over that position's orientation records.
Heatmap build_heatmap(std::span<const PoseScore> scores, Metric metric);

// One PoseScore per heatmap position (best orientation).
std::vector<PoseScore> heatmap_entries(const Heatmap& heatmap);

// Top-k by metric, descending; ties broken by (surface, position, pose_id,
// combo_id).
std::vector<PoseScore> rank(std::span<const PoseScore> scores, Metric metric, std::size_t k);

}  // namespace perispace
