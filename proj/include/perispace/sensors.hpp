#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "perispace/geometry.hpp"
#include "perispace/occupancy.hpp"
#include "perispace/scene.hpp"

namespace perispace {

// Sensor frame: +x forward (optical axis), +y left, +z up.
using SensorPose = Pose;

struct CameraSpec {
  double fov_h = 87.0;  // degrees
  double fov_v = 58.0;
  int res_h = 1280;
  int res_v = 720;
  double range_min = 0.6;
  double range_max = 6.0;
  double noise_sigma = 0.01;
  bool depth_enabled = true;
  // Cast one ray per pixel instead of the geometry-derived pixel stride.
  bool full_resolution = false;
  int max_rays_h = 320;
  int max_rays_v = 180;
};

struct LidarSpec {
  double fov_h = 360.0;  // degrees
  double fov_v = 45.0;
  double ang_res_h = 0.7;
  double ang_res_v = 0.7;
  double range_min = 0.5;
  double range_max = 20.0;
  double noise_sigma = 0.01;
};

// Floor pressure pad: a rectangle that triggers on any occupied cell within
// contact_band above floor_z.
struct PadSpec {
  Vec2 center_xy = Vec2::Zero();
  Vec2 dims_xy{1.0, 0.75};
  double floor_z = 0.0;
  double contact_band = 0.1;
};

// Robot-mounted proximity skin modelled as an inflation shell.
struct ProximitySpec {
  double inflation = 0.1;
  double noise_sigma = 0.01;
};

void validate(const CameraSpec& spec);
void validate(const LidarSpec& spec);
void validate(const PadSpec& spec);
void validate(const ProximitySpec& spec);

enum class Interpretation {
  Zone,
  PointCloud,
  PointCloudPlusSpheres,
  PointCloudPlusCylinders,
  PointCloudPlusBox,
  PadVolume,
  ProximityNaive,
};

// Short names used in configs and tables: zone, pc, pc+sph, pc+cyl, pc+box,
// pad, prox.
std::string_view interpretation_name(Interpretation i);
std::optional<Interpretation> interpretation_from_name(std::string_view name);

struct KeypointRadii {
  double sphere = 0.15;
  double cylinder = 0.10;
};

// Rotation whose +x axis is `forward` and whose +z axis is as close to
// `up_hint` as possible.
Quat look_rotation(const Vec3& forward, const Vec3& up_hint);

// Independent RNG stream for one (scene, sensor, variant) evaluation.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t scene, std::uint64_t sensor, std::uint64_t variant);

// Pixel lattice rays. The stride keeps neighbouring rays at most one voxel
// apart at range_max, subject to the max_rays caps.
std::vector<Ray> camera_rays(const SensorPose& pose, const CameraSpec& spec, double resolution);

// round(fov_h / ang_res_h) azimuths for a full circle (one more otherwise),
// times round(fov_v / ang_res_v) + 1 elevations, centred on the forward axis.
std::vector<Ray> lidar_rays(const SensorPose& pose, const LidarSpec& spec);

// Called once per ray with the measured (noisy) hit, before integration.
using RayObserver = std::function<void(const Ray& ray, const std::optional<RayHit>& measured)>;

// Casts each ray against truth, perturbs hit distances with N(0, sigma)
// clamped to the ray's range, and integrates into a fresh all-Unknown grid.
VoxelGrid sense_rays(const VoxelGrid& truth, std::span<const Ray> rays, double noise_sigma, std::uint64_t seed,
                     const RayObserver& observer = {});

VoxelGrid sense_rgbd(const VoxelGrid& truth, const SensorPose& pose, const CameraSpec& spec, std::uint64_t seed,
                     const RayObserver& observer = {});

VoxelGrid sense_lidar(const VoxelGrid& truth, const SensorPose& pose, const LidarSpec& spec, std::uint64_t seed,
                      const RayObserver& observer = {});

struct VisibleKeypoints {
  std::size_t human_index = 0;
  KeypointSet keypoints;
  std::size_t count() const;
};

// Idealized detector: true positions of the keypoints that lie in the
// frustum and range and whose line of sight is unobstructed. Occupied cells
// within the joint's own body radius (plus half a voxel diagonal) of the
// keypoint are not treated as occluders.
std::vector<VisibleKeypoints> detect_keypoints(const VoxelGrid& truth, std::span<const HumanSkeleton> skeletons,
                                               const SensorPose& pose, const CameraSpec& spec);

void apply_keypoint_rep(VoxelGrid& estimate, std::span<const VisibleKeypoints> visible, KeypointModel model,
                        const KeypointRadii& radii);

// Whole zone Occupied when any human shows >= min_visible keypoints, else
// Free; everything else Unknown.
VoxelGrid sense_rgb_zone(const VoxelGrid& truth, std::span<const HumanSkeleton> skeletons, const SensorPose& pose,
                         const CameraSpec& spec, std::span<const CellIndex> zone_cells, std::size_t min_visible = 1);
VoxelGrid sense_rgb_zone(const VoxelGrid& truth, std::span<const HumanSkeleton> skeletons, const SensorPose& pose,
                         const CameraSpec& spec, const RegionOfInterest& zone, std::size_t min_visible = 1);

// Cells whose centres lie over the pad rectangle with z in [z_lo, z_hi].
std::vector<CellIndex> pad_prism(const GridGeometry& g, const PadSpec& spec, double z_lo, double z_hi);

// Active pad -> prism up to ceiling_z Occupied; inactive -> Free; rest Unknown.
VoxelGrid sense_pad(const VoxelGrid& truth, const PadSpec& spec, double ceiling_z);

VoxelGrid sense_proximity(const VoxelGrid& truth, std::span<const CellIndex> robot_cells, const ProximitySpec& spec,
                          std::uint64_t seed);

void add_robot_prior(VoxelGrid& estimate, std::span<const CellIndex> robot_cells);

}  // namespace perispace
