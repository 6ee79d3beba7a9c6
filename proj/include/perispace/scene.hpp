#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "perispace/geometry.hpp"
#include "perispace/occupancy.hpp"

namespace perispace {

enum class Joint : std::uint8_t {
  Head,
  Neck,
  Pelvis,
  LShoulder,
  RShoulder,
  LElbow,
  RElbow,
  LWrist,
  RWrist,
  LHip,
  RHip,
  LKnee,
  RKnee,
  LAnkle,
  RAnkle,
};

inline constexpr std::size_t kJointCount = 15;

std::string_view joint_name(Joint j);
std::optional<Joint> joint_from_name(std::string_view name);
std::span<const Joint> all_joints();

// The 14 edges of the fixed skeleton tree.
std::span<const std::pair<Joint, Joint>> bone_edges();

// Partial observation of a skeleton: a position per joint when known.
using KeypointSet = std::array<std::optional<Vec3>, kJointCount>;

struct HumanSkeleton {
  std::string name;
  std::array<Vec3, kJointCount> keypoints;
  double limb_radius = 0.07;
  double head_radius = 0.11;

  const Vec3& operator[](Joint j) const { return keypoints[static_cast<std::size_t>(j)]; }
  Vec3& operator[](Joint j) { return keypoints[static_cast<std::size_t>(j)]; }

  // Capsules of limb_radius along the bones plus a head sphere.
  std::vector<Primitive> body() const;
  // Largest radius of the body volume around any keypoint.
  double body_radius() const { return std::max(limb_radius, head_radius); }
  Aabb keypoint_bounds() const;
  KeypointSet all_keypoints() const;
};

struct RobotModel {
  Pose base;
  std::vector<Primitive> links;
  double reach = 0.0;
};

struct SceneModel {
  std::string name;
  Aabb workspace;
  std::vector<Primitive> statics;
  RobotModel robot;
  std::vector<HumanSkeleton> humans;
};

// Snapshots share the workspace and static geometry.
struct DynamicScene {
  std::string name;
  std::vector<SceneModel> snapshots;
};

using SceneDocument = std::variant<SceneModel, DynamicScene>;

// Throws ParseError (with line/column) on malformed JSON and on missing or
// mistyped fields, ConfigError when an invariant is violated.
SceneDocument load_scene(std::string_view document);
SceneDocument load_scene_file(const std::filesystem::path& path);

// Throws ConfigError naming the offending entity.
void validate(const SceneModel& scene);
void validate(const DynamicScene& scene);

// Ground truth: Occupied iff the cell centre lies in any static, robot link
// or human body primitive; Free otherwise.
VoxelGrid voxelize(const SceneModel& scene, double resolution);

// Cells of `geometry` whose centres lie in any of the primitives, ascending.
std::vector<CellIndex> rasterize(const GridGeometry& geometry, std::span<const Primitive> primitives);

std::vector<CellIndex> robot_cells(const SceneModel& scene, const GridGeometry& geometry);

RegionOfInterest robot_roi(const SceneModel& scene);

// Keypoint hull grown by the body radius plus `margin`. Throws
// std::out_of_range for a bad index.
RegionOfInterest human_roi(const SceneModel& scene, std::size_t human_index, double margin);

enum class KeypointModel { BoundingBox, Spheres, Cylinders };

// Cells whose centres fall in the model volume built from the present
// keypoints. Cylinders are drawn only for bones with both joints present.
std::vector<CellIndex> keypoint_volume(const GridGeometry& geometry, const KeypointSet& keypoints,
                                       KeypointModel model, double radius);

}  // namespace perispace
