#include "perispace/scene.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "perispace/error.hpp"
#include "perispace/json_util.hpp"

namespace perispace {

namespace {

constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "head",  "neck",   "pelvis", "l_shoulder", "r_shoulder", "l_elbow", "r_elbow", "l_wrist",
    "r_wrist", "l_hip", "r_hip",  "l_knee",     "r_knee",     "l_ankle", "r_ankle",
};

constexpr std::array<Joint, kJointCount> kJoints = {
    Joint::Head,  Joint::Neck,   Joint::Pelvis, Joint::LShoulder, Joint::RShoulder,
    Joint::LElbow, Joint::RElbow, Joint::LWrist, Joint::RWrist,    Joint::LHip,
    Joint::RHip,  Joint::LKnee,  Joint::RKnee,  Joint::LAnkle,    Joint::RAnkle,
};

constexpr std::array<std::pair<Joint, Joint>, kJointCount - 1> kBones = {{
    {Joint::Head, Joint::Neck},
    {Joint::Neck, Joint::LShoulder},
    {Joint::Neck, Joint::RShoulder},
    {Joint::LShoulder, Joint::LElbow},
    {Joint::LElbow, Joint::LWrist},
    {Joint::RShoulder, Joint::RElbow},
    {Joint::RElbow, Joint::RWrist},
    {Joint::Neck, Joint::Pelvis},
    {Joint::Pelvis, Joint::LHip},
    {Joint::Pelvis, Joint::RHip},
    {Joint::LHip, Joint::LKnee},
    {Joint::LKnee, Joint::LAnkle},
    {Joint::RHip, Joint::RKnee},
    {Joint::RKnee, Joint::RAnkle},
}};

using json = nlohmann::json;
using namespace jsonutil;

Primitive read_primitive(const json& j, const std::string& path) {
  const std::string type = read_string(j, "type", path);
  Primitive p;
  if (type == "box") {
    p = Box{read_vec3(j, "center", path), read_vec3(j, "half_extents", path)};
  } else if (type == "sphere") {
    p = Sphere{read_vec3(j, "center", path), read_number(j, "radius", path)};
  } else if (type == "capsule") {
    p = Capsule{read_vec3(j, "a", path), read_vec3(j, "b", path), read_number(j, "radius", path)};
  } else if (type == "cylinder") {
    p = Cylinder{read_vec3(j, "a", path), read_vec3(j, "b", path), read_number(j, "radius", path)};
  } else {
    throw ParseError(path + ".type: unknown primitive type '" + type + "'");
  }
  validate(p, path);
  return p;
}

std::vector<Primitive> read_primitives(const json& j, const char* key, const std::string& path) {
  std::vector<Primitive> out;
  if (!j.contains(key)) return out;
  const json& arr = j.at(key);
  const std::string here = path.empty() ? key : path + "." + key;
  if (!arr.is_array()) throw ParseError(here + ": expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(read_primitive(arr[i], here + "[" + std::to_string(i) + "]"));
  return out;
}

RobotModel read_robot(const json& j, const std::string& path) {
  expect_object(j, path);
  RobotModel r;
  r.base = read_pose(require(j, "base", path), path + ".base");
  r.reach = read_number(j, "reach", path);
  r.links = read_primitives(j, "links", path);
  return r;
}

HumanSkeleton read_human(const json& j, const std::string& path) {
  expect_object(j, path);
  HumanSkeleton h;
  h.name = j.contains("name") ? read_string(j, "name", path) : path;
  h.limb_radius = read_number(j, "limb_radius", path, 0.07);
  h.head_radius = read_number(j, "head_radius", path, 0.11);
  const json& kps = require(j, "keypoints", path);
  expect_object(kps, path + ".keypoints");
  for (const auto& [key, value] : kps.items())
    if (!joint_from_name(key)) throw ParseError(path + ".keypoints: unknown joint '" + key + "'");
  for (Joint joint : kJoints) {
    const std::string name(joint_name(joint));
    if (!kps.contains(name))
      throw ConfigError("human '" + h.name + "' (" + path + "): missing joint '" + name + "'");
    h[joint] = read_vec3(kps, name.c_str(), path + ".keypoints");
  }
  return h;
}

std::vector<HumanSkeleton> read_humans(const json& j, const std::string& path) {
  std::vector<HumanSkeleton> out;
  if (!j.contains("humans")) return out;
  const json& arr = j.at("humans");
  const std::string here = path.empty() ? "humans" : path + ".humans";
  if (!arr.is_array()) throw ParseError(here + ": expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(read_human(arr[i], here + "[" + std::to_string(i) + "]"));
  return out;
}

Aabb read_workspace(const json& j) {
  const json& w = require(j, "workspace", "");
  expect_object(w, "workspace");
  return {read_vec3(w, "min", "workspace"), read_vec3(w, "max", "workspace")};
}

}  // namespace

std::string_view joint_name(Joint j) { return kJointNames[static_cast<std::size_t>(j)]; }

std::optional<Joint> joint_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kJointCount; ++i)
    if (kJointNames[i] == name) return kJoints[i];
  return std::nullopt;
}

std::span<const Joint> all_joints() { return kJoints; }

std::span<const std::pair<Joint, Joint>> bone_edges() { return kBones; }

std::vector<Primitive> HumanSkeleton::body() const {
  std::vector<Primitive> out;
  out.reserve(kBones.size() + 1);
  for (const auto& [a, b] : kBones) out.push_back(Capsule{(*this)[a], (*this)[b], limb_radius});
  out.push_back(Sphere{(*this)[Joint::Head], head_radius});
  return out;
}

Aabb HumanSkeleton::keypoint_bounds() const {
  Aabb box{keypoints[0], keypoints[0]};
  for (const Vec3& k : keypoints) {
    box.min = box.min.cwiseMin(k);
    box.max = box.max.cwiseMax(k);
  }
  return box;
}

KeypointSet HumanSkeleton::all_keypoints() const {
  KeypointSet out;
  for (std::size_t i = 0; i < kJointCount; ++i) out[i] = keypoints[i];
  return out;
}

void validate(const SceneModel& scene) {
  const std::string label = "scene '" + scene.name + "'";
  if (!(scene.workspace.extent().array() > 0.0).all())
    throw ConfigError(label + ": workspace must have positive extent");
  for (std::size_t i = 0; i < scene.statics.size(); ++i) {
    const std::string what = "statics[" + std::to_string(i) + "]";
    validate(scene.statics[i], what);
    if (!scene.workspace.contains(bounds(scene.statics[i])))
      throw ConfigError(label + ": " + what + " extends outside the workspace");
  }
  const RobotModel& robot = scene.robot;
  if (!(robot.reach > 0.0)) throw ConfigError(label + ": robot reach must be positive");
  if (std::abs(robot.base.orientation.norm() - 1.0) > 1e-9)
    throw ConfigError(label + ": robot base orientation is not a unit quaternion");
  if (!scene.workspace.contains(robot.base.position))
    throw ConfigError(label + ": robot base lies outside the workspace");
  for (std::size_t i = 0; i < robot.links.size(); ++i) {
    const std::string what = "robot.links[" + std::to_string(i) + "]";
    validate(robot.links[i], what);
    if (!scene.workspace.contains(bounds(robot.links[i])))
      throw ConfigError(label + ": " + what + " extends outside the workspace");
    if (max_distance_from(robot.links[i], robot.base.position) > robot.reach + 1e-9)
      throw ConfigError(label + ": " + what + " lies beyond the robot reach");
  }
  for (const HumanSkeleton& h : scene.humans) {
    if (!(h.limb_radius > 0.0) || !(h.head_radius > 0.0))
      throw ConfigError(label + ": human '" + h.name + "' needs positive limb and head radii");
    for (Joint j : kJoints)
      if (!scene.workspace.contains(h[j]))
        throw ConfigError(label + ": human '" + h.name + "' joint '" + std::string(joint_name(j)) +
                          "' lies outside the workspace");
  }
}

void validate(const DynamicScene& scene) {
  if (scene.snapshots.empty()) throw ConfigError("dynamic scene '" + scene.name + "' has no snapshots");
  const Aabb& w = scene.snapshots.front().workspace;
  for (const SceneModel& s : scene.snapshots) {
    if (s.workspace.min != w.min || s.workspace.max != w.max)
      throw ConfigError("dynamic scene '" + scene.name + "': snapshot '" + s.name + "' changes the workspace");
    validate(s);
  }
}

SceneDocument load_scene(std::string_view document) {
  const json root = parse_document(document);
  expect_object(root, "scene");
  const std::string name = root.contains("name") ? read_string(root, "name", "") : "scene";
  const Aabb workspace = read_workspace(root);
  const std::vector<Primitive> statics = read_primitives(root, "statics", "");

  if (root.contains("snapshots")) {
    const json& snaps = root.at("snapshots");
    if (!snaps.is_array()) throw ParseError("snapshots: expected an array");
    DynamicScene dyn;
    dyn.name = name;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
      const std::string path = "snapshots[" + std::to_string(i) + "]";
      expect_object(snaps[i], path);
      SceneModel s;
      char suffix[16];
      std::snprintf(suffix, sizeof suffix, "#%02zu", i);
      s.name = name + suffix;
      s.workspace = workspace;
      s.statics = statics;
      s.robot = read_robot(require(snaps[i], "robot", path), path + ".robot");
      s.humans = read_humans(snaps[i], path);
      dyn.snapshots.push_back(std::move(s));
    }
    validate(dyn);
    return dyn;
  }

  SceneModel scene;
  scene.name = name;
  scene.workspace = workspace;
  scene.statics = statics;
  scene.robot = read_robot(require(root, "robot", ""), "robot");
  scene.humans = read_humans(root, "");
  validate(scene);
  return scene;
}

SceneDocument load_scene_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scene file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return load_scene(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::vector<CellIndex> rasterize(const GridGeometry& geometry, std::span<const Primitive> primitives) {
  std::vector<CellIndex> out;
  for (const Primitive& p : primitives)
    geometry.for_each_center_in(
        bounds(p), [&](const Vec3& c) { return contains(p, c); }, [&](CellIndex i, const Vec3&) { out.push_back(i); });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VoxelGrid voxelize(const SceneModel& scene, double resolution) {
  VoxelGrid grid = new_grid(scene.workspace, resolution, CellState::Free);
  std::vector<Primitive> all = scene.statics;
  all.insert(all.end(), scene.robot.links.begin(), scene.robot.links.end());
  for (const HumanSkeleton& h : scene.humans) {
    const auto body = h.body();
    all.insert(all.end(), body.begin(), body.end());
  }
  for (CellIndex i : rasterize(grid.geometry(), all)) grid.mark_occupied(i);
  return grid;
}

std::vector<CellIndex> robot_cells(const SceneModel& scene, const GridGeometry& geometry) {
  return rasterize(geometry, scene.robot.links);
}

RegionOfInterest robot_roi(const SceneModel& scene) {
  const Vec3& base = scene.robot.base.position;
  return RobotSphere{base, scene.robot.reach, base.z()};
}

RegionOfInterest human_roi(const SceneModel& scene, std::size_t human_index, double margin) {
  if (human_index >= scene.humans.size())
    throw std::out_of_range("scene '" + scene.name + "' has no human with index " + std::to_string(human_index));
  const HumanSkeleton& h = scene.humans[human_index];
  return HumanBox{h.keypoint_bounds().expanded(h.body_radius() + margin)};
}

std::vector<CellIndex> keypoint_volume(const GridGeometry& geometry, const KeypointSet& keypoints,
                                       KeypointModel model, double radius) {
  std::vector<Primitive> shapes;
  switch (model) {
    case KeypointModel::BoundingBox: {
      std::optional<Aabb> hull;
      for (const auto& k : keypoints) {
        if (!k) continue;
        if (!hull) {
          hull = Aabb{*k, *k};
        } else {
          hull->min = hull->min.cwiseMin(*k);
          hull->max = hull->max.cwiseMax(*k);
        }
      }
      if (!hull) return {};
      std::vector<CellIndex> out;
      geometry.for_each_center_in(
          *hull, [&](const Vec3& c) { return hull->contains(c); }, [&](CellIndex i, const Vec3&) { out.push_back(i); });
      return out;
    }
    case KeypointModel::Spheres:
      for (const auto& k : keypoints)
        if (k) shapes.push_back(Sphere{*k, radius});
      break;
    case KeypointModel::Cylinders:
      for (const auto& [a, b] : kBones) {
        const auto& ka = keypoints[static_cast<std::size_t>(a)];
        const auto& kb = keypoints[static_cast<std::size_t>(b)];
        if (ka && kb && (*ka - *kb).norm() > 0.0) shapes.push_back(Cylinder{*ka, *kb, radius});
      }
      break;
  }
  return rasterize(geometry, shapes);
}

}  // namespace perispace
