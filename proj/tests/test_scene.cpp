#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "perispace/error.hpp"
#include "perispace/scene.hpp"
#include "support.hpp"

namespace perispace {
namespace {

using testing::load_static;

const char* kMinimal = R"({
  "name": "minimal",
  "workspace": {"min": [0, 0, 0], "max": [2, 2, 2]},
  "robot": {"base": {"position": [1, 1, 0.5]}, "reach": 0.5, "links": []}
})";

std::string human_doc(const std::string& skip_joint) {
  std::string kps;
  const char* names[] = {"head", "neck", "pelvis", "l_shoulder", "r_shoulder", "l_elbow", "r_elbow", "l_wrist",
                         "r_wrist", "l_hip", "r_hip", "l_knee", "r_knee", "l_ankle", "r_ankle"};
  for (const char* n : names) {
    if (n == skip_joint) continue;
    if (!kps.empty()) kps += ", ";
    kps += std::string("\"") + n + "\": [1, 1, 1]";
  }
  return R"({"workspace": {"min": [0, 0, 0], "max": [2, 2, 2]},
             "robot": {"base": {"position": [1, 1, 0.5]}, "reach": 0.5},
             "humans": [{"name": "h", "keypoints": {)" + kps + "}}]}";
}

TEST(LoadScene, Minimal) {
  const auto doc = load_scene(kMinimal);
  const auto& s = std::get<SceneModel>(doc);
  EXPECT_EQ(s.name, "minimal");
  EXPECT_TRUE(s.statics.empty());
  EXPECT_TRUE(s.humans.empty());
  EXPECT_DOUBLE_EQ(s.robot.reach, 0.5);
}

TEST(LoadScene, MissingJointIsNamed) {
  EXPECT_NO_THROW(load_scene(human_doc("")));
  try {
    load_scene(human_doc("l_wrist"));
    FAIL() << "expected an error";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("l_wrist"), std::string::npos) << e.what();
  }
}

TEST(LoadScene, SyntaxErrorHasLine) {
  try {
    load_scene("{\n  \"workspace\": {\n  ]\n}");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(LoadScene, ZeroReachRejected) {
  std::string doc = kMinimal;
  doc.replace(doc.find("\"reach\": 0.5"), 12, "\"reach\": 0");
  EXPECT_THROW(load_scene(doc), ConfigError);
}

TEST(LoadScene, PrimitiveOutsideWorkspace) {
  const std::string doc = R"({"workspace": {"min": [0, 0, 0], "max": [2, 2, 2]},
    "statics": [{"type": "sphere", "center": [1.9, 1, 1], "radius": 0.2}],
    "robot": {"base": {"position": [1, 1, 0.5]}, "reach": 0.5}})";
  EXPECT_THROW(load_scene(doc), ConfigError);
}

TEST(LoadScene, BundledFixtures) {
  const SceneModel s1 = load_static("scene1.json");
  EXPECT_EQ(s1.humans.size(), 1u);
  EXPECT_FALSE(s1.robot.links.empty());
  EXPECT_FALSE(s1.statics.empty());
  EXPECT_EQ(load_static("scene3.json").humans.size(), 2u);
  const auto walk = load_scene_file(testing::data_dir() / "walk.json");
  ASSERT_TRUE(std::holds_alternative<DynamicScene>(walk));
  EXPECT_EQ(std::get<DynamicScene>(walk).snapshots.size(), 27u);
}

TEST(Voxelize, AlignedCube) {
  SceneModel s = std::get<SceneModel>(load_scene(kMinimal));
  s.robot.links.clear();
  s.statics.push_back(Box{Vec3(0.5, 0.5, 0.5), Vec3::Constant(0.1)});
  const VoxelGrid g = voxelize(s, 0.1);
  EXPECT_EQ(std::count(g.cells().begin(), g.cells().end(), CellState::Occupied), 8);
  EXPECT_EQ(std::count(g.cells().begin(), g.cells().end(), CellState::Unknown), 0);
}

TEST(Voxelize, EmptySceneAllFree) {
  const SceneModel s = std::get<SceneModel>(load_scene(kMinimal));
  const VoxelGrid g = voxelize(s, 0.1);
  EXPECT_EQ(std::count(g.cells().begin(), g.cells().end(), CellState::Free), static_cast<long>(g.size()));
}

TEST(Voxelize, HumanMatchesCapsuleOracle) {
  SceneModel s = load_static("scene2.json");
  s.statics.clear();
  s.robot.links.clear();
  const VoxelGrid g = voxelize(s, 0.05);
  const HumanSkeleton& h = s.humans[0];
  const GridGeometry& geo = g.geometry();
  for (CellIndex i = 0; i < g.size(); ++i) {
    const Vec3 p = geo.cell_center(i);
    bool in = (p - h[Joint::Head]).norm() <= h.head_radius;
    for (const auto& [a, b] : bone_edges()) in = in || segment_distance(p, h[a], h[b]) <= h.limb_radius;
    ASSERT_EQ(g[i] == CellState::Occupied, in) << i;
  }
}

TEST(Voxelize, ResolutionConsistency) {
  const SceneModel s = load_static("scene3.json");
  for (double res : {0.1, 0.05}) {
    const GridGeometry geo = make_geometry(s.workspace, res);
    for (const Primitive& p : s.statics) {
      const Aabb b = bounds(p);
      if (b.extent().minCoeff() < 2 * res) continue;
      const std::vector<Primitive> one{p};
      EXPECT_FALSE(rasterize(geo, one).empty());
    }
  }
}

TEST(RobotRoi, SemiSphere) {
  const SceneModel s = load_static("scene1.json");
  const auto& roi = std::get<RobotSphere>(robot_roi(s));
  EXPECT_EQ(roi.center, s.robot.base.position);
  EXPECT_DOUBLE_EQ(roi.radius, 0.9);
  EXPECT_DOUBLE_EQ(roi.floor_z, 0.75);
}

TEST(RobotRoi, VolumeAndContents) {
  const SceneModel s = load_static("scene1.json");
  const VoxelGrid truth = voxelize(s, 0.05);
  const RegionOfInterest roi = robot_roi(s);
  const auto cells = cells_in(truth.geometry(), roi);
  EXPECT_EQ(cells.size(), 12232u);  // brute-force count, tests/oracles/derive.py
  const double analytic = 2.0 / 3.0 * std::numbers::pi * std::pow(0.9, 3) / std::pow(0.05, 3);
  EXPECT_NEAR(static_cast<double>(cells.size()), analytic, 0.1 * analytic);
  const GridGeometry& geo = truth.geometry();
  for (CellIndex c : robot_cells(s, geo))
    if (geo.cell_center(c).z() >= 0.75) EXPECT_TRUE(contains(roi, geo.cell_center(c)));
}

TEST(HumanRoi, BoxAndMargin) {
  const SceneModel s = load_static("scene3.json");
  const Aabb b0 = std::get<HumanBox>(human_roi(s, 0, 0.0)).box;
  const Aabb b1 = std::get<HumanBox>(human_roi(s, 0, 0.1)).box;
  const Aabb kp = s.humans[0].keypoint_bounds();
  EXPECT_TRUE(((b0.min - (kp.min.array() - s.humans[0].body_radius()).matrix()).array().abs() < 1e-12).all());
  EXPECT_TRUE(((b1.min - b0.min).array() + 0.1).abs().maxCoeff() < 1e-12);
  EXPECT_TRUE(((b1.max - b0.max).array() - 0.1).abs().maxCoeff() < 1e-12);
  const Aabb other = std::get<HumanBox>(human_roi(s, 1, 0.0)).box;
  EXPECT_NE(other.min, b0.min);
  EXPECT_THROW(human_roi(s, 2, 0.0), std::out_of_range);
}

TEST(HumanRoi, ContainsBody) {
  const SceneModel s = load_static("scene2.json");
  const GridGeometry geo = make_geometry(s.workspace, 0.05);
  const RegionOfInterest roi = human_roi(s, 0, 0.0);
  const auto body = s.humans[0].body();
  for (CellIndex c : rasterize(geo, body)) EXPECT_TRUE(contains(roi, geo.cell_center(c)));
}

TEST(KeypointVolume, SphereOnCellCentre) {
  const GridGeometry geo = make_geometry({Vec3::Zero(), Vec3::Constant(1.0)}, 0.05);
  KeypointSet kp;
  kp[static_cast<std::size_t>(Joint::LWrist)] = geo.cell_center(Index3{10, 10, 10});
  EXPECT_EQ(keypoint_volume(geo, kp, KeypointModel::Spheres, 0.1).size(), 33u);
}

TEST(KeypointVolume, CylinderBetweenTwoKeypoints) {
  const GridGeometry geo = make_geometry({Vec3::Zero(), Vec3::Constant(1.0)}, 0.05);
  KeypointSet kp, swapped;
  kp[static_cast<std::size_t>(Joint::LElbow)] = Vec3(0.5125, 0.5, 0.5);
  kp[static_cast<std::size_t>(Joint::LWrist)] = Vec3(0.9125, 0.5, 0.5);
  swapped[static_cast<std::size_t>(Joint::LElbow)] = kp[static_cast<std::size_t>(Joint::LWrist)];
  swapped[static_cast<std::size_t>(Joint::LWrist)] = kp[static_cast<std::size_t>(Joint::LElbow)];
  const auto cells = keypoint_volume(geo, kp, KeypointModel::Cylinders, 0.05);
  EXPECT_EQ(cells.size(), 32u);
  EXPECT_EQ(keypoint_volume(geo, swapped, KeypointModel::Cylinders, 0.05), cells);
  // One end alone draws nothing.
  KeypointSet lone;
  lone[static_cast<std::size_t>(Joint::LWrist)] = Vec3(0.5, 0.5, 0.5);
  EXPECT_TRUE(keypoint_volume(geo, lone, KeypointModel::Cylinders, 0.05).empty());
}

TEST(KeypointVolume, BoxContainsSpheresInHull) {
  const SceneModel s = load_static("scene1.json");
  const GridGeometry geo = make_geometry(s.workspace, 0.05);
  const KeypointSet kp = s.humans[0].all_keypoints();
  const auto box = keypoint_volume(geo, kp, KeypointModel::BoundingBox, 0.0);
  const auto sph = keypoint_volume(geo, kp, KeypointModel::Spheres, 0.05);
  const Aabb hull = s.humans[0].keypoint_bounds();
  for (CellIndex c : sph)
    if (hull.contains(geo.cell_center(c))) EXPECT_TRUE(std::binary_search(box.begin(), box.end(), c));
  EXPECT_TRUE(keypoint_volume(geo, KeypointSet{}, KeypointModel::Spheres, 0.1).empty());
}

}  // namespace
}  // namespace perispace
