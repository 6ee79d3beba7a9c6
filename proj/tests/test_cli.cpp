#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "perispace/cli.hpp"
#include "perispace/records.hpp"
#include "support.hpp"

namespace perispace {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("perispace_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Two scenes, one camera yawed through three headings, two interpretations.
  fs::path small_config(const std::string& interp = "pc") {
    const std::string data = testing::data_dir().string();
    const fs::path p = dir_ / "small.json";
    write(p, R"({"mode": "sweep", "seed": 7, "resolution": 0.1, "workers": 2,
      "scenes": [")" + data + R"(/scene1.json", ")" + data + R"(/scene2.json"],
      "rois": [{"name": "robot", "kind": "robot"}, {"name": "human", "kind": "human", "human": 0}],
      "interpretations": ["zone", ")" + interp + R"("],
      "sensors": [{"id": "cam", "type": "rgbd",
        "spec": {"max_rays_h": 48, "max_rays_v": 27, "noise_sigma": 0.01},
        "yaw_sweep": {"position": [2.0, 0.05, 1.8], "heading_deg": 90, "pitch_deg": -30,
                      "from_deg": -20, "to_deg": 20, "step_deg": 20}}]})");
    return p;
  }

  fs::path dir_;
};

TEST_F(Cli, VoxelizeIsRepeatable) {
  const std::string scene = (testing::data_dir() / "scene1.json").string();
  const Result a = run({"voxelize", "--scene", scene, "--resolution", "0.1", "--out", (dir_ / "a").string()});
  ASSERT_EQ(a.code, 0) << a.err;
  const Result b = run({"voxelize", "--scene", scene, "--resolution", "0.1", "--out", (dir_ / "b").string()});
  ASSERT_EQ(b.code, 0) << b.err;
  const std::string grid = slurp(dir_ / "a" / "scene1.grid");
  EXPECT_FALSE(grid.empty());
  EXPECT_EQ(grid, slurp(dir_ / "b" / "scene1.grid"));
}

TEST_F(Cli, MissingSceneFile) {
  const std::string missing = (dir_ / "nope.json").string();
  const Result r = run({"voxelize", "--scene", missing, "--resolution", "0.1", "--out", dir_.string()});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find(missing), std::string::npos) << r.err;
}

TEST_F(Cli, NonPositiveResolution) {
  const std::string scene = (testing::data_dir() / "scene1.json").string();
  EXPECT_EQ(run({"voxelize", "--scene", scene, "--resolution", "0", "--out", dir_.string()}).code, cli::kExitUsage);
  EXPECT_EQ(run({"voxelize", "--scene", scene, "--resolution", "-0.1", "--out", dir_.string()}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--config", small_config().string(), "--resolution", "0", "--out", dir_.string()}).code,
            cli::kExitUsage);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"voxelize", "--resolution", "0.1"}).code, cli::kExitUsage);
}

TEST_F(Cli, SweepTwiceIsByteIdentical) {
  const fs::path cfg = small_config();
  const Result a = run({"sweep", "--config", cfg.string(), "--out", (dir_ / "a").string()});
  ASSERT_EQ(a.code, 0) << a.err;
  const Result b = run({"sweep", "--config", cfg.string(), "--workers", "1", "--out", (dir_ / "b").string()});
  ASSERT_EQ(b.code, 0) << b.err;
  const std::string csv = slurp(dir_ / "a" / "records.csv");
  // header + 3 yaws x 2 scenes x 2 rois x 2 interpretations
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 24);
  EXPECT_EQ(csv, slurp(dir_ / "b" / "records.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "summary.json"), slurp(dir_ / "b" / "summary.json"));
  // A different seed changes the noise.
  ASSERT_EQ(run({"sweep", "--config", cfg.string(), "--seed", "8", "--out", (dir_ / "c").string()}).code, 0);
  EXPECT_NE(csv, slurp(dir_ / "c" / "records.csv"));
}

TEST_F(Cli, UnknownInterpretationNamesField) {
  const Result r = run({"sweep", "--config", small_config("pc+hat").string(), "--out", dir_.string()});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("interpretations"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("pc+hat"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir_ / "records.csv"));
}

TEST_F(Cli, MalformedRecords) {
  const fs::path bad = dir_ / "bad.csv";
  write(bad, "combo_id,pose_id\ncam,0\n");
  const Result r = run({"report", bad.string()});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("bad.csv"), std::string::npos) << r.err;
  EXPECT_EQ(run({"heatmap", (dir_ / "absent.csv").string(), "--out", dir_.string()}).code, cli::kExitUsage);
}

std::string record_line(std::size_t pose, double x, double z, const std::string& counts, const std::string& scores) {
  std::ostringstream os;
  os << "lidar," << pose << ",front," << x << ",3.5," << z << ",1,0,0,0,scene1,robot,pc," << counts << ","
     << scores << "\n";
  return os.str();
}

TEST_F(Cli, HeatmapOfPerfectScoresIsWhite) {
  const fs::path csv = dir_ / "records.csv";
  std::string text = std::string(kRecordsHeader) + "\n";
  std::size_t id = 0;
  for (double x : {0.5, 1.0, 1.5})
    for (double z : {1.0, 2.0}) text += record_line(id++, x, z, "10,0,0,90,0,0", "1.000000,1.000000");
  write(csv, text);
  const Result r = run({"heatmap", csv.string(), "--metric", "kappa", "--out", (dir_ / "hm").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string pgm = slurp(dir_ / "hm" / "heatmap_lidar_scene1_robot_pc_kappa_front.pgm");
  ASSERT_EQ(pgm.rfind("P5\n3 2\n255\n", 0), 0u) << pgm.substr(0, 16);
  const std::string pixels = pgm.substr(pgm.size() - 6);
  EXPECT_EQ(pixels, std::string(6, '\xff'));
  const std::string matrix = slurp(dir_ / "hm" / "heatmap_lidar_scene1_robot_pc_kappa_front.csv");
  EXPECT_NE(matrix.find("1.000000"), std::string::npos);
}

TEST_F(Cli, ReportTopOneAndEnvironmentOutput) {
  const fs::path cfg = small_config();
  ::setenv("PERISPACE_OUT", (dir_ / "env").string().c_str(), 1);
  const Result s = run({"sweep", "--config", cfg.string()});
  ::unsetenv("PERISPACE_OUT");
  ASSERT_EQ(s.code, 0) << s.err;
  ASSERT_TRUE(fs::exists(dir_ / "env" / "records.csv"));
  const Result r = run({"report", (dir_ / "env" / "records.csv").string(), "--top", "1", "--scene", "scene2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("scene2"), std::string::npos);
  EXPECT_EQ(r.out.find("scene1"), std::string::npos) << r.out;
  EXPECT_EQ(run({"report", (dir_ / "env" / "records.csv").string(), "--top", "0"}).code, cli::kExitUsage);
}

TEST_F(Cli, FailedSweepLeavesNoPartialOutput) {
  const std::string data = testing::data_dir().string();
  const fs::path cfg = dir_ / "pads.json";
  // The second pad centre sticks out of the room, so the run fails midway.
  write(cfg, R"({"mode": "sweep", "seed": 1, "resolution": 0.1,
    "scenes": [")" + data + R"(/scene1.json"], "rois": [{"name": "robot", "kind": "robot"}],
    "interpretations": ["pad"],
    "sensors": [{"id": "pad", "type": "pad", "centers": [[1.0, 1.0], [3.9, 1.0]]}]})");
  const Result r = run({"sweep", "--config", cfg.string(), "--out", (dir_ / "out").string()});
  EXPECT_NE(r.code, 0);
  EXPECT_FALSE(fs::exists(dir_ / "out" / "records.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "out" / "summary.json"));
}

}  // namespace
}  // namespace perispace
