#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <sstream>

#include "perispace/cli.hpp"
#include "perispace/error.hpp"
#include "perispace/placement.hpp"
#include "perispace/records.hpp"

namespace py = pybind11;
using namespace perispace;

namespace {

// Grid states as a (z, y, x) uint8 array: 0 unknown, 1 free, 2 occupied.
py::array_t<std::uint8_t> grid_array(const VoxelGrid& g) {
  const auto& d = g.geometry().dims;
  py::array_t<std::uint8_t> out({d[2], d[1], d[0]});
  auto* dst = out.mutable_data();
  for (std::size_t i = 0; i < g.size(); ++i) dst[i] = static_cast<std::uint8_t>(g[i]);
  return out;
}

SensorPose make_pose(const Vec3& position, const Vec3& forward) {
  return {position, look_rotation(forward, Vec3::UnitZ())};
}

SceneModel scene_from(const SceneDocument& doc, std::size_t snapshot) {
  if (const auto* s = std::get_if<SceneModel>(&doc)) return *s;
  const auto& d = std::get<DynamicScene>(doc);
  if (snapshot >= d.snapshots.size()) throw py::index_error("snapshot out of range");
  return d.snapshots[snapshot];
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "perirobot-space coverage simulation";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IncompleteDataError>(m, "IncompleteDataError", PyExc_ValueError);

  py::enum_<CellState>(m, "CellState")
      .value("Unknown", CellState::Unknown)
      .value("Free", CellState::Free)
      .value("Occupied", CellState::Occupied);

  py::class_<VoxelGrid>(m, "VoxelGrid")
      .def_property_readonly("dims", [](const VoxelGrid& g) { return g.geometry().dims; })
      .def_property_readonly("resolution", [](const VoxelGrid& g) { return g.geometry().resolution; })
      .def_property_readonly("origin", [](const VoxelGrid& g) { return g.geometry().origin; })
      .def("__len__", &VoxelGrid::size)
      .def("state_at", [](const VoxelGrid& g, const Vec3& p) -> std::optional<CellState> {
        const auto c = g.geometry().cell_of(p);
        if (!c) return std::nullopt;
        return g[*c];
      })
      .def("to_numpy", &grid_array, "States as a (z, y, x) uint8 array")
      .def("count", [](const VoxelGrid& g, CellState s) {
        return std::count(g.cells().begin(), g.cells().end(), s);
      })
      .def(py::self == py::self);

  py::class_<SceneModel>(m, "Scene")
      .def_readonly("name", &SceneModel::name)
      .def_property_readonly("workspace_min", [](const SceneModel& s) { return s.workspace.min; })
      .def_property_readonly("workspace_max", [](const SceneModel& s) { return s.workspace.max; })
      .def_property_readonly("human_count", [](const SceneModel& s) { return s.humans.size(); })
      .def("keypoint", [](const SceneModel& s, std::size_t human, const std::string& joint) {
        const auto j = joint_from_name(joint);
        if (!j) throw py::key_error(joint);
        return s.humans.at(human)[*j];
      });

  m.def(
      "load_scene",
      [](const std::string& path, std::size_t snapshot) { return scene_from(load_scene_file(path), snapshot); },
      py::arg("path"), py::arg("snapshot") = 0, "Static scene, or one snapshot of a dynamic scene");
  m.def("snapshot_count", [](const std::string& path) -> std::size_t {
    const auto doc = load_scene_file(path);
    if (const auto* d = std::get_if<DynamicScene>(&doc)) return d->snapshots.size();
    return 1;
  });
  m.def("voxelize", &voxelize, py::arg("scene"), py::arg("resolution"));
  m.def("fuse", [](const std::vector<VoxelGrid>& grids) { return fuse(grids); });

  py::class_<RobotSphere>(m, "RobotSphere")
      .def_readonly("center", &RobotSphere::center)
      .def_readonly("radius", &RobotSphere::radius)
      .def_readonly("floor_z", &RobotSphere::floor_z);
  py::class_<HumanBox>(m, "HumanBox")
      .def_property_readonly("min", [](const HumanBox& h) { return h.box.min; })
      .def_property_readonly("max", [](const HumanBox& h) { return h.box.max; });
  m.def("robot_roi", &robot_roi, py::arg("scene"));
  m.def("human_roi", &human_roi, py::arg("scene"), py::arg("human") = 0, py::arg("margin") = 0.05);
  m.def("roi_cell_count", [](const VoxelGrid& g, const RegionOfInterest& roi) {
    return cells_in(g.geometry(), roi).size();
  });

  py::class_<ConfusionCounts>(m, "ConfusionCounts")
      .def(py::init([](std::uint64_t tp, std::uint64_t fp, std::uint64_t fn, std::uint64_t tn, std::uint64_t uo,
                       std::uint64_t uf) { return ConfusionCounts{tp, fp, fn, tn, uo, uf}; }),
           py::arg("tp") = 0, py::arg("fp") = 0, py::arg("fn") = 0, py::arg("tn") = 0, py::arg("uo") = 0,
           py::arg("uf") = 0)
      .def_readwrite("tp", &ConfusionCounts::tp)
      .def_readwrite("fp", &ConfusionCounts::fp)
      .def_readwrite("fn", &ConfusionCounts::fn)
      .def_readwrite("tn", &ConfusionCounts::tn)
      .def_readwrite("uo", &ConfusionCounts::uo)
      .def_readwrite("uf", &ConfusionCounts::uf)
      .def("total", &ConfusionCounts::total)
      .def(py::self == py::self)
      .def("__repr__", [](const ConfusionCounts& c) {
        std::ostringstream os;
        os << "ConfusionCounts(tp=" << c.tp << ", fp=" << c.fp << ", fn=" << c.fn << ", tn=" << c.tn
           << ", uo=" << c.uo << ", uf=" << c.uf << ")";
        return os.str();
      });

  m.def("f1", &f1);
  m.def("kappa", &kappa);
  m.def("confusion", py::overload_cast<const VoxelGrid&, const VoxelGrid&, const RegionOfInterest&>(&confusion),
        py::arg("estimate"), py::arg("truth"), py::arg("roi"));

  py::class_<CameraSpec>(m, "CameraSpec")
      .def(py::init<>())
      .def_readwrite("fov_h", &CameraSpec::fov_h)
      .def_readwrite("fov_v", &CameraSpec::fov_v)
      .def_readwrite("res_h", &CameraSpec::res_h)
      .def_readwrite("res_v", &CameraSpec::res_v)
      .def_readwrite("range_min", &CameraSpec::range_min)
      .def_readwrite("range_max", &CameraSpec::range_max)
      .def_readwrite("noise_sigma", &CameraSpec::noise_sigma)
      .def_readwrite("max_rays_h", &CameraSpec::max_rays_h)
      .def_readwrite("max_rays_v", &CameraSpec::max_rays_v);

  py::class_<LidarSpec>(m, "LidarSpec")
      .def(py::init<>())
      .def_readwrite("fov_h", &LidarSpec::fov_h)
      .def_readwrite("fov_v", &LidarSpec::fov_v)
      .def_readwrite("ang_res_h", &LidarSpec::ang_res_h)
      .def_readwrite("ang_res_v", &LidarSpec::ang_res_v)
      .def_readwrite("range_min", &LidarSpec::range_min)
      .def_readwrite("range_max", &LidarSpec::range_max)
      .def_readwrite("noise_sigma", &LidarSpec::noise_sigma);

  m.def(
      "sense_rgbd",
      [](const VoxelGrid& truth, const Vec3& position, const Vec3& forward, const CameraSpec& spec,
         std::uint64_t seed) {
        py::gil_scoped_release release;
        return sense_rgbd(truth, make_pose(position, forward), spec, seed);
      },
      py::arg("truth"), py::arg("position"), py::arg("forward"), py::arg("spec") = CameraSpec{},
      py::arg("seed") = 0);
  m.def(
      "sense_lidar",
      [](const VoxelGrid& truth, const Vec3& position, const Vec3& forward, const LidarSpec& spec,
         std::uint64_t seed) {
        py::gil_scoped_release release;
        return sense_lidar(truth, make_pose(position, forward), spec, seed);
      },
      py::arg("truth"), py::arg("position"), py::arg("forward"), py::arg("spec") = LidarSpec{},
      py::arg("seed") = 0);

  m.def(
      "lattice",
      [](const Vec3& lo, const Vec3& hi, double spacing, double margin) {
        PoseLattice l;
        l.spacing = spacing;
        l.margin = margin;
        py::list out;
        for (const CandidatePose& p : generate_lattice(Aabb{lo, hi}, l)) {
          const Vec3 forward = p.pose.orientation * Vec3::UnitX();
          out.append(py::make_tuple(std::string(surface_name(p.surface)), p.position_index, p.orientation_index,
                                    p.pose.position, forward));
        }
        return out;
      },
      py::arg("workspace_min"), py::arg("workspace_max"), py::arg("spacing") = 0.6, py::arg("margin") = 0.0,
      "(surface, position_index, orientation_index, position, forward) for every candidate pose");

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs one perispace command line; returns (exit_code, stdout, stderr)");
}
