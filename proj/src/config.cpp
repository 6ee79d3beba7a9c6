#include "perispace/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "perispace/error.hpp"
#include "perispace/json_util.hpp"

namespace perispace {

using json = nlohmann::json;
using namespace jsonutil;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Rejects keys outside `allowed` so typos do not silently fall back to
// defaults.
void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& path) {
  expect_object(j, path);
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (std::string_view a : allowed) ok = ok || a == key;
    if (!ok) throw ParseError(join_path(path, key) + ": unknown field");
  }
}

int read_int_or(const json& j, const char* key, const std::string& path, int fallback) {
  if (!j.contains(key)) return fallback;
  const long long v = read_integer(j, key, path);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ParseError(join_path(path, key) + ": integer out of range");
  return static_cast<int>(v);
}

CameraSpec parse_camera(const json& j, const std::string& path) {
  check_keys(j,
             {"fov_h", "fov_v", "res_h", "res_v", "range_min", "range_max", "noise_sigma", "depth_enabled",
              "full_resolution", "max_rays_h", "max_rays_v"},
             path);
  CameraSpec s;
  s.fov_h = read_number(j, "fov_h", path, s.fov_h);
  s.fov_v = read_number(j, "fov_v", path, s.fov_v);
  s.res_h = read_int_or(j, "res_h", path, s.res_h);
  s.res_v = read_int_or(j, "res_v", path, s.res_v);
  s.range_min = read_number(j, "range_min", path, s.range_min);
  s.range_max = read_number(j, "range_max", path, s.range_max);
  s.noise_sigma = read_number(j, "noise_sigma", path, s.noise_sigma);
  s.depth_enabled = read_bool(j, "depth_enabled", path, s.depth_enabled);
  s.full_resolution = read_bool(j, "full_resolution", path, s.full_resolution);
  s.max_rays_h = read_int_or(j, "max_rays_h", path, s.max_rays_h);
  s.max_rays_v = read_int_or(j, "max_rays_v", path, s.max_rays_v);
  return s;
}

LidarSpec parse_lidar(const json& j, const std::string& path) {
  check_keys(j, {"fov_h", "fov_v", "ang_res_h", "ang_res_v", "range_min", "range_max", "noise_sigma"}, path);
  LidarSpec s;
  s.fov_h = read_number(j, "fov_h", path, s.fov_h);
  s.fov_v = read_number(j, "fov_v", path, s.fov_v);
  s.ang_res_h = read_number(j, "ang_res_h", path, s.ang_res_h);
  s.ang_res_v = read_number(j, "ang_res_v", path, s.ang_res_v);
  s.range_min = read_number(j, "range_min", path, s.range_min);
  s.range_max = read_number(j, "range_max", path, s.range_max);
  s.noise_sigma = read_number(j, "noise_sigma", path, s.noise_sigma);
  return s;
}

PadSpec parse_pad(const json& j, const std::string& path) {
  check_keys(j, {"center", "dims", "floor_z", "contact_band"}, path);
  PadSpec s;
  if (j.contains("center")) s.center_xy = read_vec2(j, "center", path);
  if (j.contains("dims")) s.dims_xy = read_vec2(j, "dims", path);
  s.floor_z = read_number(j, "floor_z", path, s.floor_z);
  s.contact_band = read_number(j, "contact_band", path, s.contact_band);
  return s;
}

ProximitySpec parse_proximity(const json& j, const std::string& path) {
  check_keys(j, {"inflation", "noise_sigma"}, path);
  ProximitySpec s;
  s.inflation = read_number(j, "inflation", path, s.inflation);
  s.noise_sigma = read_number(j, "noise_sigma", path, s.noise_sigma);
  return s;
}

Interpretation parse_interpretation(const json& v, const std::string& path) {
  if (!v.is_string()) throw ParseError(path + ": expected an interpretation name");
  const auto i = interpretation_from_name(v.get<std::string>());
  if (!i) throw ParseError(path + ": unknown interpretation '" + v.get<std::string>() + "'");
  return *i;
}

PoseLattice parse_lattice(const json& j, const std::string& path) {
  check_keys(j, {"surfaces", "spacing", "margin", "tilts_deg"}, path);
  PoseLattice l;
  if (j.contains("surfaces")) {
    const json& arr = j.at("surfaces");
    const std::string here = join_path(path, "surfaces");
    if (!arr.is_array()) throw ParseError(here + ": expected an array of surface names");
    l.surfaces.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = here + "[" + std::to_string(i) + "]";
      if (!arr[i].is_string()) throw ParseError(p + ": expected a surface name");
      const auto s = surface_from_name(arr[i].get<std::string>());
      if (!s) throw ParseError(p + ": unknown surface '" + arr[i].get<std::string>() + "'");
      l.surfaces.push_back(*s);
    }
  }
  l.spacing = read_number(j, "spacing", path, l.spacing);
  l.margin = read_number(j, "margin", path, l.margin);
  if (j.contains("tilts_deg")) {
    const json& arr = j.at("tilts_deg");
    const std::string here = join_path(path, "tilts_deg");
    if (!arr.is_array()) throw ParseError(here + ": expected an array of [pitch, yaw] pairs");
    l.tilts_deg.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const json& t = arr[i];
      if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_number())
        throw ParseError(here + "[" + std::to_string(i) + "]: expected [pitch, yaw]");
      l.tilts_deg.emplace_back(t[0].get<double>(), t[1].get<double>());
    }
  }
  return l;
}

std::vector<Vec2> parse_center_grid(const json& j, const std::string& path) {
  check_keys(j, {"min", "max", "counts"}, path);
  const Vec2 lo = read_vec2(j, "min", path);
  const Vec2 hi = read_vec2(j, "max", path);
  const json& c = require(j, "counts", path);
  if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() || !c[1].is_number_integer())
    throw ParseError(join_path(path, "counts") + ": expected [nx, ny]");
  const long long nx = c[0].get<long long>(), ny = c[1].get<long long>();
  if (nx < 1 || ny < 1 || nx * ny > 100000) throw ConfigError(join_path(path, "counts") + ": must be positive");
  std::vector<Vec2> out;
  for (long long iy = 0; iy < ny; ++iy)
    for (long long ix = 0; ix < nx; ++ix) {
      const double fx = nx == 1 ? 0.5 : static_cast<double>(ix) / static_cast<double>(nx - 1);
      const double fy = ny == 1 ? 0.5 : static_cast<double>(iy) / static_cast<double>(ny - 1);
      out.emplace_back(lo.x() + fx * (hi.x() - lo.x()), lo.y() + fy * (hi.y() - lo.y()));
    }
  return out;
}

VariantSource parse_source(const json& j, SensorType type, const std::string& path) {
  const bool ranged = type == SensorType::Rgb || type == SensorType::Rgbd || type == SensorType::Lidar;
  int given = 0;
  for (const char* k : {"pose", "poses", "lattice", "yaw_sweep", "centers", "center_grid", "inflations"})
    given += j.contains(k) ? 1 : 0;
  if (given > 1) throw ConfigError(path + ": give exactly one of pose/poses/lattice/yaw_sweep/centers/center_grid/inflations");

  auto reject_for = [&](const char* key, bool allowed) {
    if (!allowed) throw ConfigError(join_path(path, key) + ": not applicable to a " +
                                    std::string(sensor_type_name(type)) + " sensor");
  };

  if (j.contains("lattice")) {
    reject_for("lattice", ranged);
    return LatticePoses{parse_lattice(j.at("lattice"), join_path(path, "lattice"))};
  }
  if (j.contains("yaw_sweep")) {
    reject_for("yaw_sweep", ranged);
    const json& y = j.at("yaw_sweep");
    const std::string p = join_path(path, "yaw_sweep");
    check_keys(y, {"position", "heading_deg", "pitch_deg", "from_deg", "to_deg", "step_deg"}, p);
    YawSweep s;
    s.position = read_vec3(y, "position", p);
    s.heading_deg = read_number(y, "heading_deg", p, 0.0);
    s.pitch_deg = read_number(y, "pitch_deg", p, 0.0);
    s.from_deg = read_number(y, "from_deg", p);
    s.to_deg = read_number(y, "to_deg", p);
    s.step_deg = read_number(y, "step_deg", p);
    if (!(s.step_deg > 0.0) || s.to_deg < s.from_deg) throw ConfigError(p + ": need step_deg > 0 and to_deg >= from_deg");
    return s;
  }
  if (j.contains("poses") || j.contains("pose")) {
    reject_for(j.contains("poses") ? "poses" : "pose", ranged);
    FixedPoses f;
    if (j.contains("pose")) {
      f.poses.push_back(read_pose(j.at("pose"), join_path(path, "pose")));
    } else {
      const json& arr = j.at("poses");
      if (!arr.is_array() || arr.empty()) throw ParseError(join_path(path, "poses") + ": expected a non-empty array");
      for (std::size_t i = 0; i < arr.size(); ++i)
        f.poses.push_back(read_pose(arr[i], join_path(path, "poses") + "[" + std::to_string(i) + "]"));
    }
    if (j.contains("label")) f.label = read_string(j, "label", path);
    return f;
  }
  if (j.contains("centers") || j.contains("center_grid")) {
    reject_for(j.contains("centers") ? "centers" : "center_grid", type == SensorType::Pad);
    PadCenters c;
    if (j.contains("center_grid")) {
      c.centers = parse_center_grid(j.at("center_grid"), join_path(path, "center_grid"));
    } else {
      const json& arr = j.at("centers");
      if (!arr.is_array() || arr.empty()) throw ParseError(join_path(path, "centers") + ": expected a non-empty array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& v = arr[i];
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
          throw ParseError(join_path(path, "centers") + "[" + std::to_string(i) + "]: expected [x, y]");
        c.centers.emplace_back(v[0].get<double>(), v[1].get<double>());
      }
    }
    return c;
  }
  if (j.contains("inflations")) {
    reject_for("inflations", type == SensorType::Proximity);
    const json& arr = j.at("inflations");
    if (!arr.is_array() || arr.empty()) throw ParseError(join_path(path, "inflations") + ": expected a non-empty array");
    ProximityInflations p;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number())
        throw ParseError(join_path(path, "inflations") + "[" + std::to_string(i) + "]: expected a number");
      p.inflations.push_back(arr[i].get<double>());
    }
    return p;
  }
  if (ranged) throw ParseError(path + ": missing pose source (pose, poses, lattice or yaw_sweep)");
  // Pads and skins default to their single declared configuration.
  if (type == SensorType::Pad) return PadCenters{};
  return ProximityInflations{};
}

SensorDecl parse_sensor(const json& j, const std::string& path) {
  check_keys(j,
             {"id", "type", "spec", "interpretation", "pose", "poses", "label", "lattice", "yaw_sweep", "centers",
              "center_grid", "inflations"},
             path);
  SensorDecl d;
  d.id = read_string(j, "id", path);
  if (d.id.empty() || d.id.find_first_of(",+\"\n") != std::string::npos)
    throw ParseError(join_path(path, "id") + ": must be non-empty and free of ',', '+', '\"'");
  const std::string type_name = read_string(j, "type", path);
  const auto type = sensor_type_from_name(type_name);
  if (!type) throw ParseError(join_path(path, "type") + ": unknown sensor type '" + type_name + "'");
  d.type = *type;

  static const json kEmpty = json::object();
  const json& spec = j.contains("spec") ? j.at("spec") : kEmpty;
  const std::string sp = join_path(path, "spec");
  switch (d.type) {
    case SensorType::Rgb: {
      CameraSpec c = parse_camera(spec, sp);
      if (!spec.contains("depth_enabled")) c.depth_enabled = false;
      d.spec = c;
      break;
    }
    case SensorType::Rgbd: d.spec = parse_camera(spec, sp); break;
    case SensorType::Lidar: d.spec = parse_lidar(spec, sp); break;
    case SensorType::Pad: d.spec = parse_pad(spec, sp); break;
    case SensorType::Proximity: d.spec = parse_proximity(spec, sp); break;
  }
  if (j.contains("interpretation")) {
    d.interpretation = parse_interpretation(j.at("interpretation"), join_path(path, "interpretation"));
    if (!compatible(d.type, *d.interpretation))
      throw ConfigError(join_path(path, "interpretation") + ": a " + type_name + " sensor cannot provide '" +
                        std::string(interpretation_name(*d.interpretation)) + "'");
  }
  d.source = parse_source(j, d.type, path);
  if (const auto* f = std::get_if<FixedPoses>(&d.source); f && j.contains("label")) {
    const std::string& label = f->label;
    if (label.empty() || label.find_first_of(",+@\"\n") != std::string::npos)
      throw ParseError(join_path(path, "label") + ": must be non-empty and free of ',', '+', '@', '\"'");
  }
  return d;
}

RoiSpec parse_roi(const json& j, const std::string& path) {
  check_keys(j, {"name", "kind", "human", "margin"}, path);
  RoiSpec r;
  r.name = read_string(j, "name", path);
  if (r.name.empty() || r.name.find_first_of(",\"\n") != std::string::npos)
    throw ParseError(join_path(path, "name") + ": must be non-empty and free of ',' and '\"'");
  const std::string kind = read_string(j, "kind", path);
  if (kind == "robot") {
    r.kind = RoiSpec::Kind::Robot;
  } else if (kind == "human") {
    r.kind = RoiSpec::Kind::Human;
    if (j.contains("human")) {
      const long long h = read_integer(j, "human", path);
      if (h < 0) throw ConfigError(join_path(path, "human") + ": must be non-negative");
      r.human_index = static_cast<std::size_t>(h);
    }
    r.margin = read_number(j, "margin", path, r.margin);
    if (r.margin < 0.0) throw ConfigError(join_path(path, "margin") + ": must be non-negative");
  } else {
    throw ParseError(join_path(path, "kind") + ": unknown ROI kind '" + kind + "' (robot or human)");
  }
  return r;
}

const json& read_array(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_array()) throw ParseError(join_path(path, key) + ": expected an array");
  return v;
}

std::string item_path(const char* key, std::size_t i) { return std::string(key) + "[" + std::to_string(i) + "]"; }

}  // namespace

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
  const json doc = parse_document(text);
  check_keys(doc,
             {"mode", "scenes", "sensors", "interpretations", "rois", "seed", "resolution", "workers", "keypoint_radii",
              "min_visible", "robot_prior", "pad_ceiling_z", "aggregation"},
             "");
  RunConfig rc;
  if (doc.contains("mode")) {
    const std::string mode = read_string(doc, "mode", "");
    if (mode == "sweep") rc.mode = RunConfig::Mode::Sweep;
    else if (mode == "combo") rc.mode = RunConfig::Mode::Combo;
    else throw ParseError("mode: unknown mode '" + mode + "' (sweep or combo)");
  }

  const json& scenes = read_array(doc, "scenes", "");
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    if (!scenes[i].is_string()) throw ParseError(item_path("scenes", i) + ": expected a file path");
    std::filesystem::path p = scenes[i].get<std::string>();
    rc.scene_paths.push_back(p.is_absolute() || base_dir.empty() ? p : base_dir / p);
  }

  const json& sensors = read_array(doc, "sensors", "");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    rc.sensors.push_back(parse_sensor(sensors[i], item_path("sensors", i)));
    if (!ids.insert(rc.sensors.back().id).second)
      throw ConfigError(item_path("sensors", i) + ".id: duplicate sensor id '" + rc.sensors.back().id + "'");
  }

  if (rc.mode == RunConfig::Mode::Sweep) {
    const json& interps = read_array(doc, "interpretations", "");
    for (std::size_t i = 0; i < interps.size(); ++i)
      rc.interpretations.push_back(parse_interpretation(interps[i], item_path("interpretations", i)));
  } else if (doc.contains("interpretations")) {
    throw ConfigError("interpretations: combo sweeps take one interpretation per sensor ('interpretation')");
  }

  const json& rois = read_array(doc, "rois", "");
  std::set<std::string> roi_names;
  for (std::size_t i = 0; i < rois.size(); ++i) {
    rc.rois.push_back(parse_roi(rois[i], item_path("rois", i)));
    if (!roi_names.insert(rc.rois.back().name).second)
      throw ConfigError(item_path("rois", i) + ".name: duplicate ROI name '" + rc.rois.back().name + "'");
  }

  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      throw ParseError("seed: expected a non-negative integer");
    rc.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("resolution")) rc.resolution = read_number(doc, "resolution", "");
  if (doc.contains("workers")) {
    const long long w = read_integer(doc, "workers", "");
    if (w < 1) throw ConfigError("workers: must be at least 1");
    rc.workers = static_cast<std::size_t>(w);
  }
  if (doc.contains("keypoint_radii")) {
    const json& k = doc.at("keypoint_radii");
    check_keys(k, {"sphere", "cylinder"}, "keypoint_radii");
    rc.options.radii.sphere = read_number(k, "sphere", "keypoint_radii", rc.options.radii.sphere);
    rc.options.radii.cylinder = read_number(k, "cylinder", "keypoint_radii", rc.options.radii.cylinder);
    if (!(rc.options.radii.sphere > 0.0) || !(rc.options.radii.cylinder > 0.0))
      throw ConfigError("keypoint_radii: radii must be positive");
  }
  if (doc.contains("min_visible")) {
    const long long m = read_integer(doc, "min_visible", "");
    if (m < 1) throw ConfigError("min_visible: must be at least 1");
    rc.options.min_visible = static_cast<std::size_t>(m);
  }
  rc.options.robot_prior = read_bool(doc, "robot_prior", "", false);
  if (doc.contains("pad_ceiling_z")) rc.options.pad_ceiling_z = read_number(doc, "pad_ceiling_z", "");
  if (doc.contains("aggregation")) {
    const std::string a = read_string(doc, "aggregation", "");
    if (a == "mean") rc.aggregation = DynamicAggregation::Mean;
    else if (a == "pooled") rc.aggregation = DynamicAggregation::Pooled;
    else throw ParseError("aggregation: unknown mode '" + a + "' (mean or pooled)");
  }
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_run_config(buf.str(), path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::vector<SceneModel> load_scenes(std::span<const std::filesystem::path> paths) {
  std::vector<SceneModel> out;
  std::set<std::string> names;
  for (const auto& p : paths) {
    SceneDocument doc = load_scene_file(p);
    if (auto* s = std::get_if<SceneModel>(&doc)) {
      out.push_back(std::move(*s));
    } else {
      auto& d = std::get<DynamicScene>(doc);
      const int width = d.snapshots.size() > 99 ? static_cast<int>(std::to_string(d.snapshots.size() - 1).size()) : 2;
      for (std::size_t i = 0; i < d.snapshots.size(); ++i) {
        std::string idx = std::to_string(i);
        idx.insert(0, static_cast<std::size_t>(std::max(0, width - static_cast<int>(idx.size()))), '0');
        d.snapshots[i].name = d.name + "#" + idx;
        out.push_back(std::move(d.snapshots[i]));
      }
    }
  }
  for (const SceneModel& s : out)
    if (!names.insert(s.name).second) throw ConfigError("duplicate scene name '" + s.name + "'");
  return out;
}

SweepConfig build_sweep_config(const RunConfig& run, std::span<const SceneModel> scenes) {
  if (!run.seed) throw ConfigError("seed: must be given explicitly (config or --seed)");
  if (!run.resolution) throw ConfigError("resolution: must be given explicitly (config or --resolution)");
  if (!(*run.resolution > 0.0)) throw ConfigError("resolution: must be positive");
  if (scenes.empty()) throw ConfigError("scenes: at least one scene is required");
  if (run.rois.empty()) throw ConfigError("rois: at least one region of interest is required");
  if (run.sensors.empty()) throw ConfigError("sensors: at least one sensor is required");
  if (run.mode == RunConfig::Mode::Sweep && run.interpretations.empty())
    throw ConfigError("interpretations: at least one interpretation is required");

  const SceneModel& first = scenes.front();
  SweepConfig cfg;
  cfg.seed = *run.seed;
  cfg.resolution = *run.resolution;
  cfg.workers = run.workers;
  cfg.options = run.options;
  for (const RoiSpec& r : run.rois) cfg.roi_names.push_back(r.name);

  for (const SensorDecl& d : run.sensors) {
    SensorInstance inst;
    inst.id = d.id;
    inst.type = d.type;
    inst.interpretation = d.interpretation;
    std::visit(
        [&](const auto& src) {
          using T = std::decay_t<decltype(src)>;
          if constexpr (std::is_same_v<T, FixedPoses>) {
            for (const SensorPose& p : src.poses) inst.variants.push_back({d.spec, p, src.label});
          } else if constexpr (std::is_same_v<T, LatticePoses>) {
            for (const SceneModel& s : scenes)
              if (!(s.workspace.min == first.workspace.min && s.workspace.max == first.workspace.max))
                throw ConfigError("sensor '" + d.id + "': lattice sweeps need every scene to share one workspace");
            for (const CandidatePose& c : generate_lattice(first.workspace, src.lattice))
              inst.variants.push_back({d.spec, c.pose, std::string(surface_name(c.surface))});
          } else if constexpr (std::is_same_v<T, YawSweep>) {
            const int n = static_cast<int>(std::floor((src.to_deg - src.from_deg) / src.step_deg + 1e-9)) + 1;
            for (int i = 0; i < n; ++i) {
              const double yaw = (src.heading_deg + src.from_deg + i * src.step_deg) * kDeg;
              const double pitch = src.pitch_deg * kDeg;
              const Vec3 dir(std::cos(pitch) * std::cos(yaw), std::cos(pitch) * std::sin(yaw), std::sin(pitch));
              inst.variants.push_back({d.spec, SensorPose{src.position, look_rotation(dir, Vec3::UnitZ())}, "yaw"});
            }
          } else if constexpr (std::is_same_v<T, PadCenters>) {
            const PadSpec& base = std::get<PadSpec>(d.spec);
            std::vector<Vec2> centers = src.centers;
            if (centers.empty()) centers.push_back(base.center_xy);
            for (const Vec2& c : centers) {
              PadSpec p = base;
              p.center_xy = c;
              inst.variants.push_back({p, SensorPose{Vec3(c.x(), c.y(), p.floor_z), Quat::Identity()}, "floor"});
            }
          } else {
            const ProximitySpec& base = std::get<ProximitySpec>(d.spec);
            std::vector<double> inflations = src.inflations;
            if (inflations.empty()) inflations.push_back(base.inflation);
            for (double r : inflations) {
              ProximitySpec p = base;
              p.inflation = r;
              inst.variants.push_back({p, first.robot.base, "robot"});
            }
          }
        },
        d.source);
    cfg.sensors.push_back(std::move(inst));
  }

  if (run.mode == RunConfig::Mode::Sweep) {
    cfg.interpretations = run.interpretations;
  } else {
    std::set<Interpretation> used;
    for (const SensorInstance& s : cfg.sensors) used.insert(s.interpretation.value_or(default_interpretation(s.type)));
    cfg.interpretations.assign(used.begin(), used.end());
  }

  cfg.scenes.resize(scenes.size());
  parallel_for(scenes.size(), run.workers,
               [&](std::size_t i) { cfg.scenes[i] = prepare_scene(scenes[i], cfg.resolution, run.rois); });
  validate(cfg);
  return cfg;
}

}  // namespace perispace
