#include "perispace/placement.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <thread>
#include <tuple>

#include "perispace/error.hpp"

namespace perispace {

namespace {

constexpr std::array<std::string_view, 5> kSurfaceNames = {"left", "right", "back", "front", "ceiling"};
constexpr std::array<std::string_view, 5> kSensorTypeNames = {"rgb", "rgbd", "lidar", "pad", "proximity"};
constexpr double kDeg = std::numbers::pi / 180.0;

struct SurfaceFrame {
  Vec3 anchor;  // lattice origin corner on the surface
  int u_axis;
  int v_axis;
  double u_len;
  double v_len;
  Vec3 normal;  // inward
  Vec3 up;
};

SurfaceFrame surface_frame(const Aabb& w, Surface s) {
  const Vec3 e = w.extent();
  switch (s) {
    case Surface::Left: return {w.min, 1, 2, e.y(), e.z(), Vec3::UnitX(), Vec3::UnitZ()};
    case Surface::Right: return {Vec3(w.max.x(), w.min.y(), w.min.z()), 1, 2, e.y(), e.z(), -Vec3::UnitX(), Vec3::UnitZ()};
    case Surface::Back: return {w.min, 0, 2, e.x(), e.z(), Vec3::UnitY(), Vec3::UnitZ()};
    case Surface::Front: return {Vec3(w.min.x(), w.max.y(), w.min.z()), 0, 2, e.x(), e.z(), -Vec3::UnitY(), Vec3::UnitZ()};
    case Surface::Ceiling: return {Vec3(w.min.x(), w.min.y(), w.max.z()), 0, 1, e.x(), e.y(), -Vec3::UnitZ(), Vec3::UnitY()};
  }
  throw std::logic_error("unreachable surface");
}

int axis_count(double length, double spacing, double margin) {
  const double usable = length - 2.0 * margin;
  if (usable < -1e-9) throw ConfigError("lattice margin leaves no room on a surface");
  return static_cast<int>(std::floor(std::max(usable, 0.0) / spacing + 1e-9)) + 1;
}

const SensorVariant& variant_at(const SensorInstance& s, std::size_t v) {
  if (v >= s.variants.size())
    throw std::out_of_range("sensor '" + s.id + "' has no variant " + std::to_string(v));
  return s.variants[v];
}

template <class T>
const T& spec_as(const SensorInstance& s, const SensorVariant& v) {
  const T* spec = std::get_if<T>(&v.spec);
  if (!spec) throw ConfigError("sensor '" + s.id + "': specification does not match its type");
  return *spec;
}

KeypointModel keypoint_model(Interpretation i) {
  switch (i) {
    case Interpretation::PointCloudPlusSpheres: return KeypointModel::Spheres;
    case Interpretation::PointCloudPlusCylinders: return KeypointModel::Cylinders;
    default: return KeypointModel::BoundingBox;
  }
}

bool is_point_cloud(Interpretation i) {
  return i == Interpretation::PointCloud || i == Interpretation::PointCloudPlusSpheres ||
         i == Interpretation::PointCloudPlusCylinders || i == Interpretation::PointCloudPlusBox;
}

// Shares the range scan and keypoint detections across interpretations of
// one (scene, sensor, variant).
class EstimateBuilder {
 public:
  EstimateBuilder(const PreparedScene& scene, const SensorInstance& sensor, std::size_t variant, std::uint64_t seed,
                  const EvaluationOptions& options)
      : scene_(scene), sensor_(sensor), variant_(variant_at(sensor, variant)), seed_(seed), options_(options) {}

  VoxelGrid build(Interpretation interp) {
    if (!compatible(sensor_.type, interp))
      throw ConfigError("sensor '" + sensor_.id + "' (" + std::string(sensor_type_name(sensor_.type)) +
                        ") cannot provide interpretation '" + std::string(interpretation_name(interp)) + "'");
    VoxelGrid out = raw(interp);
    if (options_.robot_prior) add_robot_prior(out, scene_.robot_cells);
    return out;
  }

 private:
  VoxelGrid raw(Interpretation interp) {
    const VoxelGrid& truth = scene_.truth;
    switch (sensor_.type) {
      case SensorType::Lidar: return sense_lidar(truth, variant_.pose, spec_as<LidarSpec>(sensor_, variant_), seed_);
      case SensorType::Pad: {
        const double ceiling = options_.pad_ceiling_z.value_or(scene_.model.workspace.max.z());
        return sense_pad(truth, spec_as<PadSpec>(sensor_, variant_), ceiling);
      }
      case SensorType::Proximity:
        return sense_proximity(truth, scene_.robot_cells, spec_as<ProximitySpec>(sensor_, variant_), seed_);
      case SensorType::Rgb:
      case SensorType::Rgbd: break;
    }
    const CameraSpec& cam = spec_as<CameraSpec>(sensor_, variant_);
    if (interp == Interpretation::Zone) {
      VoxelGrid zone(truth.geometry(), CellState::Unknown);
      const bool detected = std::any_of(visible().begin(), visible().end(), [&](const VisibleKeypoints& v) {
        return v.count() >= std::max<std::size_t>(options_.min_visible, 1);
      });
      const CellState fill = detected ? CellState::Occupied : CellState::Free;
      for (CellIndex i : scene_.zone_cells) zone[i] = fill;
      return zone;
    }
    if (!cloud_) cloud_ = sense_rgbd(truth, variant_.pose, cam, seed_);
    VoxelGrid out = *cloud_;
    if (interp != Interpretation::PointCloud) apply_keypoint_rep(out, visible(), keypoint_model(interp), options_.radii);
    return out;
  }

  const std::vector<VisibleKeypoints>& visible() {
    if (!visible_)
      visible_ = detect_keypoints(scene_.truth, scene_.model.humans, variant_.pose,
                                  spec_as<CameraSpec>(sensor_, variant_));
    return *visible_;
  }

  const PreparedScene& scene_;
  const SensorInstance& sensor_;
  const SensorVariant& variant_;
  std::uint64_t seed_;
  const EvaluationOptions& options_;
  std::optional<VoxelGrid> cloud_;
  std::optional<std::vector<VisibleKeypoints>> visible_;
};

std::string pose_context(const SensorInstance& sensor, std::size_t variant, const PreparedScene& scene) {
  return "sensor '" + sensor.id + "' pose " + std::to_string(variant) + " scene '" + scene.id + "'";
}

}  // namespace

std::string_view surface_name(Surface s) { return kSurfaceNames[static_cast<std::size_t>(s)]; }

std::optional<Surface> surface_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kSurfaceNames.size(); ++i)
    if (kSurfaceNames[i] == name) return static_cast<Surface>(i);
  return std::nullopt;
}

Vec2 surface_coords(std::string_view surface, const Vec3& p) {
  const auto s = surface_from_name(surface);
  if (!s || *s == Surface::Ceiling) return {p.x(), p.y()};
  if (*s == Surface::Left || *s == Surface::Right) return {p.y(), p.z()};
  return {p.x(), p.z()};
}

std::pair<int, int> lattice_dims(const Aabb& workspace, Surface s, double spacing, double margin) {
  const SurfaceFrame f = surface_frame(workspace, s);
  return {axis_count(f.u_len, spacing, margin), axis_count(f.v_len, spacing, margin)};
}

std::vector<CandidatePose> generate_lattice(const Aabb& workspace, const PoseLattice& lattice) {
  if (lattice.surfaces.empty()) throw ConfigError("lattice needs at least one surface");
  if (lattice.tilts_deg.empty()) throw ConfigError("lattice needs at least one orientation");
  if (!(lattice.spacing > 0.0)) throw ConfigError("lattice spacing must be positive");
  if (!(lattice.margin >= 0.0)) throw ConfigError("lattice margin must be non-negative");
  for (Surface s : lattice.surfaces) {
    const SurfaceFrame f = surface_frame(workspace, s);
    if (lattice.spacing > std::min(f.u_len, f.v_len) + 1e-9)
      throw ConfigError("lattice spacing exceeds the " + std::string(surface_name(s)) + " surface");
  }

  std::vector<CandidatePose> out;
  std::size_t position = 0;
  for (Surface s : lattice.surfaces) {
    const SurfaceFrame f = surface_frame(workspace, s);
    const auto [nu, nv] = lattice_dims(workspace, s, lattice.spacing, lattice.margin);
    const double u0 = 0.5 * (f.u_len - (nu - 1) * lattice.spacing);
    const double v0 = 0.5 * (f.v_len - (nv - 1) * lattice.spacing);
    const Vec3 left = f.up.cross(f.normal);
    for (int iv = 0; iv < nv; ++iv) {
      for (int iu = 0; iu < nu; ++iu) {
        Vec3 p = f.anchor;
        p[f.u_axis] += u0 + iu * lattice.spacing;
        p[f.v_axis] += v0 + iv * lattice.spacing;
        for (std::size_t o = 0; o < lattice.tilts_deg.size(); ++o) {
          const double pitch = lattice.tilts_deg[o].x() * kDeg;
          const double yaw = lattice.tilts_deg[o].y() * kDeg;
          const Vec3 dir = std::cos(pitch) * (std::cos(yaw) * f.normal + std::sin(yaw) * left) + std::sin(pitch) * f.up;
          out.push_back({position, o, s, SensorPose{p, look_rotation(dir, f.up)}});
        }
        ++position;
      }
    }
  }
  return out;
}

std::string_view sensor_type_name(SensorType t) { return kSensorTypeNames[static_cast<std::size_t>(t)]; }

std::optional<SensorType> sensor_type_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kSensorTypeNames.size(); ++i)
    if (kSensorTypeNames[i] == name) return static_cast<SensorType>(i);
  return std::nullopt;
}

bool compatible(SensorType t, Interpretation i) {
  switch (t) {
    case SensorType::Rgb: return i == Interpretation::Zone;
    case SensorType::Rgbd: return i == Interpretation::Zone || is_point_cloud(i);
    case SensorType::Lidar: return i == Interpretation::PointCloud;
    case SensorType::Pad: return i == Interpretation::PadVolume;
    case SensorType::Proximity: return i == Interpretation::ProximityNaive;
  }
  return false;
}

Interpretation default_interpretation(SensorType t) {
  switch (t) {
    case SensorType::Rgb: return Interpretation::Zone;
    case SensorType::Rgbd:
    case SensorType::Lidar: return Interpretation::PointCloud;
    case SensorType::Pad: return Interpretation::PadVolume;
    case SensorType::Proximity: return Interpretation::ProximityNaive;
  }
  return Interpretation::PointCloud;
}

PreparedScene prepare_scene(const SceneModel& scene, double resolution, std::span<const RoiSpec> rois) {
  PreparedScene p;
  p.id = scene.name;
  p.model = scene;
  p.truth = voxelize(scene, resolution);
  p.robot_cells = robot_cells(scene, p.truth.geometry());
  for (const RoiSpec& r : rois) {
    RegionOfInterest roi = r.kind == RoiSpec::Kind::Robot ? robot_roi(scene) : [&] {
      if (r.human_index >= scene.humans.size())
        throw ConfigError("roi '" + r.name + "': scene '" + scene.name + "' has no human " +
                          std::to_string(r.human_index));
      return human_roi(scene, r.human_index, r.margin);
    }();
    p.roi_cells.push_back(cells_in(p.truth.geometry(), roi));
    p.rois.push_back(roi);
  }
  p.zone_cells = cells_in(p.truth.geometry(), robot_roi(scene));
  return p;
}

bool record_order(const SweepRecord& a, const SweepRecord& b) {
  return std::tie(a.combo_index, a.pose_id, a.scene_index, a.roi_index, a.interp_index) <
         std::tie(b.combo_index, b.pose_id, b.scene_index, b.roi_index, b.interp_index);
}

VoxelGrid sensor_estimate(const PreparedScene& scene, const SensorInstance& sensor, std::size_t variant,
                          Interpretation interp, std::uint64_t seed, const EvaluationOptions& options) {
  return EstimateBuilder(scene, sensor, variant, seed, options).build(interp);
}

std::vector<SweepRecord> evaluate_pose(const PreparedScene& scene, std::size_t scene_index,
                                       const SensorInstance& sensor, std::size_t sensor_index, std::size_t variant,
                                       std::span<const Interpretation> interps, std::span<const std::string> roi_names,
                                       std::uint64_t master_seed, const EvaluationOptions& options) {
  for (Interpretation i : interps)
    if (!compatible(sensor.type, i))
      throw ConfigError("sensor '" + sensor.id + "' (" + std::string(sensor_type_name(sensor.type)) +
                        ") cannot provide interpretation '" + std::string(interpretation_name(i)) + "'");
  if (roi_names.size() != scene.rois.size()) throw std::invalid_argument("evaluate_pose: ROI name count mismatch");

  const SensorVariant& var = variant_at(sensor, variant);
  EstimateBuilder builder(scene, sensor, variant, stream_seed(master_seed, scene_index, sensor_index, variant),
                          options);
  std::vector<SweepRecord> out;
  out.reserve(interps.size() * scene.rois.size());
  for (std::size_t k = 0; k < interps.size(); ++k) {
    const VoxelGrid estimate = builder.build(interps[k]);
    for (std::size_t r = 0; r < scene.rois.size(); ++r) {
      SweepRecord rec;
      rec.combo_id = sensor.id;
      rec.combo_index = sensor_index;
      rec.pose_id = variant;
      rec.surface = var.label;
      rec.pose = var.pose;
      rec.scene = scene.id;
      rec.scene_index = scene_index;
      rec.roi = roi_names[r];
      rec.roi_index = r;
      rec.interp = std::string(interpretation_name(interps[k]));
      rec.interp_index = k;
      rec.counts = confusion(estimate, scene.truth, scene.roi_cells[r]);
      rec.scores = scores(rec.counts);
      out.push_back(std::move(rec));
    }
  }
  return out;
}

void validate(const SweepConfig& c) {
  if (c.scenes.empty()) throw ConfigError("sweep: no scenes");
  if (c.sensors.empty()) throw ConfigError("sweep: no sensors");
  if (c.interpretations.empty()) throw ConfigError("sweep: no interpretations");
  if (c.roi_names.empty()) throw ConfigError("sweep: no regions of interest");
  if (!(c.resolution > 0.0)) throw ConfigError("sweep: resolution must be positive");
  for (const PreparedScene& s : c.scenes)
    if (s.rois.size() != c.roi_names.size()) throw ConfigError("sweep: scene '" + s.id + "' has mismatched ROIs");
  for (const SensorInstance& s : c.sensors) {
    if (s.variants.empty()) throw ConfigError("sensor '" + s.id + "' has no poses or parameter variants");
    for (const SensorVariant& v : s.variants) {
      std::visit([](const auto& spec) { validate(spec); }, v.spec);
      if (s.type == SensorType::Rgbd && !std::get<CameraSpec>(v.spec).depth_enabled)
        throw ConfigError("sensor '" + s.id + "': rgbd camera must be depth-enabled");
    }
    if (s.interpretation && !compatible(s.type, *s.interpretation))
      throw ConfigError("sensor '" + s.id + "' cannot provide interpretation '" +
                        std::string(interpretation_name(*s.interpretation)) + "'");
  }
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t threads = std::clamp<std::size_t>(workers, 1, n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mu;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_index) {
          failed_index = i;
          error = std::current_exception();
        }
        failed.store(true);
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

std::vector<SweepRecord> sweep(const SweepConfig& config) {
  validate(config);
  struct Item {
    std::size_t sensor, variant, scene;
  };
  std::vector<Item> items;
  for (std::size_t s = 0; s < config.sensors.size(); ++s)
    for (std::size_t v = 0; v < config.sensors[s].variants.size(); ++v)
      for (std::size_t sc = 0; sc < config.scenes.size(); ++sc) items.push_back({s, v, sc});

  for (const SensorInstance& s : config.sensors)
    for (Interpretation i : config.interpretations)
      if (!compatible(s.type, i))
        throw ConfigError("sensor '" + s.id + "' (" + std::string(sensor_type_name(s.type)) +
                          ") cannot provide interpretation '" + std::string(interpretation_name(i)) + "'");

  std::vector<std::vector<SweepRecord>> results(items.size());
  parallel_for(items.size(), config.workers, [&](std::size_t k) {
    const Item& it = items[k];
    const SensorInstance& sensor = config.sensors[it.sensor];
    const PreparedScene& scene = config.scenes[it.scene];
    try {
      results[k] = evaluate_pose(scene, it.scene, sensor, it.sensor, it.variant, config.interpretations,
                                 config.roi_names, config.seed, config.options);
    } catch (const std::exception& e) {
      throw SweepError(pose_context(sensor, it.variant, scene) + ": " + e.what());
    }
  });

  std::vector<SweepRecord> out;
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(out));
  std::stable_sort(out.begin(), out.end(), record_order);
  return out;
}

std::vector<std::vector<std::size_t>> sensor_subsets(std::size_t sensor_count) {
  if (sensor_count == 0 || sensor_count > 16) throw ConfigError("combination sweep needs 1 to 16 sensors");
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask = 1; mask < (1u << sensor_count); ++mask) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < sensor_count; ++i)
      if (mask & (1u << i)) members.push_back(i);
    out.push_back(std::move(members));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

std::vector<SweepRecord> combo_sweep(const SweepConfig& config) {
  validate(config);
  const std::size_t n_sensors = config.sensors.size();
  const std::size_t n_scenes = config.scenes.size();
  const std::size_t n_rois = config.roi_names.size();

  // Stage 1: each member estimate restricted to the ROI cells.
  // states[scene][sensor][variant][roi] -> per-ROI-cell state.
  using RoiStates = std::vector<std::vector<CellState>>;
  std::vector<std::vector<std::vector<RoiStates>>> states(n_scenes);
  struct Item {
    std::size_t scene, sensor, variant;
  };
  std::vector<Item> items;
  for (std::size_t sc = 0; sc < n_scenes; ++sc) {
    states[sc].resize(n_sensors);
    for (std::size_t s = 0; s < n_sensors; ++s) {
      states[sc][s].resize(config.sensors[s].variants.size());
      for (std::size_t v = 0; v < config.sensors[s].variants.size(); ++v) items.push_back({sc, s, v});
    }
  }
  // The prior is applied after fusion, never to members.
  EvaluationOptions member_options = config.options;
  member_options.robot_prior = false;
  parallel_for(items.size(), config.workers, [&](std::size_t k) {
    const Item& it = items[k];
    const SensorInstance& sensor = config.sensors[it.sensor];
    const PreparedScene& scene = config.scenes[it.scene];
    try {
      const Interpretation interp = sensor.interpretation.value_or(default_interpretation(sensor.type));
      const VoxelGrid est = sensor_estimate(scene, sensor, it.variant, interp,
                                            stream_seed(config.seed, it.scene, it.sensor, it.variant), member_options);
      RoiStates& out = states[it.scene][it.sensor][it.variant];
      out.resize(n_rois);
      for (std::size_t r = 0; r < n_rois; ++r) {
        out[r].reserve(scene.roi_cells[r].size());
        for (CellIndex c : scene.roi_cells[r]) out[r].push_back(est[c]);
      }
    } catch (const std::exception& e) {
      throw SweepError(pose_context(sensor, it.variant, scene) + ": " + e.what());
    }
  });

  // Stage 2: fuse and score every variant tuple of every subset.
  const auto subsets = sensor_subsets(n_sensors);
  struct ComboItem {
    std::size_t scene, subset;
  };
  std::vector<ComboItem> combo_items;
  for (std::size_t sc = 0; sc < n_scenes; ++sc)
    for (std::size_t k = 0; k < subsets.size(); ++k) combo_items.push_back({sc, k});

  std::vector<std::vector<SweepRecord>> results(combo_items.size());
  parallel_for(combo_items.size(), config.workers, [&](std::size_t k) {
    const ComboItem& it = combo_items[k];
    const auto& members = subsets[it.subset];
    const PreparedScene& scene = config.scenes[it.scene];

    std::string combo_id;
    for (std::size_t m : members) combo_id += (combo_id.empty() ? "" : "+") + config.sensors[m].id;
    std::string interp_name = "fused";
    if (members.size() == 1) {
      const SensorInstance& s = config.sensors[members.front()];
      interp_name = std::string(interpretation_name(s.interpretation.value_or(default_interpretation(s.type))));
    }

    // Robot-prior flags per ROI cell.
    std::vector<std::vector<char>> prior(n_rois);
    if (config.options.robot_prior) {
      std::vector<char> is_robot(scene.truth.size(), 0);
      for (CellIndex c : scene.robot_cells) is_robot[c] = 1;
      for (std::size_t r = 0; r < n_rois; ++r)
        for (CellIndex c : scene.roi_cells[r]) prior[r].push_back(is_robot[c]);
    }

    std::size_t tuples = 1;
    for (std::size_t m : members) tuples *= config.sensors[m].variants.size();

    std::vector<std::size_t> choice(members.size());
    std::vector<CellState> fused;
    for (std::size_t t = 0; t < tuples; ++t) {
      std::size_t rest = t;
      for (std::size_t j = members.size(); j-- > 0;) {
        const std::size_t n = config.sensors[members[j]].variants.size();
        choice[j] = rest % n;
        rest /= n;
      }
      // Reported pose: first ranged or camera member, else the first member.
      std::size_t pose_member = 0;
      for (std::size_t j = 0; j < members.size(); ++j) {
        const SensorType type = config.sensors[members[j]].type;
        if (type == SensorType::Rgb || type == SensorType::Rgbd || type == SensorType::Lidar) {
          pose_member = j;
          break;
        }
      }
      std::string surface;
      if (members.size() == 1) {
        surface = config.sensors[members[0]].variants[choice[0]].label;
      } else {
        for (std::size_t j = 0; j < members.size(); ++j)
          surface += (j ? "+" : "") + config.sensors[members[j]].variants[choice[j]].label + "@" +
                     std::to_string(choice[j]);
      }
      const SensorPose& pose = config.sensors[members[pose_member]].variants[choice[pose_member]].pose;

      for (std::size_t r = 0; r < n_rois; ++r) {
        const auto& cells = scene.roi_cells[r];
        fused.assign(cells.size(), CellState::Unknown);
        for (std::size_t j = 0; j < members.size(); ++j) {
          const auto& src = states[it.scene][members[j]][choice[j]][r];
          for (std::size_t c = 0; c < cells.size(); ++c) fused[c] = std::max(fused[c], src[c]);
        }
        if (config.options.robot_prior)
          for (std::size_t c = 0; c < cells.size(); ++c)
            if (prior[r][c]) fused[c] = CellState::Occupied;

        SweepRecord rec;
        rec.combo_id = combo_id;
        rec.combo_index = it.subset;
        rec.pose_id = t;
        rec.surface = surface;
        rec.pose = pose;
        rec.scene = scene.id;
        rec.scene_index = it.scene;
        rec.roi = config.roi_names[r];
        rec.roi_index = r;
        rec.interp = interp_name;
        rec.interp_index = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) tally(rec.counts, fused[c], scene.truth[cells[c]]);
        rec.scores = scores(rec.counts);
        results[k].push_back(std::move(rec));
      }
    }
  });

  std::vector<SweepRecord> out;
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(out));
  std::stable_sort(out.begin(), out.end(), record_order);
  return out;
}

std::string scene_group(std::string_view scene) {
  const auto hash = scene.rfind('#');
  return std::string(hash == std::string_view::npos ? scene : scene.substr(0, hash));
}

std::vector<AggregateRecord> aggregate_dynamic(std::span<const SweepRecord> records, DynamicAggregation mode) {
  using Key = std::tuple<std::size_t, std::size_t, std::string, std::size_t, std::size_t>;
  struct Acc {
    AggregateRecord rec;
    std::set<std::string> snapshots;
    double f1_sum = 0.0;
    double kappa_sum = 0.0;
  };
  std::map<std::string, std::set<std::string>> group_snapshots;
  std::map<Key, Acc> acc;
  for (const SweepRecord& r : records) {
    const std::string group = scene_group(r.scene);
    group_snapshots[group].insert(r.scene);
    Acc& a = acc[Key{r.combo_index, r.pose_id, group, r.roi_index, r.interp_index}];
    if (a.snapshots.empty()) {
      a.rec.combo_id = r.combo_id;
      a.rec.pose_id = r.pose_id;
      a.rec.surface = r.surface;
      a.rec.pose = r.pose;
      a.rec.group = group;
      a.rec.roi = r.roi;
      a.rec.interp = r.interp;
    }
    if (!a.snapshots.insert(r.scene).second)
      throw IncompleteDataError("duplicate record for snapshot '" + r.scene + "' pose " + std::to_string(r.pose_id));
    a.rec.pooled += r.counts;
    a.f1_sum += r.scores.f1;
    a.kappa_sum += r.scores.kappa;
  }

  std::vector<AggregateRecord> out;
  out.reserve(acc.size());
  for (auto& [key, a] : acc) {
    const auto& expected = group_snapshots[a.rec.group];
    if (a.snapshots.size() != expected.size())
      throw IncompleteDataError("pose " + std::to_string(a.rec.pose_id) + " of '" + a.rec.combo_id + "' in '" +
                                a.rec.group + "' (" + a.rec.roi + ", " + a.rec.interp + ") covers " +
                                std::to_string(a.snapshots.size()) + " of " + std::to_string(expected.size()) +
                                " snapshots");
    a.rec.snapshots = a.snapshots.size();
    if (mode == DynamicAggregation::Mean) {
      const double n = static_cast<double>(a.rec.snapshots);
      a.rec.scores = {a.f1_sum / n, a.kappa_sum / n};
    } else {
      a.rec.scores = scores(a.rec.pooled);
    }
    out.push_back(std::move(a.rec));
  }
  return out;
}

std::string_view metric_name(Metric m) { return m == Metric::F1 ? "f1" : "kappa"; }

std::optional<Metric> metric_from_name(std::string_view name) {
  if (name == "f1") return Metric::F1;
  if (name == "kappa") return Metric::Kappa;
  return std::nullopt;
}

PoseScore to_pose_score(const SweepRecord& r) { return {r.combo_id, r.surface, r.pose.position, r.pose_id, r.scores}; }
PoseScore to_pose_score(const AggregateRecord& r) {
  return {r.combo_id, r.surface, r.pose.position, r.pose_id, r.scores};
}

Heatmap build_heatmap(std::span<const PoseScore> scores_in, Metric metric) {
  struct Cell {
    double value;
    std::size_t pose;
    Vec3 position;
  };
  std::map<std::string, std::map<std::pair<double, double>, Cell>> by_surface;
  for (const PoseScore& s : scores_in) {
    const Vec2 uv = surface_coords(s.surface, s.position);
    auto& cells = by_surface[s.surface];
    const double v = s.value(metric);
    auto [it, inserted] = cells.try_emplace({uv.x(), uv.y()}, Cell{v, s.pose_id, s.position});
    if (!inserted && (v > it->second.value || (v == it->second.value && s.pose_id < it->second.pose))) {
      it->second.value = v;
      it->second.pose = s.pose_id;
    }
  }

  Heatmap map;
  map.metric = metric;
  for (const auto& [name, cells] : by_surface) {
    HeatmapSurface hs;
    hs.surface = name;
    std::set<double> us, vs;
    for (const auto& [uv, c] : cells) {
      us.insert(uv.first);
      vs.insert(uv.second);
    }
    hs.u.assign(us.begin(), us.end());
    hs.v.assign(vs.begin(), vs.end());
    const std::size_t n = hs.u.size() * hs.v.size();
    hs.values.assign(n, std::numeric_limits<double>::quiet_NaN());
    hs.best_pose.assign(n, 0);
    hs.positions.assign(n, Vec3::Constant(std::numeric_limits<double>::quiet_NaN()));
    for (const auto& [uv, c] : cells) {
      const std::size_t iu = std::lower_bound(hs.u.begin(), hs.u.end(), uv.first) - hs.u.begin();
      const std::size_t iv = std::lower_bound(hs.v.begin(), hs.v.end(), uv.second) - hs.v.begin();
      const std::size_t idx = iv * hs.u.size() + iu;
      hs.values[idx] = c.value;
      hs.best_pose[idx] = c.pose;
      hs.positions[idx] = c.position;
    }
    map.surfaces.push_back(std::move(hs));
  }
  return map;
}

std::vector<PoseScore> heatmap_entries(const Heatmap& heatmap) {
  std::vector<PoseScore> out;
  for (const HeatmapSurface& s : heatmap.surfaces)
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (std::isnan(s.values[i])) continue;
      PoseScore p;
      p.surface = s.surface;
      p.position = s.positions[i];
      p.pose_id = s.best_pose[i];
      (heatmap.metric == Metric::F1 ? p.scores.f1 : p.scores.kappa) = s.values[i];
      out.push_back(std::move(p));
    }
  return out;
}

std::vector<PoseScore> rank(std::span<const PoseScore> scores_in, Metric metric, std::size_t k) {
  if (k == 0) throw std::invalid_argument("rank: k must be at least 1");
  std::vector<PoseScore> out(scores_in.begin(), scores_in.end());
  auto order = [metric](const PoseScore& a, const PoseScore& b) {
    const double va = a.value(metric), vb = b.value(metric);
    if (va != vb) return va > vb;
    return std::forward_as_tuple(a.surface, a.position.x(), a.position.y(), a.position.z(), a.pose_id, a.combo_id) <
           std::forward_as_tuple(b.surface, b.position.x(), b.position.y(), b.position.z(), b.pose_id, b.combo_id);
  };
  const std::size_t n = std::min(k, out.size());
  std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n), out.end(), order);
  out.resize(n);
  return out;
}

}  // namespace perispace
