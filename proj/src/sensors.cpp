#include "perispace/sensors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "perispace/error.hpp"

namespace perispace {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::array<std::string_view, 7> kInterpretationNames = {
    "zone", "pc", "pc+sph", "pc+cyl", "pc+box", "pad", "prox",
};

double joint_body_radius(const HumanSkeleton& h, Joint j) {
  return j == Joint::Head ? h.head_radius : h.limb_radius;
}

}  // namespace

void validate(const CameraSpec& s) {
  if (!(s.fov_h > 0.0 && s.fov_h < 180.0) || !(s.fov_v > 0.0 && s.fov_v < 180.0))
    throw ConfigError("camera field of view must lie in (0, 180) degrees per axis");
  if (s.res_h < 1 || s.res_v < 1) throw ConfigError("camera resolution must be at least 1x1 pixels");
  if (!(s.range_min >= 0.0) || !(s.range_max > s.range_min))
    throw ConfigError("camera range requires 0 <= range_min < range_max");
  if (!(s.noise_sigma >= 0.0)) throw ConfigError("camera noise_sigma must be non-negative");
  if (s.max_rays_h < 1 || s.max_rays_v < 1) throw ConfigError("camera ray caps must be positive");
}

void validate(const LidarSpec& s) {
  if (!(s.fov_h > 0.0 && s.fov_h <= 360.0) || !(s.fov_v > 0.0 && s.fov_v < 180.0))
    throw ConfigError("lidar field of view must satisfy 0 < fov_h <= 360 and 0 < fov_v < 180 degrees");
  if (!(s.ang_res_h > 0.0) || !(s.ang_res_v > 0.0)) throw ConfigError("lidar angular resolution must be positive");
  if (std::round(s.fov_h / s.ang_res_h) < 1.0) throw ConfigError("lidar ang_res_h exceeds fov_h");
  if (!(s.range_min >= 0.0) || !(s.range_max > s.range_min))
    throw ConfigError("lidar range requires 0 <= range_min < range_max");
  if (!(s.noise_sigma >= 0.0)) throw ConfigError("lidar noise_sigma must be non-negative");
}

void validate(const PadSpec& s) {
  if (!(s.dims_xy.array() > 0.0).all()) throw ConfigError("pad dimensions must be positive");
  if (!(s.contact_band > 0.0)) throw ConfigError("pad contact_band must be positive");
}

void validate(const ProximitySpec& s) {
  if (!(s.inflation > 0.0)) throw ConfigError("proximity inflation must be positive");
  if (!(s.noise_sigma >= 0.0)) throw ConfigError("proximity noise_sigma must be non-negative");
}

std::string_view interpretation_name(Interpretation i) { return kInterpretationNames[static_cast<std::size_t>(i)]; }

std::optional<Interpretation> interpretation_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kInterpretationNames.size(); ++i)
    if (kInterpretationNames[i] == name) return static_cast<Interpretation>(i);
  return std::nullopt;
}

Quat look_rotation(const Vec3& forward, const Vec3& up_hint) {
  const Vec3 x = forward.normalized();
  Vec3 y = up_hint.cross(x);
  if (y.norm() < 1e-9) y = Vec3::UnitZ().cross(x);
  if (y.norm() < 1e-9) y = Vec3::UnitY().cross(x);
  y.normalize();
  const Vec3 z = x.cross(y);
  Eigen::Matrix3d r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = z;
  return Quat(r).normalized();
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t scene, std::uint64_t sensor, std::uint64_t variant) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ scene);
  h = splitmix64(h ^ (sensor + 0x51ed270b27a3b1f1ULL));
  return splitmix64(h ^ (variant + 0x2545f4914f6cdd1dULL));
}

std::vector<Ray> camera_rays(const SensorPose& pose, const CameraSpec& spec, double resolution) {
  validate(spec);
  const double tan_h = std::tan(0.5 * spec.fov_h * kDeg);
  const double tan_v = std::tan(0.5 * spec.fov_v * kDeg);
  auto stride_for = [&](int pixels, double tan_half, int cap) {
    if (spec.full_resolution) return 1;
    // Samples needed so the footprint spacing at range_max is <= resolution.
    const double needed = std::ceil(2.0 * tan_half * spec.range_max / resolution);
    const int geometric = std::max(1, static_cast<int>(std::floor(pixels / std::max(needed, 1.0))));
    const int capped = static_cast<int>(std::ceil(static_cast<double>(pixels) / cap));
    return std::max(geometric, capped);
  };
  const int su = stride_for(spec.res_h, tan_h, spec.max_rays_h);
  const int sv = stride_for(spec.res_v, tan_v, spec.max_rays_v);
  const double fx = 0.5 * spec.res_h / tan_h;
  const double fy = 0.5 * spec.res_v / tan_v;
  const Eigen::Matrix3d rot = pose.orientation.toRotationMatrix();

  std::vector<Ray> rays;
  rays.reserve(static_cast<std::size_t>((spec.res_h + su - 1) / su) * ((spec.res_v + sv - 1) / sv));
  for (int v0 = 0; v0 < spec.res_v; v0 += sv) {
    const int v = std::min(spec.res_v - 1, v0 + sv / 2);
    for (int u0 = 0; u0 < spec.res_h; u0 += su) {
      const int u = std::min(spec.res_h - 1, u0 + su / 2);
      const Vec3 d_cam(1.0, -(u + 0.5 - 0.5 * spec.res_h) / fx, -(v + 0.5 - 0.5 * spec.res_v) / fy);
      rays.push_back({pose.position, (rot * d_cam).normalized(), spec.range_max, spec.range_min});
    }
  }
  return rays;
}

std::vector<Ray> lidar_rays(const SensorPose& pose, const LidarSpec& spec) {
  validate(spec);
  const bool full_circle = spec.fov_h >= 360.0;
  const int n_h = static_cast<int>(std::round(spec.fov_h / spec.ang_res_h)) + (full_circle ? 0 : 1);
  const int n_v = static_cast<int>(std::round(spec.fov_v / spec.ang_res_v)) + 1;
  const double step_h = full_circle ? spec.fov_h / n_h : (n_h > 1 ? spec.fov_h / (n_h - 1) : 0.0);
  const double step_v = n_v > 1 ? spec.fov_v / (n_v - 1) : 0.0;
  const double start_h = n_h > 1 ? -0.5 * spec.fov_h : 0.0;
  const double start_v = n_v > 1 ? -0.5 * spec.fov_v : 0.0;
  const Eigen::Matrix3d rot = pose.orientation.toRotationMatrix();

  std::vector<Ray> rays;
  rays.reserve(static_cast<std::size_t>(n_h) * n_v);
  for (int j = 0; j < n_v; ++j) {
    const double el = (start_v + j * step_v) * kDeg;
    for (int i = 0; i < n_h; ++i) {
      const double az = (start_h + i * step_h) * kDeg;
      const Vec3 d(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
      rays.push_back({pose.position, (rot * d).normalized(), spec.range_max, spec.range_min});
    }
  }
  return rays;
}

VoxelGrid sense_rays(const VoxelGrid& truth, std::span<const Ray> rays, double noise_sigma, std::uint64_t seed,
                     const RayObserver& observer) {
  struct Step {
    CellIndex cell;
    double t_entry, t_exit;
  };
  VoxelGrid estimate(truth.geometry(), CellState::Unknown);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_sigma > 0.0 ? noise_sigma : 1.0);
  std::vector<Step> path;
  for (const Ray& ray : rays) {
    // One walk up to the first hit; the cells are kept so that carving and
    // locating the noisy endpoint usually need no second walk.
    path.clear();
    std::optional<RayHit> hit;
    traverse(truth.geometry(), ray, [&](CellIndex cell, double t_entry, double t_exit) {
      path.push_back({cell, t_entry, t_exit});
      if (t_entry >= ray.min_range && truth[cell] == CellState::Occupied) {
        hit = RayHit{cell, t_entry};
        return false;
      }
      return true;
    });
    Ray carved = ray;
    bool buffered = true;
    if (hit && noise_sigma > 0.0) {
      // The sensed surface lies somewhere inside the hit cell; noise is added
      // to the middle of the ray's chord through it, not to the cell face.
      const double exit = path.back().t_exit;
      const double surface = 0.5 * (hit->distance + std::min(exit, ray.max_range));
      const double measured = std::clamp(surface + noise(rng), ray.min_range, ray.max_range);
      auto it = std::find_if(path.begin(), path.end(),
                             [&](const Step& s) { return s.t_entry <= measured && measured < s.t_exit; });
      if (it != path.end()) {
        hit = RayHit{it->cell, measured};
      } else {
        buffered = false;
        hit = locate_along(truth.geometry(), ray, measured);
        // Measured point left the grid: carve free space up to it, nothing occupied.
        if (!hit) carved.max_range = std::max(measured, std::nextafter(ray.min_range, ray.max_range));
      }
    }
    if (observer) observer(carved, hit);
    if (!buffered) {
      integrate_ray(estimate, carved, hit);
      continue;
    }
    for (const Step& s : path) {
      if (hit) {
        if (s.cell == hit->cell) {
          estimate.mark_occupied(s.cell);
          break;
        }
        if (s.t_entry > hit->distance) break;
      }
      if (s.t_entry >= ray.min_range) estimate.mark_free(s.cell);
    }
  }
  return estimate;
}

VoxelGrid sense_rgbd(const VoxelGrid& truth, const SensorPose& pose, const CameraSpec& spec, std::uint64_t seed,
                     const RayObserver& observer) {
  if (!spec.depth_enabled) throw ConfigError("point-cloud sensing requires a depth-enabled camera");
  const auto rays = camera_rays(pose, spec, truth.geometry().resolution);
  return sense_rays(truth, rays, spec.noise_sigma, seed, observer);
}

VoxelGrid sense_lidar(const VoxelGrid& truth, const SensorPose& pose, const LidarSpec& spec, std::uint64_t seed,
                      const RayObserver& observer) {
  const auto rays = lidar_rays(pose, spec);
  return sense_rays(truth, rays, spec.noise_sigma, seed, observer);
}

std::size_t VisibleKeypoints::count() const {
  return static_cast<std::size_t>(std::count_if(keypoints.begin(), keypoints.end(), [](const auto& k) { return k.has_value(); }));
}

std::vector<VisibleKeypoints> detect_keypoints(const VoxelGrid& truth, std::span<const HumanSkeleton> skeletons,
                                               const SensorPose& pose, const CameraSpec& spec) {
  validate(spec);
  const GridGeometry& g = truth.geometry();
  const double tan_h = std::tan(0.5 * spec.fov_h * kDeg);
  const double tan_v = std::tan(0.5 * spec.fov_v * kDeg);
  const Eigen::Matrix3d world_to_cam = pose.orientation.toRotationMatrix().transpose();
  const double half_diagonal = 0.5 * std::sqrt(3.0) * g.resolution;

  std::vector<VisibleKeypoints> out;
  for (std::size_t h = 0; h < skeletons.size(); ++h) {
    VisibleKeypoints vis;
    vis.human_index = h;
    for (Joint j : all_joints()) {
      const Vec3& kp = skeletons[h][j];
      const Vec3 offset = kp - pose.position;
      const Vec3 c = world_to_cam * offset;
      if (!(c.x() > 0.0) || std::abs(c.y()) > tan_h * c.x() || std::abs(c.z()) > tan_v * c.x()) continue;
      const double dist = offset.norm();
      if (dist < spec.range_min || dist > spec.range_max) continue;

      const std::optional<CellIndex> own = g.cell_of(kp);
      const double exempt_from = dist - joint_body_radius(skeletons[h], j) - half_diagonal;
      const Ray ray{pose.position, offset / dist, dist, spec.range_min};
      bool blocked = false;
      traverse(g, ray, [&](CellIndex cell, double t_entry, double) {
        if ((own && cell == *own) || t_entry >= exempt_from) return false;
        if (t_entry >= spec.range_min && truth[cell] == CellState::Occupied) {
          blocked = true;
          return false;
        }
        return true;
      });
      if (!blocked) vis.keypoints[static_cast<std::size_t>(j)] = kp;
    }
    out.push_back(vis);
  }
  return out;
}

void apply_keypoint_rep(VoxelGrid& estimate, std::span<const VisibleKeypoints> visible, KeypointModel model,
                        const KeypointRadii& radii) {
  const double radius = model == KeypointModel::Cylinders ? radii.cylinder : radii.sphere;
  for (const VisibleKeypoints& v : visible) {
    if (v.count() == 0) continue;
    for (CellIndex i : keypoint_volume(estimate.geometry(), v.keypoints, model, radius)) estimate.mark_occupied(i);
  }
}

VoxelGrid sense_rgb_zone(const VoxelGrid& truth, std::span<const HumanSkeleton> skeletons, const SensorPose& pose,
                         const CameraSpec& spec, std::span<const CellIndex> zone_cells, std::size_t min_visible) {
  const auto visible = detect_keypoints(truth, skeletons, pose, spec);
  const bool detected = std::any_of(visible.begin(), visible.end(), [&](const VisibleKeypoints& v) {
    return v.count() >= std::max<std::size_t>(min_visible, 1);
  });
  VoxelGrid estimate(truth.geometry(), CellState::Unknown);
  const CellState fill = detected ? CellState::Occupied : CellState::Free;
  for (CellIndex i : zone_cells) estimate[i] = fill;
  return estimate;
}

VoxelGrid sense_rgb_zone(const VoxelGrid& truth, std::span<const HumanSkeleton> skeletons, const SensorPose& pose,
                         const CameraSpec& spec, const RegionOfInterest& zone, std::size_t min_visible) {
  const auto cells = cells_in(truth.geometry(), zone);
  return sense_rgb_zone(truth, skeletons, pose, spec, std::span<const CellIndex>(cells), min_visible);
}

std::vector<CellIndex> pad_prism(const GridGeometry& g, const PadSpec& spec, double z_lo, double z_hi) {
  const Vec2 half = 0.5 * spec.dims_xy;
  const Aabb box{Vec3(spec.center_xy.x() - half.x(), spec.center_xy.y() - half.y(), z_lo),
                 Vec3(spec.center_xy.x() + half.x(), spec.center_xy.y() + half.y(), z_hi)};
  std::vector<CellIndex> out;
  g.for_each_center_in(box, [&](const Vec3& p) { return box.contains(p); },
                       [&](CellIndex i, const Vec3&) { out.push_back(i); });
  return out;
}

VoxelGrid sense_pad(const VoxelGrid& truth, const PadSpec& spec, double ceiling_z) {
  validate(spec);
  const GridGeometry& g = truth.geometry();
  if (spec.contact_band < g.resolution - 1e-12)
    throw ConfigError("pad contact_band must be at least one voxel (" + std::to_string(g.resolution) + " m)");
  const Aabb footprint = g.box();
  const Vec2 half = 0.5 * spec.dims_xy;
  if (spec.center_xy.x() - half.x() < footprint.min.x() - 1e-9 || spec.center_xy.x() + half.x() > footprint.max.x() + 1e-9 ||
      spec.center_xy.y() - half.y() < footprint.min.y() - 1e-9 || spec.center_xy.y() + half.y() > footprint.max.y() + 1e-9)
    throw ConfigError("pad rectangle extends outside the workspace footprint");

  const auto contact = pad_prism(g, spec, spec.floor_z, spec.floor_z + spec.contact_band);
  const bool active =
      std::any_of(contact.begin(), contact.end(), [&](CellIndex i) { return truth[i] == CellState::Occupied; });
  VoxelGrid estimate(g, CellState::Unknown);
  const CellState fill = active ? CellState::Occupied : CellState::Free;
  for (CellIndex i : pad_prism(g, spec, spec.floor_z, ceiling_z)) estimate[i] = fill;
  return estimate;
}

VoxelGrid sense_proximity(const VoxelGrid& truth, std::span<const CellIndex> robot_cells, const ProximitySpec& spec,
                          std::uint64_t seed) {
  validate(spec);
  VoxelGrid robot(truth.geometry(), CellState::Free);
  for (CellIndex i : robot_cells) robot.mark_occupied(i);
  const auto dist = occupied_distance(robot, spec.inflation);

  VoxelGrid estimate(truth.geometry(), CellState::Unknown);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, spec.noise_sigma > 0.0 ? spec.noise_sigma : 1.0);
  for (CellIndex i = 0; i < estimate.size(); ++i) {
    if (!std::isfinite(dist[i]) || dist[i] == 0.0) continue;  // outside shell or robot itself
    bool detected = false;
    if (truth[i] == CellState::Occupied) {
      const double measured = spec.noise_sigma > 0.0 ? dist[i] + noise(rng) : dist[i];
      detected = measured <= spec.inflation + 1e-12;
    }
    estimate[i] = detected ? CellState::Occupied : CellState::Free;
  }
  return estimate;
}

void add_robot_prior(VoxelGrid& estimate, std::span<const CellIndex> robot_cells) {
  for (CellIndex i : robot_cells) estimate.mark_occupied(i);
}

}  // namespace perispace
