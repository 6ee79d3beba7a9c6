#pragma once

// Shared fixtures and brute-force oracles for the unit and acceptance tests.

#include <cmath>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "perispace/occupancy.hpp"
#include "perispace/scene.hpp"

namespace perispace::testing {

inline std::filesystem::path data_dir() { return PERISPACE_DATA_DIR; }
inline std::filesystem::path config_dir() { return PERISPACE_CONFIG_DIR; }

inline SceneModel load_static(const std::string& file) {
  return std::get<SceneModel>(load_scene_file(data_dir() / file));
}

inline std::optional<Index3> cell_coords(const GridGeometry& g, const Vec3& p) {
  Index3 c;
  for (int a = 0; a < 3; ++a) c[a] = static_cast<int>(std::floor((p[a] - g.origin[a]) / g.resolution));
  if (!g.in_bounds(c)) return std::nullopt;
  return c;
}

// Cells pierced by the ray segment [0, max_range), found by sampling every
// resolution/50 and bisecting between samples that skip a corner or edge.
inline std::vector<CellIndex> sampled_cells(const GridGeometry& g, const Ray& ray) {
  std::vector<CellIndex> out;
  const double step = g.resolution / 50.0;
  auto at = [&](double t) { return cell_coords(g, ray.origin + t * ray.direction); };
  auto adjacent = [](const Index3& a, const Index3& b) {
    return std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]) + std::abs(a[2] - b[2]) <= 1;
  };
  auto push = [&](const Index3& c) {
    const CellIndex i = g.index(c);
    if (out.empty() || out.back() != i) out.push_back(i);
  };
  // Recursive refinement between two in-grid samples in non-adjacent cells.
  auto refine = [&](auto&& self, double t0, const Index3& c0, double t1, const Index3& c1, int depth) -> void {
    if (adjacent(c0, c1) || depth > 60) {
      push(c1);
      return;
    }
    const double tm = 0.5 * (t0 + t1);
    const auto cm = at(tm);
    if (!cm) {
      push(c1);
      return;
    }
    self(self, t0, c0, tm, *cm, depth + 1);
    self(self, tm, *cm, t1, c1, depth + 1);
  };
  std::optional<Index3> prev;
  double t_prev = 0.0;
  const auto n = static_cast<long>(std::ceil(ray.max_range / step));
  for (long k = 0; k <= n; ++k) {
    // The last sample sits just short of max_range.
    const double t = k < n ? k * step : std::nextafter(ray.max_range, 0.0);
    auto c = at(t);
    if (c) {
      if (prev && *prev != *c) {
        refine(refine, t_prev, *prev, t, *c, 0);
      } else if (!prev) {
        // Entered the grid since the last sample: find the first cell.
        double lo = t_prev, hi = t;
        for (int i = 0; k > 0 && i < 60; ++i) (at(0.5 * (lo + hi)) ? hi : lo) = 0.5 * (lo + hi);
        const Index3 first = *at(hi);
        push(first);
        if (first != *c) refine(refine, hi, first, t, *c, 0);
      }
    } else if (prev) {
      // Left the grid: the last cell may be clipped between two samples.
      double lo = t_prev, hi = t;
      for (int i = 0; i < 60; ++i) (at(0.5 * (lo + hi)) ? lo : hi) = 0.5 * (lo + hi);
      const Index3 last = *at(lo);
      if (last != *prev) refine(refine, t_prev, *prev, lo, last, 0);
    }
    prev = c;
    t_prev = t;
  }
  return out;
}

// First Occupied cell along the sampled traversal (min_range 0 only).
inline std::optional<CellIndex> oracle_hit(const VoxelGrid& truth, const Ray& ray) {
  for (CellIndex i : sampled_cells(truth.geometry(), ray))
    if (truth[i] == CellState::Occupied) return i;
  return std::nullopt;
}

inline VoxelGrid random_grid(std::mt19937_64& rng, int max_dim, double p_occupied) {
  std::uniform_int_distribution<int> dim(4, max_dim);
  std::uniform_real_distribution<double> res(0.05, 0.5);
  std::uniform_real_distribution<double> off(-2.0, 2.0);
  std::bernoulli_distribution occ(p_occupied);
  GridGeometry g;
  g.origin = Vec3(off(rng), off(rng), off(rng));
  g.resolution = res(rng);
  g.dims = {dim(rng), dim(rng), dim(rng)};
  VoxelGrid grid(g, CellState::Free);
  for (CellIndex i = 0; i < grid.size(); ++i)
    if (occ(rng)) grid[i] = CellState::Occupied;
  return grid;
}

// Random ray whose origin lies within the grid box grown by one extent;
// three in four are aimed at a point inside the box.
inline Ray random_ray(std::mt19937_64& rng, const GridGeometry& g) {
  const Aabb box = g.box();
  const Vec3 ext = box.extent();
  std::uniform_real_distribution<double> u(-0.5, 1.5), in(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 o, target;
  for (int a = 0; a < 3; ++a) o[a] = box.min[a] + u(rng) * ext[a];
  for (int a = 0; a < 3; ++a) target[a] = box.min[a] + in(rng) * ext[a];
  Vec3 d = in(rng) < 0.75 ? Vec3(target - o) : Vec3(n(rng), n(rng), n(rng));
  if (d.norm() < 1e-9) d = Vec3::UnitX();
  return make_ray(o, d, 0.0, 3.0 * ext.norm());
}

}  // namespace perispace::testing
