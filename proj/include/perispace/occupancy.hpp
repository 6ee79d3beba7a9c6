#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "perispace/geometry.hpp"

namespace perispace {

// Ordered so that fusion is a per-cell max.
enum class CellState : std::uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

char to_char(CellState s);

using CellIndex = std::size_t;
using Index3 = std::array<int, 3>;

// Placement of a dense lattice in the world. Cell (x, y, z) covers
// [origin + (x, y, z) * resolution, origin + (x + 1, y + 1, z + 1) * resolution)
// and is stored at x + dims.x * (y + dims.y * z).
struct GridGeometry {
  Vec3 origin = Vec3::Zero();
  double resolution = 0.0;
  Index3 dims{0, 0, 0};

  std::size_t cell_count() const {
    return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  }
  CellIndex index(int x, int y, int z) const {
    return static_cast<CellIndex>(x) +
           static_cast<CellIndex>(dims[0]) * (static_cast<CellIndex>(y) + static_cast<CellIndex>(dims[1]) * z);
  }
  CellIndex index(const Index3& c) const { return index(c[0], c[1], c[2]); }
  Index3 coords(CellIndex i) const {
    const int x = static_cast<int>(i % dims[0]);
    const std::size_t rest = i / dims[0];
    return {x, static_cast<int>(rest % dims[1]), static_cast<int>(rest / dims[1])};
  }
  Vec3 cell_center(const Index3& c) const {
    return origin + resolution * Vec3(c[0] + 0.5, c[1] + 0.5, c[2] + 0.5);
  }
  Vec3 cell_center(CellIndex i) const { return cell_center(coords(i)); }
  bool in_bounds(const Index3& c) const {
    return c[0] >= 0 && c[1] >= 0 && c[2] >= 0 && c[0] < dims[0] && c[1] < dims[1] && c[2] < dims[2];
  }
  // nullopt is the Outside result.
  std::optional<CellIndex> cell_of(const Vec3& p) const;
  Aabb box() const {
    return {origin, origin + resolution * Vec3(dims[0], dims[1], dims[2])};
  }

  // Visits every cell whose centre satisfies `pred`, restricted to cells
  // near `region`. fn(CellIndex, const Vec3& centre).
  template <class Pred, class Fn>
  void for_each_center_in(const Aabb& region, Pred&& pred, Fn&& fn) const;

  bool operator==(const GridGeometry& o) const {
    return dims == o.dims && resolution == o.resolution && origin == o.origin;
  }
};

class VoxelGrid {
 public:
  VoxelGrid() = default;
  VoxelGrid(const GridGeometry& geometry, CellState fill)
      : geometry_(geometry), cells_(geometry.cell_count(), fill) {}

  const GridGeometry& geometry() const { return geometry_; }
  std::size_t size() const { return cells_.size(); }

  CellState operator[](CellIndex i) const { return cells_[i]; }
  CellState& operator[](CellIndex i) { return cells_[i]; }
  CellState at(const Index3& c) const { return cells_[geometry_.index(c)]; }

  std::span<const CellState> cells() const { return cells_; }
  std::span<CellState> cells() { return cells_; }

  // Raises to Occupied; never demotes.
  void mark_occupied(CellIndex i) { cells_[i] = CellState::Occupied; }
  // Unknown -> Free; Occupied stays.
  void mark_free(CellIndex i) {
    if (cells_[i] == CellState::Unknown) cells_[i] = CellState::Free;
  }

  bool operator==(const VoxelGrid& o) const { return geometry_ == o.geometry_ && cells_ == o.cells_; }

 private:
  GridGeometry geometry_;
  std::vector<CellState> cells_;
};

GridGeometry make_geometry(const Aabb& bounds, double resolution);
VoxelGrid new_grid(const Aabb& bounds, double resolution, CellState fill);

struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::UnitX();  // unit length
  double max_range = 1.0;
  double min_range = 0.0;
};

// Normalizes `direction`; throws std::invalid_argument on a zero direction
// or inconsistent range limits.
Ray make_ray(const Vec3& origin, const Vec3& direction, double min_range, double max_range);

struct RayHit {
  CellIndex cell = 0;
  double distance = 0.0;
};

// Walks the cells pierced by the ray segment [0, max_range) in order
// (voxel DDA). fn(CellIndex, double t_entry, double t_exit) returns false to
// stop. Segments outside the grid are skipped.
template <class Fn>
void traverse(const GridGeometry& g, const Ray& ray, Fn&& fn);

// First Occupied cell whose entry distance lies in [min_range, max_range).
// Unknown cells are treated as empty. nullopt is a miss.
std::optional<RayHit> cast_ray(const VoxelGrid& truth, const Ray& ray);

// The cell that contains the point at `distance` along the ray, with that
// distance; nullopt when the point lies outside the grid.
std::optional<RayHit> locate_along(const GridGeometry& g, const Ray& ray, double distance);

// Carves Free up to the hit (cells with entry >= min_range) and marks the hit
// cell Occupied. A miss carves up to max_range. Occupied cells are never freed.
void integrate_ray(VoxelGrid& estimate, const Ray& ray, const std::optional<RayHit>& hit);

// Per-cell distance between cell centres and the nearest Occupied centre,
// +inf where that exceeds `radius`.
std::vector<double> occupied_distance(const VoxelGrid& grid, double radius);

VoxelGrid inflate(const VoxelGrid& grid, double radius);

// Occupied > Free > Unknown per cell. Throws std::invalid_argument on an
// empty list or mismatched geometry.
VoxelGrid fuse(std::span<const VoxelGrid> estimates);
void fuse_into(VoxelGrid& acc, const VoxelGrid& other);

struct StateCounts {
  std::size_t occupied = 0;
  std::size_t free = 0;
  std::size_t unknown = 0;
  std::size_t total() const { return occupied + free + unknown; }
};

StateCounts count_states(const VoxelGrid& grid, const RegionOfInterest& region);

// Indices (ascending) of cells whose centres lie inside the region.
std::vector<CellIndex> cells_in(const GridGeometry& g, const RegionOfInterest& region);

// Text dump: header line, then one z-slice per paragraph, one y-row per line.
void write_dump(std::ostream& os, const VoxelGrid& grid);
VoxelGrid read_dump(std::istream& is);

// ---------------------------------------------------------------------------

template <class Pred, class Fn>
void GridGeometry::for_each_center_in(const Aabb& region, Pred&& pred, Fn&& fn) const {
  Index3 lo, hi;
  for (int a = 0; a < 3; ++a) {
    const double l = (region.min[a] - origin[a]) / resolution - 0.5;
    const double h = (region.max[a] - origin[a]) / resolution - 0.5;
    if (!(h >= l - 1.0)) return;
    lo[a] = std::max(0, static_cast<int>(std::floor(std::max(l, -1.0))));
    hi[a] = std::min(dims[a] - 1, static_cast<int>(std::ceil(std::min(h, static_cast<double>(dims[a])))));
    if (lo[a] > hi[a]) return;
  }
  for (int z = lo[2]; z <= hi[2]; ++z)
    for (int y = lo[1]; y <= hi[1]; ++y)
      for (int x = lo[0]; x <= hi[0]; ++x) {
        const Index3 c{x, y, z};
        const Vec3 p = cell_center(c);
        if (pred(p)) fn(index(c), p);
      }
}

template <class Fn>
void traverse(const GridGeometry& g, const Ray& ray, Fn&& fn) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const Aabb box = g.box();
  double t0 = 0.0;
  double t1 = ray.max_range;
  Vec3 inv;
  for (int a = 0; a < 3; ++a) {
    const double d = ray.direction[a];
    if (d == 0.0) {
      inv[a] = kInf;
      if (ray.origin[a] < box.min[a] || ray.origin[a] >= box.max[a]) return;
      continue;
    }
    inv[a] = 1.0 / d;
    double ta = (box.min[a] - ray.origin[a]) * inv[a];
    double tb = (box.max[a] - ray.origin[a]) * inv[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  if (!(t0 < t1)) return;

  const Vec3 start = ray.origin + t0 * ray.direction;
  Index3 cell;
  Index3 step;
  Vec3 t_max;
  for (int a = 0; a < 3; ++a) {
    const int c = static_cast<int>(std::floor((start[a] - g.origin[a]) / g.resolution));
    cell[a] = std::clamp(c, 0, g.dims[a] - 1);
    const double d = ray.direction[a];
    step[a] = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (step[a] == 0) {
      t_max[a] = kInf;
    } else {
      const double boundary = g.origin[a] + (cell[a] + (step[a] > 0 ? 1 : 0)) * g.resolution;
      t_max[a] = (boundary - ray.origin[a]) * inv[a];
    }
  }

  double t_entry = t0;
  for (;;) {
    int axis = 0;
    if (t_max[1] < t_max[axis]) axis = 1;
    if (t_max[2] < t_max[axis]) axis = 2;
    const double t_exit = std::max(t_entry, std::min(t_max[axis], t1));
    if (!fn(g.index(cell), t_entry, t_exit)) return;
    if (t_max[axis] >= t1) return;
    cell[axis] += step[axis];
    if (cell[axis] < 0 || cell[axis] >= g.dims[axis]) return;
    t_entry = t_exit;
    const double boundary = g.origin[axis] + (cell[axis] + (step[axis] > 0 ? 1 : 0)) * g.resolution;
    t_max[axis] = (boundary - ray.origin[axis]) * inv[axis];
  }
}

}  // namespace perispace
