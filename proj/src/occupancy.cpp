#include "perispace/occupancy.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "perispace/error.hpp"

namespace perispace {

char to_char(CellState s) {
  switch (s) {
    case CellState::Occupied: return '#';
    case CellState::Free: return '.';
    case CellState::Unknown: return '?';
  }
  return '?';
}

std::optional<CellIndex> GridGeometry::cell_of(const Vec3& p) const {
  Index3 c;
  for (int a = 0; a < 3; ++a) {
    const double f = std::floor((p[a] - origin[a]) / resolution);
    if (f < 0.0 || f >= dims[a]) return std::nullopt;
    c[a] = static_cast<int>(f);
  }
  return index(c);
}

GridGeometry make_geometry(const Aabb& bounds, double resolution) {
  if (!(resolution > 0.0) || !std::isfinite(resolution))
    throw std::invalid_argument("grid resolution must be positive");
  const Vec3 extent = bounds.extent();
  if (!(extent.array() > 0.0).all() || !extent.allFinite())
    throw std::invalid_argument("grid bounds must have positive extent on every axis");
  GridGeometry g;
  g.origin = bounds.min;
  g.resolution = resolution;
  for (int a = 0; a < 3; ++a) {
    // Tolerate representation error in extent/resolution (4.0 / 0.05).
    const double n = std::ceil(extent[a] / resolution - 1e-9);
    if (n > 1 << 20) throw std::invalid_argument("grid is too large");
    g.dims[a] = std::max(1, static_cast<int>(n));
  }
  return g;
}

VoxelGrid new_grid(const Aabb& bounds, double resolution, CellState fill) {
  return VoxelGrid(make_geometry(bounds, resolution), fill);
}

Ray make_ray(const Vec3& origin, const Vec3& direction, double min_range, double max_range) {
  const double n = direction.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("ray direction must be non-zero");
  if (!(min_range >= 0.0) || !(max_range > min_range))
    throw std::invalid_argument("ray requires 0 <= min_range < max_range");
  return {origin, direction / n, max_range, min_range};
}

std::optional<RayHit> cast_ray(const VoxelGrid& truth, const Ray& ray) {
  std::optional<RayHit> hit;
  traverse(truth.geometry(), ray, [&](CellIndex cell, double t_entry, double) {
    if (t_entry >= ray.min_range && truth[cell] == CellState::Occupied) {
      hit = RayHit{cell, t_entry};
      return false;
    }
    return true;
  });
  return hit;
}

std::optional<RayHit> locate_along(const GridGeometry& g, const Ray& ray, double distance) {
  std::optional<RayHit> found;
  if (distance < 0.0) return found;
  Ray probe = ray;
  probe.max_range = std::max(distance, ray.max_range);
  traverse(g, probe, [&](CellIndex cell, double t_entry, double t_exit) {
    if (t_entry > distance) return false;
    if (distance < t_exit) {
      found = RayHit{cell, distance};
      return false;
    }
    return true;
  });
  return found;
}

void integrate_ray(VoxelGrid& estimate, const Ray& ray, const std::optional<RayHit>& hit) {
  traverse(estimate.geometry(), ray, [&](CellIndex cell, double t_entry, double) {
    if (hit) {
      if (cell == hit->cell) {
        estimate.mark_occupied(cell);
        return false;
      }
      if (t_entry > hit->distance) return false;
    }
    if (t_entry >= ray.min_range) estimate.mark_free(cell);
    return true;
  });
}

namespace {

struct StencilEntry {
  int dx, dy, dz;
  double distance;
};

std::vector<StencilEntry> ball_stencil(double radius, double resolution) {
  std::vector<StencilEntry> out;
  const double r = radius / resolution;
  const int n = static_cast<int>(std::floor(r + 1e-9));
  const double r2 = r * r + 1e-9;
  for (int dz = -n; dz <= n; ++dz)
    for (int dy = -n; dy <= n; ++dy)
      for (int dx = -n; dx <= n; ++dx) {
        const double d2 = dx * dx + dy * dy + dz * dz;
        if (d2 <= r2) out.push_back({dx, dy, dz, std::sqrt(d2) * resolution});
      }
  return out;
}

// Occupied cells with at least one non-Occupied (or out-of-grid) 6-neighbour.
// Interior cells are never the unique nearest occupied cell to a free cell.
bool on_boundary(const VoxelGrid& grid, const Index3& c) {
  const GridGeometry& g = grid.geometry();
  static constexpr int kOffsets[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (const auto& o : kOffsets) {
    const Index3 n{c[0] + o[0], c[1] + o[1], c[2] + o[2]};
    if (!g.in_bounds(n) || grid.at(n) != CellState::Occupied) return true;
  }
  return false;
}

}  // namespace

std::vector<double> occupied_distance(const VoxelGrid& grid, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("radius must be non-negative");
  const GridGeometry& g = grid.geometry();
  std::vector<double> dist(grid.size(), std::numeric_limits<double>::infinity());
  const auto stencil = ball_stencil(radius, g.resolution);
  for (CellIndex i = 0; i < grid.size(); ++i) {
    if (grid[i] != CellState::Occupied) continue;
    dist[i] = 0.0;
    const Index3 c = g.coords(i);
    if (!on_boundary(grid, c)) continue;
    for (const auto& s : stencil) {
      const Index3 n{c[0] + s.dx, c[1] + s.dy, c[2] + s.dz};
      if (!g.in_bounds(n)) continue;
      double& d = dist[g.index(n)];
      d = std::min(d, s.distance);
    }
  }
  return dist;
}

VoxelGrid inflate(const VoxelGrid& grid, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("inflation radius must be non-negative");
  VoxelGrid out = grid;
  if (radius == 0.0) return out;
  const auto dist = occupied_distance(grid, radius);
  for (CellIndex i = 0; i < out.size(); ++i)
    if (std::isfinite(dist[i])) out.mark_occupied(i);
  return out;
}

void fuse_into(VoxelGrid& acc, const VoxelGrid& other) {
  if (!(acc.geometry() == other.geometry())) throw std::invalid_argument("fuse: grid geometry mismatch");
  auto dst = acc.cells();
  const auto src = other.cells();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::max(dst[i], src[i]);
}

VoxelGrid fuse(std::span<const VoxelGrid> estimates) {
  if (estimates.empty()) throw std::invalid_argument("fuse: empty estimate list");
  VoxelGrid out = estimates.front();
  for (const auto& e : estimates.subspan(1)) fuse_into(out, e);
  return out;
}

std::vector<CellIndex> cells_in(const GridGeometry& g, const RegionOfInterest& region) {
  std::vector<CellIndex> out;
  g.for_each_center_in(
      bounds(region), [&](const Vec3& p) { return contains(region, p); },
      [&](CellIndex i, const Vec3&) { out.push_back(i); });
  return out;
}

StateCounts count_states(const VoxelGrid& grid, const RegionOfInterest& region) {
  StateCounts counts;
  grid.geometry().for_each_center_in(
      bounds(region), [&](const Vec3& p) { return contains(region, p); },
      [&](CellIndex i, const Vec3&) {
        switch (grid[i]) {
          case CellState::Occupied: ++counts.occupied; break;
          case CellState::Free: ++counts.free; break;
          case CellState::Unknown: ++counts.unknown; break;
        }
      });
  return counts;
}

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_dump(std::ostream& os, const VoxelGrid& grid) {
  const GridGeometry& g = grid.geometry();
  os << "dims " << g.dims[0] << ' ' << g.dims[1] << ' ' << g.dims[2] << " resolution " << shortest(g.resolution)
     << " origin " << shortest(g.origin.x()) << ' ' << shortest(g.origin.y()) << ' ' << shortest(g.origin.z())
     << '\n';
  std::string row(static_cast<std::size_t>(g.dims[0]), ' ');
  for (int z = 0; z < g.dims[2]; ++z) {
    os << '\n';
    for (int y = 0; y < g.dims[1]; ++y) {
      for (int x = 0; x < g.dims[0]; ++x) row[x] = to_char(grid.at({x, y, z}));
      os << row << '\n';
    }
  }
}

VoxelGrid read_dump(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("grid dump: missing header");
  std::istringstream header(line);
  std::string k_dims, k_res, k_origin;
  GridGeometry g;
  header >> k_dims >> g.dims[0] >> g.dims[1] >> g.dims[2] >> k_res >> g.resolution >> k_origin >> g.origin.x() >>
      g.origin.y() >> g.origin.z();
  if (!header || k_dims != "dims" || k_res != "resolution" || k_origin != "origin")
    throw ParseError("grid dump: malformed header '" + line + "'");
  if (g.dims[0] < 1 || g.dims[1] < 1 || g.dims[2] < 1 || !(g.resolution > 0.0))
    throw ParseError("grid dump: invalid geometry in header");
  VoxelGrid grid(g, CellState::Unknown);
  for (int z = 0; z < g.dims[2]; ++z) {
    if (!std::getline(is, line) || !line.empty())
      throw ParseError("grid dump: expected blank line before slice " + std::to_string(z));
    for (int y = 0; y < g.dims[1]; ++y) {
      if (!std::getline(is, line) || static_cast<int>(line.size()) != g.dims[0])
        throw ParseError("grid dump: short row at z=" + std::to_string(z) + " y=" + std::to_string(y));
      for (int x = 0; x < g.dims[0]; ++x) {
        CellState s;
        switch (line[x]) {
          case '#': s = CellState::Occupied; break;
          case '.': s = CellState::Free; break;
          case '?': s = CellState::Unknown; break;
          default: throw ParseError(std::string("grid dump: bad cell character '") + line[x] + "'");
        }
        grid[g.index(x, y, z)] = s;
      }
    }
  }
  return grid;
}

}  // namespace perispace
