// Procedural test-map generation. Every map is a pure function of its
// MapSpec: the same spec always yields the same grid, on any platform
// (bounded sampling is done by rejection rather than through
// std::uniform_int_distribution, whose output is implementation-defined).

#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "gridvis/grid.hpp"

namespace gridvis {

enum class MapKind { empty, random_rects, random_disks, maze };

inline const char* to_string(MapKind k) {
  switch (k) {
    case MapKind::empty: return "empty";
    case MapKind::random_rects: return "random-rects";
    case MapKind::random_disks: return "random-disks";
    case MapKind::maze: return "maze";
  }
  return "?";
}

inline MapKind map_kind_from_string(const std::string& s) {
  if (s == "empty") return MapKind::empty;
  if (s == "rects" || s == "random-rects") return MapKind::random_rects;
  if (s == "disks" || s == "random-disks") return MapKind::random_disks;
  if (s == "maze" || s == "from-text-maze") return MapKind::maze;
  throw std::invalid_argument("unknown map kind '" + s + "'");
}

struct MapSpec {
  MapKind kind = MapKind::empty;
  uint64_t seed = 0;
  double density = 0.0;  // target occupied fraction for the random kinds
  int width = 0;
  int height = 0;
};

struct GeneratedMap {
  OccupancyGrid grid;
  // Set when the placement-attempt cap was reached before the requested
  // density; the grid is still usable.
  bool density_shortfall = false;
};

// Maze lattice geometry: square rooms of side maze_corridor, separated by
// maze_wall-thick walls.
inline constexpr int maze_corridor = 3;
inline constexpr int maze_wall = 3;
inline constexpr int maze_pitch = maze_corridor + maze_wall;

namespace detail {

// Uniform integer in [0, n) by rejection; stable across standard libraries.
inline uint64_t uniform_below(std::mt19937_64& rng, uint64_t n) {
  const uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
  uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

inline GeneratedMap generate_shapes(const MapSpec& spec, bool disks) {
  OccupancyGrid grid(spec.width, spec.height, 0.0);
  const size_t total = grid.cell_count();
  const size_t target = size_t(spec.density * double(total));
  size_t occupied = 0;

  std::mt19937_64 rng(spec.seed);
  const int max_extent = std::max(3, std::min(spec.width, spec.height) / 8);
  const size_t attempt_cap = 64 * (target + 1);
  size_t attempts = 0;

  // Shapes are kept off the outer border (one-cell margin) but may overlap
  // each other.
  while (occupied < target && attempts < attempt_cap) {
    ++attempts;
    if (disks) {
      const int r = 1 + int(uniform_below(rng, uint64_t(std::max(1, max_extent / 2))));
      if (spec.width - 2 * r - 2 <= 0 || spec.height - 2 * r - 2 <= 0) continue;
      const int cx = r + 1 + int(uniform_below(rng, uint64_t(spec.width - 2 * r - 2)));
      const int cy = r + 1 + int(uniform_below(rng, uint64_t(spec.height - 2 * r - 2)));
      for (int y = cy - r; y <= cy + r; ++y)
        for (int x = cx - r; x <= cx + r; ++x) {
          const long dx = x - cx, dy = y - cy;
          if (dx * dx + dy * dy > long(r) * r) continue;
          if (grid.at(x, y) == 0.0) {
            grid.set(x, y, 1.0);
            ++occupied;
          }
        }
    } else {
      const int w = 2 + int(uniform_below(rng, uint64_t(max_extent)));
      const int h = 2 + int(uniform_below(rng, uint64_t(max_extent)));
      if (spec.width - w - 2 <= 0 || spec.height - h - 2 <= 0) continue;
      const int x0 = 1 + int(uniform_below(rng, uint64_t(spec.width - w - 2)));
      const int y0 = 1 + int(uniform_below(rng, uint64_t(spec.height - h - 2)));
      for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x)
          if (grid.at(x, y) == 0.0) {
            grid.set(x, y, 1.0);
            ++occupied;
          }
    }
  }
  return GeneratedMap{std::move(grid), occupied < target};
}

// Perfect maze: recursive-backtracker over a coarse room lattice, rooms
// corridor_size wide separated by wall_size-thick walls. Dead space on the
// right/bottom that does not fit a full room pitch stays walled.
inline GeneratedMap generate_maze(const MapSpec& spec) {
  constexpr int corridor = maze_corridor;
  constexpr int wall = maze_wall;
  constexpr int pitch = maze_pitch;
  const int rooms_x = (spec.width - wall) / pitch;
  const int rooms_y = (spec.height - wall) / pitch;
  if (rooms_x < 2 || rooms_y < 2)
    throw std::invalid_argument("maze map needs at least " + std::to_string(2 * pitch + wall) +
                                " cells per side");

  OccupancyGrid grid(spec.width, spec.height, 1.0);
  auto carve = [&](int x0, int y0, int w, int h) {
    for (int y = y0; y < y0 + h; ++y)
      for (int x = x0; x < x0 + w; ++x) grid.set(x, y, 0.0);
  };
  auto room_origin = [&](int rx, int ry) {
    return GridPoint{wall + rx * pitch, wall + ry * pitch};
  };

  std::mt19937_64 rng(spec.seed);
  std::vector<uint8_t> visited(size_t(rooms_x) * rooms_y, 0);
  std::vector<GridPoint> stack;
  stack.push_back({0, 0});
  visited[0] = 1;
  carve(room_origin(0, 0).x, room_origin(0, 0).y, corridor, corridor);

  constexpr int DX[4] = {1, -1, 0, 0};
  constexpr int DY[4] = {0, 0, 1, -1};
  while (!stack.empty()) {
    const GridPoint cur = stack.back();
    int order[4] = {0, 1, 2, 3};
    for (int i = 3; i > 0; --i) std::swap(order[i], order[int(uniform_below(rng, uint64_t(i + 1)))]);
    bool advanced = false;
    for (int k = 0; k < 4 && !advanced; ++k) {
      const int nx = cur.x + DX[order[k]], ny = cur.y + DY[order[k]];
      if (nx < 0 || ny < 0 || nx >= rooms_x || ny >= rooms_y) continue;
      if (visited[size_t(ny) * rooms_x + nx]) continue;
      visited[size_t(ny) * rooms_x + nx] = 1;
      const GridPoint a = room_origin(cur.x, cur.y);
      const GridPoint b = room_origin(nx, ny);
      carve(b.x, b.y, corridor, corridor);
      // Opening between the two rooms: spans the corridor width plus the wall
      // band that separates them.
      carve(std::min(a.x, b.x), std::min(a.y, b.y),
            (a.x == b.x) ? corridor : pitch + corridor,
            (a.y == b.y) ? corridor : pitch + corridor);
      stack.push_back({nx, ny});
      advanced = true;
    }
    if (!advanced) stack.pop_back();
  }
  return GeneratedMap{std::move(grid), false};
}

}  // namespace detail

inline GeneratedMap generate_map(const MapSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0)
    throw std::invalid_argument("generate_map: dimensions must be positive");
  if (spec.density < 0.0 || spec.density > 1.0)
    throw std::invalid_argument("generate_map: density must be in [0,1]");
  switch (spec.kind) {
    case MapKind::empty: return GeneratedMap{OccupancyGrid(spec.width, spec.height, 0.0), false};
    case MapKind::random_rects: return detail::generate_shapes(spec, false);
    case MapKind::random_disks: return detail::generate_shapes(spec, true);
    case MapKind::maze: return detail::generate_maze(spec);
  }
  throw std::logic_error("unreachable");
}

// Centre of the room lattice cell nearest to (rx, ry); used to pick start and
// target points that are guaranteed free in generated mazes.
inline GridPoint maze_room_center(const MapSpec& spec, int rx, int ry) {
  const int rooms_x = (spec.width - maze_wall) / maze_pitch;
  const int rooms_y = (spec.height - maze_wall) / maze_pitch;
  rx = std::clamp(rx, 0, rooms_x - 1);
  ry = std::clamp(ry, 0, rooms_y - 1);
  return GridPoint{maze_wall + rx * maze_pitch + maze_corridor / 2,
                   maze_wall + ry * maze_pitch + maze_corridor / 2};
}

}  // namespace gridvis
