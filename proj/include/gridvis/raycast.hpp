// Ray-casting line-of-sight oracle and per-cell sweep baseline.
//
// The traversal walks the segment between two cell centers through every cell
// the open segment passes, using incremental parametric boundary crossings.
// Because both endpoints are cell centers, the k-th vertical crossing happens
// at t = (2k-1)/(2|dx|) and the m-th horizontal one at t = (2m-1)/(2|dy|);
// ordering them reduces to the integer comparison (2k-1)|dy| vs (2m-1)|dx|,
// so corner hits are detected exactly. A segment through a lattice corner
// counts both cells adjacent to the corner as visited (supercover), which
// makes the visited set symmetric under endpoint swap.
//
// Blocking convention: the cell of `a` never blocks; the cell of `b` blocks
// iff occupied; cells strictly between block when occupancy reaches
// block_threshold.

#pragma once

#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gridvis/grid.hpp"

namespace gridvis {

inline constexpr double default_block_threshold = 0.5;

namespace detail {

// Visits, in order, every cell the open segment between the centers of a and
// b passes through, excluding the cell of a itself. The visitor returns false
// to stop early. Corner ties visit both side cells before the diagonal cell.
template <class Visit>
inline bool walk_segment(GridPoint a, GridPoint b, Visit&& visit) {
  const long dx = b.x - a.x, dy = b.y - a.y;
  const long adx = std::labs(dx), ady = std::labs(dy);
  const int sx = dx > 0 ? 1 : -1;
  const int sy = dy > 0 ? 1 : -1;

  int x = a.x, y = a.y;
  long k = 1, m = 1;  // next vertical / horizontal crossing index
  while (k <= adx || m <= ady) {
    if (k <= adx && m <= ady) {
      const long tv = (2 * k - 1) * ady;  // vertical crossing time, common scale
      const long th = (2 * m - 1) * adx;
      if (tv == th) {
        // Exact corner: both adjacent cells count as visited.
        if (!visit(x + sx, y)) return false;
        if (!visit(x, y + sy)) return false;
        x += sx;
        y += sy;
        ++k;
        ++m;
      } else if (tv < th) {
        x += sx;
        ++k;
      } else {
        y += sy;
        ++m;
      }
    } else if (k <= adx) {
      x += sx;
      ++k;
    } else {
      y += sy;
      ++m;
    }
    if (!visit(x, y)) return false;
  }
  return true;
}

}  // namespace detail

// True when no visited cell strictly between a and b reaches block_threshold;
// both endpoint cells are ignored. Symmetric under endpoint swap.
inline bool segment_clear(const OccupancyGrid& grid, GridPoint a, GridPoint b,
                          double block_threshold = default_block_threshold) {
  if (!grid.in_bounds(a) || !grid.in_bounds(b))
    throw std::invalid_argument("segment_clear: endpoint out of bounds");
  return detail::walk_segment(a, b, [&](int x, int y) {
    if ((x == b.x && y == b.y) || (x == a.x && y == a.y)) return true;
    return grid.at(x, y) < block_threshold;
  });
}

inline bool line_of_sight(const OccupancyGrid& grid, GridPoint a, GridPoint b,
                          double block_threshold = default_block_threshold) {
  if (!grid.in_bounds(a) || !grid.in_bounds(b))
    throw std::invalid_argument("line_of_sight: endpoint out of bounds");
  if (block_threshold <= 0.0 || block_threshold > 1.0)
    throw std::invalid_argument("line_of_sight: block_threshold must be in (0,1]");
  if (a == b) return true;
  if (grid.at(b) >= block_threshold) return false;
  return segment_clear(grid, a, b, block_threshold);
}

// Brute-force visibility mask: one line-of-sight query per cell. This is the
// baseline the sweep engine is benchmarked against.
inline void raycast_map_into(BinaryMask& out, const OccupancyGrid& grid, GridPoint source,
                             double block_threshold = default_block_threshold, int threads = 1) {
  if (!grid.in_bounds(source)) throw std::invalid_argument("raycast_map: source out of bounds");
  if (out.width() != grid.width() || out.height() != grid.height())
    out = BinaryMask(grid.width(), grid.height());

  auto rows = [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < grid.width(); ++x)
        out.set(x, y, line_of_sight(grid, source, GridPoint{x, y}, block_threshold));
  };

  if (threads <= 1 || grid.height() < 2 * threads) {
    rows(0, grid.height());
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (grid.height() + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int y0 = t * chunk;
    const int y1 = std::min(grid.height(), y0 + chunk);
    if (y0 >= y1) break;
    pool.emplace_back(rows, y0, y1);
  }
  for (auto& th : pool) th.join();
}

inline BinaryMask raycast_map(const OccupancyGrid& grid, GridPoint source,
                              double block_threshold = default_block_threshold, int threads = 1) {
  BinaryMask out(grid.width(), grid.height());
  raycast_map_into(out, grid, source, block_threshold, threads);
  return out;
}

}  // namespace gridvis
