// Occupancy grid core: cell coordinates, the occupancy grid itself and its
// complement, and the binary mask type shared by the visibility engine and
// the ray-casting oracle.
//
// Conventions used throughout the library:
//   - x is the column index (increasing right), y the row index (increasing
//     down), origin at the top-left, matching image formats.
//   - storage is row-major: index = y * width + x.
//   - occupancy is a real in [0,1], 1 meaning fully blocked.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridvis {

struct GridPoint {
  int x = 0;
  int y = 0;
  bool operator==(const GridPoint&) const = default;
};

inline double euclidean_distance(GridPoint a, GridPoint b) {
  const double dx = double(a.x) - double(b.x);
  const double dy = double(a.y) - double(b.y);
  return std::sqrt(dx * dx + dy * dy);
}

inline int chebyshev_distance(GridPoint a, GridPoint b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

class OccupancyGrid {
 public:
  OccupancyGrid() = default;

  OccupancyGrid(int width, int height, double fill = 0.0)
      : width_(width), height_(height) {
    check_dims(width, height);
    check_value(fill);
    cells_.assign(size_t(width) * size_t(height), fill);
  }

  OccupancyGrid(int width, int height, std::vector<double> cells)
      : width_(width), height_(height), cells_(std::move(cells)) {
    check_dims(width, height);
    if (cells_.size() != size_t(width) * size_t(height))
      throw std::invalid_argument("OccupancyGrid: cell count does not match dimensions");
    for (double v : cells_) check_value(v);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  size_t cell_count() const noexcept { return cells_.size(); }

  bool in_bounds(int x, int y) const noexcept {
    return unsigned(x) < unsigned(width_) && unsigned(y) < unsigned(height_);
  }
  bool in_bounds(GridPoint p) const noexcept { return in_bounds(p.x, p.y); }

  size_t index(int x, int y) const noexcept { return size_t(y) * width_ + x; }

  double at(int x, int y) const { return cells_[index(x, y)]; }
  double at(GridPoint p) const { return at(p.x, p.y); }

  void set(int x, int y, double v) {
    check_value(v);
    cells_[index(x, y)] = v;
  }
  void set(GridPoint p, double v) { set(p.x, p.y, v); }

  std::span<const double> cells() const noexcept { return cells_; }

  bool operator==(const OccupancyGrid&) const = default;

 private:
  static void check_dims(int w, int h) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("OccupancyGrid: dimensions must be positive");
  }
  static void check_value(double v) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      throw std::invalid_argument("OccupancyGrid: occupancy must be finite and in [0,1], got " +
                                  std::to_string(v));
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> cells_;
};

// Per-cell transparency grid: each output cell is 1 minus the input cell.
// Applying it twice restores the input.
inline OccupancyGrid complement(const OccupancyGrid& grid) {
  std::vector<double> out(grid.cell_count());
  auto in = grid.cells();
  for (size_t i = 0; i < out.size(); ++i) out[i] = 1.0 - in[i];
  return OccupancyGrid(grid.width(), grid.height(), std::move(out));
}

class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false)
      : width_(width), height_(height), bits_(size_t(width) * size_t(height), fill ? 1 : 0) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("BinaryMask: dimensions must be positive");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  size_t cell_count() const noexcept { return bits_.size(); }

  bool in_bounds(int x, int y) const noexcept {
    return unsigned(x) < unsigned(width_) && unsigned(y) < unsigned(height_);
  }

  size_t index(int x, int y) const noexcept { return size_t(y) * width_ + x; }

  bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
  bool at(GridPoint p) const { return at(p.x, p.y); }
  void set(int x, int y, bool v) { bits_[index(x, y)] = v ? 1 : 0; }
  void set(GridPoint p, bool v) { set(p.x, p.y, v); }

  std::span<const uint8_t> bits() const noexcept { return bits_; }

  size_t count_true() const noexcept {
    size_t n = 0;
    for (uint8_t b : bits_) n += b;
    return n;
  }

  bool operator==(const BinaryMask&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<uint8_t> bits_;
};

}  // namespace gridvis
