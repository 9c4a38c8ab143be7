// Color overlay rendering: visibility in grayscale, obstacles in red,
// planner annotations in the usual palette (waypoints cyan, path magenta,
// start green, target blue, light source yellow). Output is binary PPM (P6).

#pragma once

#include <filesystem>
#include <fstream>
#include <vector>

#include "gridvis/grid.hpp"
#include "gridvis/visibility.hpp"

namespace gridvis {

struct Rgb {
  unsigned char r = 0, g = 0, b = 0;
};

namespace palette {
inline constexpr Rgb obstacle{220, 30, 30};
inline constexpr Rgb waypoint{0, 255, 255};
inline constexpr Rgb path{255, 0, 255};
inline constexpr Rgb start{0, 200, 0};
inline constexpr Rgb target{40, 90, 255};
inline constexpr Rgb source{255, 220, 0};
}  // namespace palette

class Image {
 public:
  Image(int width, int height) : width_(width), height_(height), px_(size_t(width) * height) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  void set(int x, int y, Rgb c) {
    if (unsigned(x) < unsigned(width_) && unsigned(y) < unsigned(height_))
      px_[size_t(y) * width_ + x] = c;
  }

  // Filled square of side 2*half+1 centered on (x, y), clipped to the image.
  void stamp(int x, int y, int half, Rgb c) {
    for (int yy = y - half; yy <= y + half; ++yy)
      for (int xx = x - half; xx <= x + half; ++xx) set(xx, yy, c);
  }

  void line(GridPoint a, GridPoint b, Rgb c) {
    int x0 = a.x, y0 = a.y;
    const int dx = std::abs(b.x - a.x), sx = a.x < b.x ? 1 : -1;
    const int dy = -std::abs(b.y - a.y), sy = a.y < b.y ? 1 : -1;
    int err = dx + dy;
    while (true) {
      set(x0, y0, c);
      if (x0 == b.x && y0 == b.y) break;
      const int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }

  void save_ppm(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "P6\n" << width_ << " " << height_ << "\n255\n";
    out.write(reinterpret_cast<const char*>(px_.data()), std::streamsize(px_.size() * 3));
  }

 private:
  int width_, height_;
  std::vector<Rgb> px_;
};

struct OverlayMarks {
  std::optional<GridPoint> source;
  std::optional<GridPoint> start;
  std::optional<GridPoint> target;
  std::vector<GridPoint> waypoints;
  std::vector<GridPoint> path;  // consecutive points connected with lines
};

// Base layer from the field (white = fully visible), obstacles from the grid
// painted red, then annotations. Mark size scales mildly with the map so the
// dots stay visible on large scenes.
inline Image render_overlay(const VisibilityField& field, const OccupancyGrid& grid,
                            const OverlayMarks& marks = {},
                            double obstacle_threshold = 0.5) {
  Image img(field.width, field.height);
  for (int y = 0; y < field.height; ++y)
    for (int x = 0; x < field.width; ++x) {
      const auto g = static_cast<unsigned char>(
          std::lround(std::clamp(field.at(x, y), 0.0, 1.0) * 255.0));
      img.set(x, y, Rgb{g, g, g});
    }
  for (int y = 0; y < grid.height(); ++y)
    for (int x = 0; x < grid.width(); ++x)
      if (grid.at(x, y) >= obstacle_threshold) img.set(x, y, palette::obstacle);

  const int half = std::max(1, std::max(field.width, field.height) / 200);
  for (size_t i = 1; i < marks.path.size(); ++i)
    img.line(marks.path[i - 1], marks.path[i], palette::path);
  for (const auto& w : marks.waypoints) img.stamp(w.x, w.y, half, palette::waypoint);
  if (marks.source) img.stamp(marks.source->x, marks.source->y, half + 1, palette::source);
  if (marks.start) img.stamp(marks.start->x, marks.start->y, half + 1, palette::start);
  if (marks.target) img.stamp(marks.target->x, marks.target->y, half + 1, palette::target);
  return img;
}

inline Image render_overlay(const BinaryMask& mask, const OccupancyGrid& grid,
                            const OverlayMarks& marks = {}) {
  VisibilityField f(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) f.values[f.index(x, y)] = mask.at(x, y) ? 1.0 : 0.0;
  return render_overlay(f, grid, marks);
}

}  // namespace gridvis
