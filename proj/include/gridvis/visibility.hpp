// Single-pass visibility fields over occupancy grids.
//
// The visibility quantity u in [0,1] is transported outward from the source
// by a first-order upwind solve of the linear advection equation. The grid is
// covered by four independent quadrant sweeps plus the four axis rays and the
// origin; every cell is written exactly once. Within a quadrant, a cell at
// offsets (i, j) from the source is updated along its dominant direction:
//
//     x-swept  (j*dy <  i*dx):  v = (1-C) * u(x-sx, y) + C * u(x-sx, y-sy),
//                               C = j*dy / (i*dx)
//     y-swept  (j*dy >  i*dx):  v = (1-C) * u(x, y-sy) + C * u(x-sx, y-sy),
//                               C = i*dx / (j*dy)
//     diagonal (j*dy == i*dx):  v = u(x-sx, y-sy)
//
// choosing the orientation keeps the Courant number C in [0,1], so every
// update is a convex combination of two upstream values. The transported
// value is then scaled by the cell's occupancy complement and by the decay
// factor alpha; with light_strength <= 1 every output stays in
// [0, light_strength].
//
// Curvilinear fields replace the radial ratio j/i by a per-cell slope taken
// from a FlowFieldSpec, turning lines-of-sight into curves-of-sight.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "gridvis/grid.hpp"

namespace gridvis {

struct VisParams {
  double light_strength = 1.0;  // initial value at the source, in [0,1]
  double alpha = 1.0;           // per-cell decay factor, in (0,1]
  double dx = 1.0;
  double dy = 1.0;
  double threshold = 0.5;  // default binarization threshold, in (0,1)

  void validate() const {
    if (!(light_strength >= 0.0 && light_strength <= 1.0))
      throw std::invalid_argument("VisParams: light_strength must be in [0,1]");
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw std::invalid_argument("VisParams: alpha must be in (0,1]");
    if (!(dx > 0.0) || !(dy > 0.0))
      throw std::invalid_argument("VisParams: step sizes must be positive");
    if (!(threshold > 0.0 && threshold < 1.0))
      throw std::invalid_argument("VisParams: threshold must be in (0,1)");
  }
};

struct VisibilityField {
  int width = 0;
  int height = 0;
  std::vector<double> values;
  std::optional<GridPoint> source;  // absent for aggregated fields
  VisParams params;

  VisibilityField() = default;
  VisibilityField(int w, int h, double fill = 0.0)
      : width(w), height(h), values(size_t(w) * size_t(h), fill) {}

  size_t index(int x, int y) const noexcept { return size_t(y) * width + x; }
  double at(int x, int y) const { return values[index(x, y)]; }
  double at(GridPoint p) const { return at(p.x, p.y); }
  bool in_bounds(int x, int y) const noexcept {
    return unsigned(x) < unsigned(width) && unsigned(y) < unsigned(height);
  }
};

// Tally of value arithmetic performed by an instrumented transport run.
struct OpCounts {
  uint64_t adds = 0, subs = 0, muls = 0, divs = 0;
  uint64_t cells = 0;
  uint64_t total() const noexcept { return adds + subs + muls + divs; }
  double per_cell() const noexcept { return cells ? double(total()) / double(cells) : 0.0; }
};

// Direction field driving the transport. The slope c = b/a is the ray slope
// dy/dx at a cell, expressed relative to the source.
class FlowFieldSpec {
 public:
  enum class Kind { radial, scaled_radial, tabulated };

  static FlowFieldSpec radial() { return FlowFieldSpec(Kind::radial, 1.0); }

  // c(x, y) = y / (k * x)
  static FlowFieldSpec scaled_radial(double k) {
    if (!(k > 0.0)) throw std::invalid_argument("FlowFieldSpec: scale must be positive");
    return FlowFieldSpec(Kind::scaled_radial, k);
  }

  // Per-cell direction components (a = x-component, b = y-component).
  static FlowFieldSpec tabulated(int width, int height, std::vector<double> a, std::vector<double> b) {
    if (width <= 0 || height <= 0)
      throw std::invalid_argument("FlowFieldSpec: dimensions must be positive");
    const size_t n = size_t(width) * size_t(height);
    if (a.size() != n || b.size() != n)
      throw std::invalid_argument("FlowFieldSpec: component arrays must match dimensions");
    for (size_t i = 0; i < n; ++i) {
      if (!std::isfinite(a[i]) || !std::isfinite(b[i]))
        throw std::invalid_argument("FlowFieldSpec: components must be finite");
      if (a[i] == 0.0 && b[i] == 0.0)
        throw std::invalid_argument("FlowFieldSpec: zero direction at cell (" +
                                    std::to_string(i % size_t(width)) + "," +
                                    std::to_string(i / size_t(width)) + ")");
    }
    FlowFieldSpec f(Kind::tabulated, 1.0);
    f.width_ = width;
    f.height_ = height;
    f.a_ = std::move(a);
    f.b_ = std::move(b);
    return f;
  }

  Kind kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double a_at(int x, int y) const { return a_[size_t(y) * width_ + x]; }
  double b_at(int x, int y) const { return b_[size_t(y) * width_ + x]; }

 private:
  FlowFieldSpec(Kind k, double s) : kind_(k), scale_(s) {}
  Kind kind_;
  double scale_;
  int width_ = 0, height_ = 0;
  std::vector<double> a_, b_;
};

// Normalized radial direction components at offset (x, y) from the source.
inline std::pair<double, double> radial_direction(double x, double y) {
  const double r = std::sqrt(x * x + y * y);
  return {x / r, y / r};
}

namespace detail {

struct RadialSlope {
  template <int SX, int SY>
  struct Quadrant {
    std::pair<double, double> operator()(int i, int j, int, int) const {
      return {double(i), double(j)};
    }
  };
  template <int SX, int SY>
  Quadrant<SX, SY> quadrant() const {
    return {};
  }
};

struct ScaledRadialSlope {
  double k;
  template <int SX, int SY>
  struct Quadrant {
    double k;
    std::pair<double, double> operator()(int i, int j, int, int) const {
      return {k * double(i), double(j)};
    }
  };
  template <int SX, int SY>
  Quadrant<SX, SY> quadrant() const {
    return {k};
  }
};

struct TabulatedSlope {
  const FlowFieldSpec* flow;
  template <int SX, int SY>
  struct Quadrant {
    const FlowFieldSpec* flow;
    std::pair<double, double> operator()(int, int, int x, int y) const {
      return {flow->a_at(x, y) * SX, flow->b_at(x, y) * SY};
    }
  };
  template <int SX, int SY>
  Quadrant<SX, SY> quadrant() const {
    return {flow};
  }
};

template <bool Count>
inline void count_ops(OpCounts* ops, uint64_t adds, uint64_t subs, uint64_t muls, uint64_t divs) {
  if constexpr (Count) {
    ops->adds += adds;
    ops->subs += subs;
    ops->muls += muls;
    ops->divs += divs;
    ++ops->cells;
  }
}

// Interior sweep of one quadrant in raster order moving away from the source.
// Axis cells (i == 0 or j == 0) are written beforehand by transport_axes.
template <int SX, int SY, bool Count, class QuadrantSlope>
void sweep_quadrant(double* u, const double* o, int nx, int ny, GridPoint src,
                    const VisParams& p, const QuadrantSlope& slope, OpCounts* ops) {
  const int mx = SX > 0 ? nx - 1 - src.x : src.x;
  const int my = SY > 0 ? ny - 1 - src.y : src.y;
  for (int j = 1; j <= my; ++j) {
    const int y = src.y + SY * j;
    double* row = u + size_t(y) * nx;
    const double* prev = u + size_t(y - SY) * nx;
    const double* orow = o + size_t(y) * nx;
    for (int i = 1; i <= mx; ++i) {
      const int x = src.x + SX * i;
      const auto [den, num] = slope(i, j, x, y);
      const double cross = num * p.dy;   // characteristic rise over one x step
      const double run = den * p.dx;
      double v;
      if (cross < run) {
        const double courant = cross / run;
        const double near = row[x - SX];
        const double far = prev[x - SX];
        v = near - courant * (near - far);
        count_ops<Count>(ops, 0, 2, 5, 1);
      } else if (cross > run) {
        const double courant = run / cross;
        const double near = prev[x];
        const double far = prev[x - SX];
        v = near - courant * (near - far);
        count_ops<Count>(ops, 0, 2, 5, 1);
      } else {
        v = prev[x - SX];
        count_ops<Count>(ops, 0, 0, 4, 0);
      }
      row[x] = v * orow[x] * p.alpha;
    }
  }
}

template <bool Count>
void transport_axes(double* u, const double* o, int nx, int ny, GridPoint src,
                    const VisParams& p, OpCounts* ops) {
  const size_t origin = size_t(src.y) * nx + src.x;
  u[origin] = p.light_strength * o[origin] * p.alpha;
  count_ops<Count>(ops, 0, 0, 2, 0);
  for (int x = src.x + 1; x < nx; ++x) {
    const size_t idx = origin + (x - src.x);
    u[idx] = u[idx - 1] * o[idx] * p.alpha;
    count_ops<Count>(ops, 0, 0, 2, 0);
  }
  for (int x = src.x - 1; x >= 0; --x) {
    const size_t idx = origin - (src.x - x);
    u[idx] = u[idx + 1] * o[idx] * p.alpha;
    count_ops<Count>(ops, 0, 0, 2, 0);
  }
  for (int y = src.y + 1; y < ny; ++y) {
    const size_t idx = size_t(y) * nx + src.x;
    u[idx] = u[idx - nx] * o[idx] * p.alpha;
    count_ops<Count>(ops, 0, 0, 2, 0);
  }
  for (int y = src.y - 1; y >= 0; --y) {
    const size_t idx = size_t(y) * nx + src.x;
    u[idx] = u[idx + nx] * o[idx] * p.alpha;
    count_ops<Count>(ops, 0, 0, 2, 0);
  }
}

template <bool Count, class Slope>
void transport_field(double* u, const double* o, int nx, int ny, GridPoint src,
                     const VisParams& p, const Slope& slope, OpCounts* ops, int threads) {
  transport_axes<Count>(u, o, nx, ny, src, p, ops);
  const auto q_pp = [&, s = slope.template quadrant<+1, +1>()] {
    sweep_quadrant<+1, +1, Count>(u, o, nx, ny, src, p, s, ops);
  };
  const auto q_np = [&, s = slope.template quadrant<-1, +1>()] {
    sweep_quadrant<-1, +1, Count>(u, o, nx, ny, src, p, s, ops);
  };
  const auto q_pn = [&, s = slope.template quadrant<+1, -1>()] {
    sweep_quadrant<+1, -1, Count>(u, o, nx, ny, src, p, s, ops);
  };
  const auto q_nn = [&, s = slope.template quadrant<-1, -1>()] {
    sweep_quadrant<-1, -1, Count>(u, o, nx, ny, src, p, s, ops);
  };
  // The four interiors touch disjoint cells and read only their own interior,
  // the axes written above, and the shared origin row/column, so they can run
  // concurrently. The instrumented path stays serial (shared counter).
  if (!Count && threads > 1) {
    std::thread t1(q_pp), t2(q_np), t3(q_pn);
    q_nn();
    t1.join();
    t2.join();
    t3.join();
  } else {
    q_pp();
    q_np();
    q_pn();
    q_nn();
  }
}

}  // namespace detail

// Core entry point operating directly on an occupancy *complement* grid and a
// caller-provided output buffer; used by the planner and the benchmark
// harness to avoid reallocation. `out` must hold width*height values.
inline void compute_visibility_into(std::span<double> out, const OccupancyGrid& occ_complement,
                                    GridPoint source, const VisParams& params, int threads = 1) {
  params.validate();
  if (!occ_complement.in_bounds(source))
    throw std::invalid_argument("compute_visibility: source out of bounds");
  if (out.size() != occ_complement.cell_count())
    throw std::invalid_argument("compute_visibility: output buffer size mismatch");
  detail::transport_field<false>(out.data(), occ_complement.cells().data(), occ_complement.width(),
                                 occ_complement.height(), source, params, detail::RadialSlope{},
                                 nullptr, threads);
}

inline VisibilityField compute_visibility(const OccupancyGrid& grid, GridPoint source,
                                          const VisParams& params = {}, int threads = 1) {
  const OccupancyGrid o = complement(grid);
  VisibilityField f(grid.width(), grid.height());
  f.source = source;
  f.params = params;
  compute_visibility_into(f.values, o, source, params, threads);
  return f;
}

// Instrumented variant: same values, plus a tally of the value arithmetic.
inline VisibilityField compute_visibility_counted(const OccupancyGrid& grid, GridPoint source,
                                                  const VisParams& params, OpCounts& ops) {
  params.validate();
  if (!grid.in_bounds(source)) throw std::invalid_argument("compute_visibility: source out of bounds");
  const OccupancyGrid o = complement(grid);
  VisibilityField f(grid.width(), grid.height());
  f.source = source;
  f.params = params;
  ops = OpCounts{};
  detail::transport_field<true>(f.values.data(), o.cells().data(), grid.width(), grid.height(),
                                source, params, detail::RadialSlope{}, &ops, 1);
  return f;
}

inline VisibilityField compute_visibility_curvilinear(const OccupancyGrid& grid, GridPoint source,
                                                      const FlowFieldSpec& flow,
                                                      const VisParams& params = {}, int threads = 1) {
  params.validate();
  if (!grid.in_bounds(source))
    throw std::invalid_argument("compute_visibility_curvilinear: source out of bounds");

  const OccupancyGrid o = complement(grid);
  VisibilityField f(grid.width(), grid.height());
  f.source = source;
  f.params = params;
  double* u = f.values.data();
  const double* oc = o.cells().data();

  switch (flow.kind()) {
    case FlowFieldSpec::Kind::radial:
      detail::transport_field<false>(u, oc, grid.width(), grid.height(), source, params,
                                     detail::RadialSlope{}, nullptr, threads);
      break;
    case FlowFieldSpec::Kind::scaled_radial:
      detail::transport_field<false>(u, oc, grid.width(), grid.height(), source, params,
                                     detail::ScaledRadialSlope{flow.scale()}, nullptr, threads);
      break;
    case FlowFieldSpec::Kind::tabulated: {
      if (flow.width() != grid.width() || flow.height() != grid.height())
        throw std::invalid_argument("compute_visibility_curvilinear: flow dimensions mismatch");
      // Transport pulls from the source side, so off-axis direction components
      // must point away from the source; otherwise no update orientation has a
      // Courant number in [0,1].
      for (int y = 0; y < grid.height(); ++y)
        for (int x = 0; x < grid.width(); ++x) {
          if (x == source.x || y == source.y) continue;
          const double a_loc = flow.a_at(x, y) * (x > source.x ? 1 : -1);
          const double b_loc = flow.b_at(x, y) * (y > source.y ? 1 : -1);
          if (a_loc < 0.0 || b_loc < 0.0)
            throw std::invalid_argument(
                "compute_visibility_curvilinear: flow violates the CFL condition at cell (" +
                std::to_string(x) + "," + std::to_string(y) + ")");
        }
      detail::transport_field<false>(u, oc, grid.width(), grid.height(), source, params,
                                     detail::TabulatedSlope{&flow}, nullptr, threads);
      break;
    }
  }
  return f;
}

inline BinaryMask binarize(const VisibilityField& field, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("binarize: threshold must be in (0,1)");
  BinaryMask m(field.width, field.height);
  for (int y = 0; y < field.height; ++y)
    for (int x = 0; x < field.width; ++x) m.set(x, y, field.at(x, y) >= threshold);
  return m;
}

namespace detail {
inline void check_same_dims(std::span<const VisibilityField> fields, const char* what) {
  if (fields.empty()) throw std::invalid_argument(std::string(what) + ": needs at least one field");
  for (const auto& f : fields)
    if (f.width != fields.front().width || f.height != fields.front().height)
      throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}
}  // namespace detail

// Per-cell minimum: the region visible from every input source.
inline VisibilityField intersect(std::span<const VisibilityField> fields) {
  detail::check_same_dims(fields, "intersect");
  VisibilityField out = fields.front();
  out.source.reset();
  for (size_t k = 1; k < fields.size(); ++k)
    for (size_t i = 0; i < out.values.size(); ++i)
      out.values[i] = std::min(out.values[i], fields[k].values[i]);
  return out;
}

// In-place per-cell maximum, for iterative accumulation of a union field.
inline void accumulate_max(VisibilityField& acc, const VisibilityField& f) {
  if (acc.width != f.width || acc.height != f.height)
    throw std::invalid_argument("accumulate_max: dimension mismatch");
  for (size_t i = 0; i < acc.values.size(); ++i)
    acc.values[i] = std::max(acc.values[i], f.values[i]);
  acc.source.reset();
}

// Per-cell maximum: the region visible from at least one input source.
inline VisibilityField union_of(std::span<const VisibilityField> fields) {
  detail::check_same_dims(fields, "union_of");
  VisibilityField out = fields.front();
  out.source.reset();
  for (size_t k = 1; k < fields.size(); ++k) accumulate_max(out, fields[k]);
  return out;
}

}  // namespace gridvis
