// Visibility-heuristic any-angle planner and explorer.
//
// The planner grows a set of waypoints W. Each iteration evaluates the
// visibility field of the current waypoint, folds it into the running union
// field (per-cell max), and hands every cell that just crossed the visibility
// threshold to a min-heap frontier keyed by
//
//     H = d_parent + d_target + kappa * union_value
//
// so the next waypoint is a cheap-to-reach, barely-visible cell. Parents are
// write-once: the waypoint whose field first revealed a cell stays its parent
// forever, which keeps parent chains acyclic and lets the final path be read
// straight out of the parent map. Frontier entries are never re-keyed; an
// entry is dropped on pop if its cell already became a waypoint or lies
// inside an obstacle.
//
// Target-seeking mode stops once the union value at the target reaches the
// threshold; exploration mode (d_target = 0) stops when the frontier is
// exhausted. Both stop at the iteration cap.

#pragma once

#include <functional>
#include <optional>
#include <queue>
#include <vector>

#include "gridvis/grid.hpp"
#include "gridvis/raycast.hpp"
#include "gridvis/visibility.hpp"

namespace gridvis {

enum class PlanMode { target_seeking, exploration };
enum class PlanStatus { reached, explored, exhausted };

inline const char* to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::reached: return "reached";
    case PlanStatus::explored: return "explored";
    case PlanStatus::exhausted: return "exhausted";
  }
  return "?";
}

struct PlannerParams {
  double threshold = 0.5;      // union value at which a cell counts as seen
  size_t max_iterations = 0;   // 0 = auto: 10000 when target-seeking, else grid size
  std::optional<double> kappa; // visibility weight; defaults to n_x + n_y
  PlanMode mode = PlanMode::target_seeking;

  void validate() const {
    if (!(threshold > 0.0 && threshold < 1.0))
      throw std::invalid_argument("PlannerParams: threshold must be in (0,1)");
    if (kappa && !(*kappa >= 0.0))
      throw std::invalid_argument("PlannerParams: kappa must be nonnegative");
  }
};

struct PlannerState {
  std::vector<GridPoint> waypoints;
  VisibilityField union_field;
  // Flat parent map: cell index of the waypoint that first saw the cell, or
  // -1. The start cell has no parent.
  std::vector<int64_t> parents;
  size_t iterations = 0;

  bool has_parent(GridPoint p) const {
    return parents[union_field.index(p.x, p.y)] >= 0;
  }
};

struct PlanResult {
  PlanStatus status = PlanStatus::exhausted;
  std::vector<GridPoint> path;  // present iff status == reached
  double coverage = 0.0;        // fraction of free cells at or above threshold
  PlannerState state;
};

// H = d_parent + d_target + kappa * union_value. In exploration mode the
// target is absent and contributes nothing.
inline double heuristic_value(GridPoint candidate, GridPoint parent,
                              std::optional<GridPoint> target, double union_value, double kappa) {
  const double d_parent = euclidean_distance(candidate, parent);
  const double d_target = target ? euclidean_distance(candidate, *target) : 0.0;
  return d_parent + d_target + kappa * union_value;
}

// Walks parent links from target back to the start and reverses. The target
// must be the start itself or have a parent assigned by a plan() run.
inline std::vector<GridPoint> extract_path(const PlannerState& state, GridPoint target) {
  const auto& field = state.union_field;
  if (!field.in_bounds(target.x, target.y))
    throw std::invalid_argument("extract_path: target out of bounds");
  std::vector<GridPoint> path;
  GridPoint cur = target;
  const size_t cap = state.parents.size() + 1;
  while (true) {
    path.push_back(cur);
    if (path.size() > cap) throw std::logic_error("extract_path: parent chain cycle");
    const int64_t p = state.parents[field.index(cur.x, cur.y)];
    if (p < 0) break;
    cur = GridPoint{int(p % field.width), int(p / field.width)};
  }
  if (!state.waypoints.empty() && path.back() != state.waypoints.front())
    throw std::invalid_argument("extract_path: target was never seen by a waypoint");
  std::reverse(path.begin(), path.end());
  return path;
}

namespace detail {

struct FrontierEntry {
  double h;
  int y, x;
  uint64_t seq;
};
struct FrontierOrder {
  bool operator()(const FrontierEntry& a, const FrontierEntry& b) const {
    if (a.h != b.h) return a.h > b.h;
    if (a.y != b.y) return a.y > b.y;
    if (a.x != b.x) return a.x > b.x;
    return a.seq > b.seq;
  }
};

}  // namespace detail

inline PlanResult plan(const OccupancyGrid& grid, GridPoint start, std::optional<GridPoint> target,
                       const VisParams& vis_params, const PlannerParams& params,
                       const std::function<void(const PlannerState&, GridPoint)>& on_iteration = {}) {
  vis_params.validate();
  params.validate();
  if (!grid.in_bounds(start)) throw std::invalid_argument("plan: start out of bounds");
  if (grid.at(start) >= default_block_threshold)
    throw std::invalid_argument("plan: start cell is blocked");
  const bool seeking = params.mode == PlanMode::target_seeking;
  if (seeking && !target) throw std::invalid_argument("plan: target required in target-seeking mode");
  if (!seeking && target) throw std::invalid_argument("plan: target given in exploration mode");
  if (target && !grid.in_bounds(*target)) throw std::invalid_argument("plan: target out of bounds");

  const int nx = grid.width(), ny = grid.height();
  const size_t n = grid.cell_count();
  const double kappa = params.kappa ? *params.kappa : double(nx + ny);
  const size_t max_iters = params.max_iterations ? params.max_iterations : (seeking ? 10000 : n);

  PlanResult result;
  PlannerState& st = result.state;
  st.union_field = VisibilityField(nx, ny, 0.0);
  st.union_field.params = vis_params;
  st.parents.assign(n, -1);

  auto finish = [&](PlanStatus status) {
    result.status = status;
    size_t free_cells = 0, seen = 0;
    for (size_t i = 0; i < n; ++i) {
      if (grid.cells()[i] < default_block_threshold) {
        ++free_cells;
        if (st.union_field.values[i] >= params.threshold) ++seen;
      }
    }
    result.coverage = free_cells ? double(seen) / double(free_cells) : 1.0;
    if (status == PlanStatus::reached) result.path = extract_path(st, *target);
    return result;
  };

  if (seeking && *target == start) {
    result.status = PlanStatus::reached;
    result.path = {start};
    return result;
  }

  const OccupancyGrid occ_complement = complement(grid);
  std::vector<double> buf(n);
  std::vector<uint8_t> is_waypoint(n, 0);
  std::priority_queue<detail::FrontierEntry, std::vector<detail::FrontierEntry>, detail::FrontierOrder>
      frontier;
  uint64_t seq = 0;
  const size_t target_idx = target ? st.union_field.index(target->x, target->y) : 0;

  GridPoint w = start;
  while (st.iterations < max_iters) {
    st.waypoints.push_back(w);
    const size_t w_idx = st.union_field.index(w.x, w.y);
    is_waypoint[w_idx] = 1;

    compute_visibility_into(buf, occ_complement, w, vis_params);

    // Fold into the union field; cells crossing the threshold now get their
    // parent and frontier entry, keyed with the union value at crossing time.
    double* uni = st.union_field.values.data();
    for (int y = 0; y < ny; ++y) {
      const size_t row = size_t(y) * nx;
      for (int x = 0; x < nx; ++x) {
        const size_t i = row + x;
        const double v = buf[i];
        if (v > uni[i]) {
          if (uni[i] < params.threshold && v >= params.threshold && i != w_idx) {
            st.parents[i] = int64_t(w_idx);
            frontier.push({heuristic_value({x, y}, w, target, v, kappa), y, x, seq++});
          }
          uni[i] = v;
        }
      }
    }
    ++st.iterations;
    if (on_iteration) on_iteration(st, w);

    if (seeking && uni[target_idx] >= params.threshold) return finish(PlanStatus::reached);

    // Next waypoint: frontier minimum, skipping entries that became waypoints
    // and entries inside obstacles.
    bool found = false;
    while (!frontier.empty()) {
      const auto e = frontier.top();
      frontier.pop();
      const size_t i = size_t(e.y) * nx + e.x;
      if (is_waypoint[i]) continue;
      if (grid.cells()[i] >= default_block_threshold) continue;
      w = GridPoint{e.x, e.y};
      found = true;
      break;
    }
    if (!found) return finish(seeking ? PlanStatus::exhausted : PlanStatus::explored);
  }
  return finish(PlanStatus::exhausted);
}

}  // namespace gridvis
