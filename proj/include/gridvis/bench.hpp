// Timing sweeps of the visibility engine against the ray-casting baseline.
//
// Both methods time the same seeded map per size, source at the grid center.
// Timed region: the visibility kernel (or the full per-cell ray sweep) into a
// preallocated buffer. Map generation, the occupancy complement, and I/O are
// input preparation and stay outside the clock; one warmup run per
// (method, size) is discarded.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gridvis/grid.hpp"
#include "gridvis/mapgen.hpp"
#include "gridvis/raycast.hpp"
#include "gridvis/visibility.hpp"

namespace gridvis {

enum class BenchMethod { engine, raycast };

inline const char* to_string(BenchMethod m) {
  return m == BenchMethod::engine ? "engine" : "raycast";
}

struct BenchConfig {
  std::vector<int> sizes;  // grid side lengths, ascending
  int repetitions = 5;
  MapKind map_kind = MapKind::empty;
  double density = 0.0;
  uint64_t seed = 1;
  std::vector<BenchMethod> methods = {BenchMethod::engine, BenchMethod::raycast};
  int threads = 1;
  // Sizes whose working set would exceed this are skipped with a warning
  // record instead of thrashing the machine.
  size_t memory_cap_bytes = size_t(4) << 30;

  void validate() const {
    if (sizes.empty()) throw std::invalid_argument("BenchConfig: no sizes");
    if (!std::is_sorted(sizes.begin(), sizes.end()))
      throw std::invalid_argument("BenchConfig: sizes must be ascending");
    if (repetitions < 1) throw std::invalid_argument("BenchConfig: repetitions must be >= 1");
    if (methods.empty()) throw std::invalid_argument("BenchConfig: no methods");
  }
};

struct BenchRecord {
  BenchMethod method = BenchMethod::engine;
  int n_side = 0;
  size_t n_cells = 0;
  int repetitions = 0;
  double median_s = 0.0;
  double mean_s = 0.0;
  double stddev_s = 0.0;
  double ops_per_cell = 0.0;  // engine only, from an instrumented shadow run
  int threads = 1;
  MapKind map_kind = MapKind::empty;
  uint64_t seed = 0;
  bool skipped = false;  // over the memory cap; timings are meaningless
};

namespace detail {

struct TimingStats {
  double median, mean, stddev;
};

inline TimingStats summarize(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const size_t n = samples.size();
  const double median =
      n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= double(n);
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  const double stddev = n > 1 ? std::sqrt(var / double(n - 1)) : 0.0;
  return {median, mean, stddev};
}

}  // namespace detail

inline std::vector<BenchRecord> run_sweep(const BenchConfig& config) {
  config.validate();
  using clock = std::chrono::steady_clock;
  std::vector<BenchRecord> records;

  for (int side : config.sizes) {
    const size_t n = size_t(side) * size_t(side);
    BenchRecord base;
    base.n_side = side;
    base.n_cells = n;
    base.repetitions = config.repetitions;
    base.threads = config.threads;
    base.map_kind = config.map_kind;
    base.seed = config.seed;

    // field + complement + mask, in doubles-equivalent terms
    const size_t bytes_needed = n * (8 + 8 + 8 + 1);
    if (bytes_needed > config.memory_cap_bytes) {
      for (BenchMethod m : config.methods) {
        BenchRecord r = base;
        r.method = m;
        r.skipped = true;
        records.push_back(r);
      }
      continue;
    }

    const MapSpec spec{config.map_kind, config.seed, config.density, side, side};
    const OccupancyGrid grid = generate_map(spec).grid;
    const OccupancyGrid occ_complement = complement(grid);
    const GridPoint source{side / 2, side / 2};
    const VisParams vis{};

    for (BenchMethod m : config.methods) {
      BenchRecord r = base;
      r.method = m;
      std::vector<double> samples;
      samples.reserve(size_t(config.repetitions));
      if (m == BenchMethod::engine) {
        std::vector<double> field(n);
        for (int rep = -1; rep < config.repetitions; ++rep) {
          const auto t0 = clock::now();
          compute_visibility_into(field, occ_complement, source, vis, config.threads);
          const auto t1 = clock::now();
          if (rep >= 0) samples.push_back(std::chrono::duration<double>(t1 - t0).count());
        }
        OpCounts ops;
        compute_visibility_counted(grid, source, vis, ops);
        r.ops_per_cell = ops.per_cell();
      } else {
        BinaryMask mask(side, side);
        for (int rep = -1; rep < config.repetitions; ++rep) {
          const auto t0 = clock::now();
          raycast_map_into(mask, grid, source, default_block_threshold, config.threads);
          const auto t1 = clock::now();
          if (rep >= 0) samples.push_back(std::chrono::duration<double>(t1 - t0).count());
        }
      }
      const auto stats = detail::summarize(std::move(samples));
      r.median_s = stats.median;
      r.mean_s = stats.mean;
      r.stddev_s = stats.stddev;
      records.push_back(r);
    }
  }
  return records;
}

// Least-squares slope of log(median time) against log(cell count) for one
// method; needs at least three usable records.
inline double loglog_slope(const std::vector<BenchRecord>& records, BenchMethod method) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : records)
    if (r.method == method && !r.skipped && r.median_s > 0.0)
      pts.emplace_back(std::log(double(r.n_cells)), std::log(r.median_s));
  if (pts.size() < 3)
    throw std::invalid_argument("loglog_slope: need at least 3 records for the method");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = double(pts.size());
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

// Appends records as CSV; writes the metadata comment and header row only
// when the stream is at offset zero, so repeated appends stay well-formed.
inline void write_csv(const std::vector<BenchRecord>& records, std::ostream& out,
                      bool write_header) {
  if (write_header) {
    out << "# gridvis bench: timed region is the visibility kernel / ray sweep only;\n"
           "# map generation, occupancy complement, and I/O are excluded.\n"
           "method,n_side,n_cells,reps,median_s,mean_s,stddev_s,ops_per_cell,threads,map_kind,seed,"
           "skipped\n";
  }
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf);
  };
  for (const auto& r : records) {
    out << to_string(r.method) << ',' << r.n_side << ',' << r.n_cells << ',' << r.repetitions << ','
        << fmt(r.median_s) << ',' << fmt(r.mean_s) << ',' << fmt(r.stddev_s) << ','
        << fmt(r.ops_per_cell) << ',' << r.threads << ',' << to_string(r.map_kind) << ',' << r.seed
        << ',' << (r.skipped ? 1 : 0) << '\n';
  }
}

inline void append_csv(const std::vector<BenchRecord>& records, const std::filesystem::path& path) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_csv(records, out, fresh);
}

}  // namespace gridvis
