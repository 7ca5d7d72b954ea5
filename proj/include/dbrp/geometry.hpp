#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "dbrp/scene.hpp"

namespace dbrp {

using Rng = std::mt19937_64;

/// Binary occupancy raster of root footprints plus its summed-area table.
///
/// `sat` has one extra leading row and column of zeros, so the count of occupied cells in
/// rows [0, r) and columns [0, c) is sat[r * (cols + 1) + c] and any rectangle costs four
/// lookups.
class OccupancyIndex {
 public:
  OccupancyIndex() = default;
  OccupancyIndex(GridSpec grid, int cols, int rows);

  const GridSpec& grid() const { return grid_; }
  int cols() const { return cols_; }
  int rows() const { return rows_; }

  bool occupied(int cx, int cy) const { return occ_[static_cast<std::size_t>(cy) * cols_ + cx] != 0; }

  /// Occupied cells in `r` after clipping to the table.
  long count(const CellRect& r) const {
    const CellRect c = r.clipped(cols_, rows_);
    if (c.empty()) return 0;
    return sat_at(c.y1, c.x1) - sat_at(c.y0, c.x1) - sat_at(c.y1, c.x0) + sat_at(c.y0, c.x0);
  }

  /// Cumulative count over rows [0, cy] and columns [0, cx] (inclusive).
  long prefix(int cx, int cy) const { return sat_at(cy + 1, cx + 1); }

  void mark(const CellRect& r);
  void rebuild_sat();

 private:
  long sat_at(int r, int c) const { return sat_[static_cast<std::size_t>(r) * (cols_ + 1) + c]; }

  GridSpec grid_;
  int cols_ = 0;
  int rows_ = 0;
  std::vector<std::uint8_t> occ_;
  std::vector<std::int32_t> sat_;
};

/// Marks every root footprint except `exclude` (a stacked object never occupies the table).
/// Throws ResolutionTooCoarse if a footprint covers no cell.
OccupancyIndex build_index(const SceneState& s, std::optional<std::size_t> exclude, const GridSpec& grid = {});

struct Footprint {
  double width = 0.0;
  double depth = 0.0;
};

/// Same test as is_placement_free for a window given directly in cells.
inline bool is_window_free(const OccupancyIndex& idx, const CellRect& window) {
  if (window.empty() || !window.inside(idx.cols(), idx.rows())) return false;
  return idx.count(window.inflated(idx.grid().clearance)) == 0;
}

/// True iff the footprint lies inside the table and its window, inflated by the clearance
/// margin, covers no occupied cell.
inline bool is_placement_free(const OccupancyIndex& idx, Footprint fp, Point at) {
  return is_window_free(idx, footprint_cells(at, fp.width, fp.depth, idx.grid()));
}

/// Every free placement, as window-aligned centres in row-major order.
std::vector<Point> free_positions(const OccupancyIndex& idx, Footprint fp);

/// Up to `k` distinct free placements drawn uniformly without replacement. Returns fewer only
/// when fewer exist. Deterministic for a given generator state.
std::vector<Point> sample_free_positions(const OccupancyIndex& idx, Footprint fp, std::size_t k, Rng& rng);

/// Move validity against an index built with `a.object` excluded.
bool validate_action(const SceneState& s, const Action& a, const OccupancyIndex& occ);

}  // namespace dbrp
