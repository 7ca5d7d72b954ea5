#pragma once

#include <algorithm>
#include <cmath>

#include "dbrp/types.hpp"

namespace dbrp {

/// Rasterization parameters shared by the occupancy index and pairwise validation.
struct GridSpec {
  double resolution = 100.0;  // cells per table unit
  int clearance = 1;          // cells of inflation around a placed footprint
};

/// Half-open cell rectangle [x0, x1) x [y0, y1).
struct CellRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  long area() const { return empty() ? 0L : static_cast<long>(width()) * height(); }

  CellRect inflated(int margin) const { return {x0 - margin, y0 - margin, x1 + margin, y1 + margin}; }

  CellRect clipped(int cols, int rows) const {
    return {std::max(x0, 0), std::max(y0, 0), std::min(x1, cols), std::min(y1, rows)};
  }

  bool intersects(const CellRect& o) const {
    return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
  }

  bool inside(int cols, int rows) const { return x0 >= 0 && y0 >= 0 && x1 <= cols && y1 <= rows; }

  friend bool operator==(const CellRect&, const CellRect&) = default;
};

/// std::lround semantics (half away from zero) without the libm call; v - trunc(v) is exact.
inline int round_cell(double v) {
  const int r = static_cast<int>(v);
  const double frac = v - r;
  return r + static_cast<int>(frac >= 0.5) - static_cast<int>(frac <= -0.5);
}

inline int cells_for(double extent, const GridSpec& grid) { return round_cell(extent * grid.resolution); }

/// Window covered by a footprint centred at `center`. The window width depends only on the
/// extent, so an object covers the same number of cells wherever it is placed.
inline CellRect footprint_cells(Point center, double width, double depth, const GridSpec& grid) {
  const int x0 = round_cell((center.x - width / 2.0) * grid.resolution);
  const int y0 = round_cell((center.y - depth / 2.0) * grid.resolution);
  return {x0, y0, x0 + cells_for(width, grid), y0 + cells_for(depth, grid)};
}

/// Centre of a footprint whose window starts at cell (cx, cy). Inverse of footprint_cells.
inline Point window_center(int cx, int cy, double width, double depth, const GridSpec& grid) {
  return {cx / grid.resolution + width / 2.0, cy / grid.resolution + depth / 2.0};
}

inline int table_cols(const Table& t, const GridSpec& grid) { return cells_for(t.width, grid); }
inline int table_rows(const Table& t, const GridSpec& grid) { return cells_for(t.height, grid); }

}  // namespace dbrp
