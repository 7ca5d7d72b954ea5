#include "dbrp/geometry.hpp"

#include <algorithm>
#include <unordered_set>

namespace dbrp {

OccupancyIndex::OccupancyIndex(GridSpec grid, int cols, int rows)
    : grid_(grid),
      cols_(cols),
      rows_(rows),
      occ_(static_cast<std::size_t>(cols) * rows, 0),
      sat_(static_cast<std::size_t>(cols + 1) * (rows + 1), 0) {}

void OccupancyIndex::mark(const CellRect& r) {
  const CellRect c = r.clipped(cols_, rows_);
  for (int y = c.y0; y < c.y1; ++y) {
    std::fill_n(occ_.begin() + static_cast<std::ptrdiff_t>(y) * cols_ + c.x0, std::max(c.width(), 0), 1);
  }
}

void OccupancyIndex::rebuild_sat() {
  const int stride = cols_ + 1;
  for (int y = 0; y < rows_; ++y) {
    std::int32_t row_sum = 0;
    const std::uint8_t* src = occ_.data() + static_cast<std::size_t>(y) * cols_;
    std::int32_t* above = sat_.data() + static_cast<std::size_t>(y) * stride;
    std::int32_t* dst = above + stride;
    for (int x = 0; x < cols_; ++x) {
      row_sum += src[x];
      dst[x + 1] = above[x + 1] + row_sum;
    }
  }
}

OccupancyIndex build_index(const SceneState& s, std::optional<std::size_t> exclude, const GridSpec& grid) {
  OccupancyIndex idx(grid, table_cols(s.table, grid), table_rows(s.table, grid));
  for (std::size_t i = 0; i < s.size(); ++i) {
    const CellRect r = s.cells(i, grid);
    if (r.empty()) throw ResolutionTooCoarse("object '" + s.object(i).id + "' rasterizes to zero cells");
    if (!s.is_root(i) || (exclude && *exclude == i)) continue;
    idx.mark(r);
  }
  idx.rebuild_sat();
  return idx;
}

namespace {

struct WindowRange {
  int w = 0;
  int h = 0;
  int max_x = -1;  // inclusive origin range
  int max_y = -1;
};

WindowRange window_range(const OccupancyIndex& idx, Footprint fp) {
  WindowRange r;
  r.w = cells_for(fp.width, idx.grid());
  r.h = cells_for(fp.depth, idx.grid());
  if (r.w <= 0 || r.h <= 0) return r;
  r.max_x = idx.cols() - r.w;
  r.max_y = idx.rows() - r.h;
  return r;
}

}  // namespace

std::vector<Point> free_positions(const OccupancyIndex& idx, Footprint fp) {
  std::vector<Point> out;
  const WindowRange wr = window_range(idx, fp);
  for (int y = 0; y <= wr.max_y; ++y) {
    for (int x = 0; x <= wr.max_x; ++x) {
      if (is_window_free(idx, {x, y, x + wr.w, y + wr.h})) {
        out.push_back(window_center(x, y, fp.width, fp.depth, idx.grid()));
      }
    }
  }
  return out;
}

std::vector<Point> sample_free_positions(const OccupancyIndex& idx, Footprint fp, std::size_t k, Rng& rng) {
  std::vector<Point> out;
  if (k == 0) return out;
  const WindowRange wr = window_range(idx, fp);
  if (wr.max_x < 0 || wr.max_y < 0) return out;

  // Rejection probing is uniform over free windows and usually enough; fall back to full
  // enumeration when the table is crowded.
  std::uniform_int_distribution<int> ux(0, wr.max_x);
  std::uniform_int_distribution<int> uy(0, wr.max_y);
  std::unordered_set<long> seen;
  const std::size_t probes = 8 * k + 64;
  for (std::size_t p = 0; p < probes && out.size() < k; ++p) {
    const int x = ux(rng);
    const int y = uy(rng);
    const long key = static_cast<long>(y) * (wr.max_x + 1) + x;
    if (seen.count(key)) continue;
    if (!is_window_free(idx, {x, y, x + wr.w, y + wr.h})) continue;
    seen.insert(key);
    out.push_back(window_center(x, y, fp.width, fp.depth, idx.grid()));
  }
  if (out.size() == k) return out;

  std::vector<Point> all = free_positions(idx, fp);
  if (all.size() <= k) return all;
  // partial Fisher-Yates
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, all.size() - 1);
    std::swap(all[i], all[pick(rng)]);
  }
  all.resize(k);
  return all;
}

bool validate_action(const SceneState& s, const Action& a, const OccupancyIndex& occ) {
  if (a.object >= s.size()) return false;
  if (a.kind == ActionKind::Stack) return can_stack(s, a.object, a.base);
  const auto& o = s.object(a.object);
  return is_placement_free(occ, {o.width, o.depth}, a.to);
}

}  // namespace dbrp
