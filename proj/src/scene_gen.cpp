#include "dbrp/scene_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dbrp/geometry.hpp"

namespace dbrp {

double object_side(std::size_t n, double phi, const Table& table) {
  return std::sqrt(phi * table.width * table.height / static_cast<double>(n));
}

namespace {

// (top, base) pairs drawn object by object in random order.
std::vector<std::pair<std::size_t, std::size_t>> sample_stacks(const std::vector<ObjectSpec>& objects, double prob,
                                                               Rng& rng) {
  const std::size_t n = objects.size();
  std::vector<int> base_of(n, kNoBase);
  std::vector<int> item_on(n, kNoBase);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution coin(prob);

  const auto below = [&](std::size_t top, std::size_t other) {
    for (int b = base_of[other]; b != kNoBase; b = base_of[static_cast<std::size_t>(b)]) {
      if (static_cast<std::size_t>(b) == top) return true;
    }
    return false;
  };

  std::vector<std::pair<std::size_t, std::size_t>> stacks;
  for (std::size_t top : order) {
    if (!coin(rng)) continue;
    std::vector<std::size_t> bases;
    for (std::size_t b = 0; b < n; ++b) {
      if (b == top || item_on[b] != kNoBase || below(top, b)) continue;
      if (!stackable(objects[top].category, objects[b].category)) continue;
      bases.push_back(b);
    }
    if (bases.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, bases.size() - 1);
    const std::size_t b = bases[pick(rng)];
    base_of[top] = static_cast<int>(b);
    item_on[b] = static_cast<int>(top);
    stacks.emplace_back(top, b);
  }
  return stacks;
}

// Root positions placed one at a time in random order, each uniform over the free placements
// left by those before it; restarts from scratch when an object has nowhere to go.
std::vector<Point> sample_layout(const std::vector<ObjectSpec>& objects, const std::vector<bool>& is_root,
                                 const Table& table, const GridSpec& grid, int max_attempts, Rng& rng) {
  const std::size_t n = objects.size();
  const int cols = table_cols(table, grid);
  const int rows = table_rows(table, grid);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<Point> pos(n);
    OccupancyIndex idx(grid, cols, rows);
    idx.rebuild_sat();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    bool ok = true;
    for (std::size_t i : order) {
      if (!is_root[i]) continue;
      const Footprint fp{objects[i].width, objects[i].depth};
      const auto free = free_positions(idx, fp);
      if (free.empty()) {
        ok = false;
        break;
      }
      std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
      pos[i] = free[pick(rng)];
      idx.mark(footprint_cells(pos[i], fp.width, fp.depth, grid));
      idx.rebuild_sat();
    }
    if (ok) return pos;
  }
  throw GenerationFailed("no collision-free layout after " + std::to_string(max_attempts) + " attempts");
}

SceneState sample_scene(const std::vector<ObjectSpec>& objects, const GenConfig& cfg, const CostConfig& cc,
                        Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> stacks;
  if (cfg.with_stacks) stacks = sample_stacks(objects, cfg.stack_probability, rng);
  std::vector<bool> is_root(objects.size(), true);
  for (const auto& [top, base] : stacks) is_root[top] = false;
  std::vector<Point> pos = sample_layout(objects, is_root, cc.table, cfg.grid, cfg.max_attempts, rng);
  return make_scene(objects, cc.table, std::move(pos), stacks, cc.home, cfg.grid);
}

}  // namespace

ScenePair generate_pair(const GenConfig& cfg) {
  if (cfg.n == 0) throw InvalidScene("object count must be positive");
  if (!(cfg.phi > 0.0 && cfg.phi < 1.0)) throw InvalidScene("density must lie in (0, 1)");
  const CostConfig cc = CostConfig::for_mode(cfg.mode);
  Rng rng(cfg.seed);

  const double side = object_side(cfg.n, cfg.phi, cc.table);
  std::vector<ObjectSpec> objects(cfg.n);
  std::uniform_int_distribution<std::size_t> cat(0, kAllCategories.size() - 1);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    objects[i] = ObjectSpec{"o" + std::to_string(i), kAllCategories[cat(rng)], side, side};
  }

  ScenePair out;
  out.start = sample_scene(objects, cfg, cc, rng);
  out.target = sample_scene(objects, cfg, cc, rng);
  out.goal.goals.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    if (out.target.is_root(i)) {
      out.goal.goals.emplace_back(TargetPosition{out.target.positions[i]});
    } else {
      out.goal.goals.emplace_back(TargetStackOn{static_cast<std::size_t>(out.target.base_of[i])});
    }
  }
  return out;
}

}  // namespace dbrp
